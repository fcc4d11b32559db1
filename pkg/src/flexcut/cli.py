"""``flexcut`` command line.

Every subcommand prints a human-readable summary, or JSON with ``--json``.
The exit code is 0 only when the verdicts / certificates involved pass.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import warnings
from pathlib import Path

from .counterexample import build_counterexample, run_gap_experiment
from .exact import BudgetExceeded, exact_min_cost_feasible
from .families import CutFamily, check_uncrossable, check_weakly_uncrossable
from .generators import generate_random_instance
from .graph import format_cost
from .model import FgcInstance, InfeasibleInstance, deficient_cuts, feasibility_text, is_feasible
from .pipeline import solve_p2fgc
from .primal_dual import FamilyOracle, Mode, run_primal_dual, verify_certificates
from .validation import check_instance, parse_edge_list


def instance_hash(inst: FgcInstance) -> str:
    return hashlib.sha256(inst.to_text().encode()).hexdigest()[:16]


def golden_line(inst: FgcInstance, edges, cost) -> str:
    return f"{instance_hash(inst)} {format_cost(cost)} {','.join(map(str, sorted(edges)))}"


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_verify(args) -> int:
    inst = check_instance(args.input, check=False)
    edges = parse_edge_list(args.edges)
    verdict = is_feasible(inst, edges, q=args.q, method=args.method)
    q = inst.q if args.q is None else args.q
    payload = {
        "p": inst.p,
        "q": q,
        "feasible": verdict.feasible,
        "witness": None if verdict.feasible else str(verdict.witness),
    }
    _emit(args, payload, f"({inst.p},{q}) {feasibility_text(verdict)}")
    return 0 if verdict.feasible else 1


def cmd_deficient(args) -> int:
    inst = check_instance(args.input, check=False)
    fam = deficient_cuts(inst, parse_edge_list(args.edges))
    if args.json:
        print(json.dumps({"shores": [s.sorted() for s in fam], "text": fam.to_text()}, indent=2))
    else:
        sys.stdout.write(fam.to_text())
    return 0


def cmd_solve(args) -> int:
    inst = check_instance(args.input)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = solve_p2fgc(inst, args.stage1, strict=False)
    payload = result.to_dict()
    payload["exact_opt"] = None
    if not args.no_opt:
        try:
            _, opt = exact_min_cost_feasible(inst, q=2)
            payload["exact_opt"] = format_cost(opt)
            payload["ratio"] = float(result.total_cost / opt) if opt else 1.0
        except BudgetExceeded as exc:
            payload["exact_opt"] = f"skipped: {exc}"
    if args.report:
        Path(args.report).write_text(json.dumps(payload, indent=2) + "\n")
    text = [
        f"branch       {result.parity_branch}",
        f"stage 1      {sorted(result.stage1_edges)} cost {format_cost(result.stage1_cost)}",
        f"augmentation {sorted(result.augmentation_edges)} cost {format_cost(result.augmentation_cost)}",
        f"total cost   {format_cost(result.total_cost)}",
        f"deficient    {len(result.family)} cuts",
        f"certificates {'PASS' if result.certificates.ok else 'FAIL'} (beta={result.certificates.beta})",
    ]
    if payload["exact_opt"] is not None:
        text.append(f"exact opt    {payload['exact_opt']}")
    _emit(args, payload, "\n".join(text))
    return 0 if result.certificates.ok else 1


def cmd_exact(args) -> int:
    inst = check_instance(args.input)
    q = inst.q if args.q is None else args.q
    edges, cost = exact_min_cost_feasible(inst, q=q)
    payload = {"p": inst.p, "q": q, "cost": format_cost(cost), "edges": sorted(edges), "golden": golden_line(inst, edges, cost)}
    _emit(args, payload, payload["golden"])
    return 0


def cmd_check_family(args) -> int:
    if args.family:
        if args.n is None:
            raise SystemExit("--n is required with --family")
        fam = CutFamily.from_text(Path(args.family).read_text(), args.n)
    else:
        inst = check_instance(args.input, check=False)
        fam = deficient_cuts(inst, parse_edge_list(args.edges))
    ok, pair = (check_weakly_uncrossable if args.weak else check_uncrossable)(fam)
    line = "PASS" if ok else f"FAIL pair=({pair[0]},{pair[1]})"
    payload = {
        "property": "weakly_uncrossable" if args.weak else "uncrossable",
        "pass": ok,
        "pair": None if ok else [pair[0].sorted(), pair[1].sorted()],
        "size": len(fam),
    }
    _emit(args, payload, line)
    return 0 if ok else 1


def cmd_counterexample(args) -> int:
    ce = build_counterexample(args.k)
    oracle = FamilyOracle(ce.family, ce.graph)
    chosen, trace = run_primal_dual(ce.graph, oracle)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = verify_certificates(trace, oracle, Mode.WEAKLY_UNCROSSABLE_P1)
    payload = {
        "k": args.k,
        "nodes": ce.graph.n,
        "edges": ce.graph.m,
        "family_size": len(ce.family),
        "chosen": sorted(chosen),
        "pd_cost": format_cost(ce.graph.cost(chosen)),
        "level_edges_only": set(chosen) == set(ce.layout.level_edges),
        "waves": [str(w) for w in trace.waves],
        "deleted": trace.deleted,
        "certificates": report.to_dict(),
    }
    text = "\n".join(f"{k:17} {v}" for k, v in payload.items() if k != "certificates")
    _emit(args, payload, text + f"\ncertificates      {'PASS' if report.ok else 'FAIL'}")
    return 0 if report.ok else 1


def cmd_gap(args) -> int:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows = run_gap_experiment(args.kmin, args.kmax, exact_k_max=args.exact_kmax)
    payload = {"rows": [r.to_dict() for r in rows]}
    header = f"{'k':>3} {'pd_cost':>8} {'dual_sum':>10} {'opt':>5} {'kind':>6} {'ratio':>7} {'deleted':>7} waves"
    lines = [header]
    for r in rows:
        kind = "exact" if r.opt_exact else "<=2k"
        lines.append(
            f"{r.k:>3} {format_cost(r.pd_cost):>8} {str(r.dual_sum):>10} {format_cost(r.opt):>5} {kind:>6} "
            f"{float(r.ratio):>7.3f} {len(r.deleted):>7} {','.join(map(str, r.waves))}"
        )
    _emit(args, payload, "\n".join(lines))
    return 0 if all(r.certificate_ok for r in rows) else 1


def cmd_gen(args) -> int:
    inst = generate_random_instance(
        args.seed, args.n, args.m, args.p, args.safe_prob, (args.cost_lo, args.cost_hi), q=args.q
    )
    text = inst.to_text()
    if args.out:
        Path(args.out).write_text(text)
    if args.json:
        print(json.dumps({"seed": args.seed, "hash": instance_hash(inst), "text": text}, indent=2))
    elif not args.out:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flexcut", description="(p,2)-flexible graph connectivity toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--json", action="store_true", help="emit JSON instead of text")
        p.set_defaults(func=func)
        return p

    p = add("verify", cmd_verify, "check (p,q)-feasibility of E or of a given edge set")
    p.add_argument("--input", required=True)
    p.add_argument("--edges", help="comma separated edge ids (default: all)")
    p.add_argument("--q", type=int)
    p.add_argument("--method", choices=["auto", "shores", "removal"], default="auto")

    p = add("deficient", cmd_deficient, "list the deficient cuts of a (p,1)-feasible edge set")
    p.add_argument("--input", required=True)
    p.add_argument("--edges")

    p = add("solve", cmd_solve, "run the two-stage (p,2) pipeline")
    p.add_argument("--input", required=True)
    p.add_argument("--stage1", choices=["exact", "heuristic"], default="exact")
    p.add_argument("--report")
    p.add_argument("--no-opt", action="store_true", help="skip the exact optimum comparison")

    p = add("exact", cmd_exact, "exact minimum-cost feasible edge set")
    p.add_argument("--input", required=True)
    p.add_argument("--q", type=int)

    p = add("check-family", cmd_check_family, "uncrossable / weakly uncrossable check")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--family", help="family file, one S={...} per line")
    group.add_argument("--input", help="instance file; checks its deficient family")
    p.add_argument("--n", type=int, help="node count for --family")
    p.add_argument("--edges")
    p.add_argument("--weak", action="store_true")

    p = add("counterexample", cmd_counterexample, "build and run the weakly uncrossable bad example")
    p.add_argument("--k", type=int, required=True)

    p = add("gap", cmd_gap, "primal-dual cost versus optimum on the bad example")
    p.add_argument("--kmin", type=int, default=2)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--exact-kmax", type=int, default=4)

    p = add("gen", cmd_gen, "seeded random (p,q)-feasible instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--m", type=int, default=12)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--safe-prob", type=float, default=0.5)
    p.add_argument("--cost-lo", type=int, default=1)
    p.add_argument("--cost-hi", type=int, default=1)
    p.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InfeasibleInstance, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
