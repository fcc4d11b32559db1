"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Lines are also collected in ``RESULTS`` and repeated in the pytest terminal
summary, so they show up in ``pytest -v`` output without ``-s``.
"""
import functools
import itertools
import random
import time
from fractions import Fraction

import numpy as np

import oracles
from flexcut.counterexample import counterexample_oracle, run_gap_row
from flexcut.exact import exact_min_cost_feasible
from flexcut.families import (
    CutFamily,
    check_property_P1,
    check_uncrossable,
    check_weakly_uncrossable,
    parity_check,
)
from flexcut.generators import generate_bundle_instance, generate_random_instance, random_multigraph
from flexcut.graph import LabeledMultigraph, NodeShore, counting_identities_check, crosses, edge_connectivity, to_mask
from flexcut.model import FgcInstance, deficient_cuts, is_feasible
from flexcut.pipeline import solve_p2fgc
from flexcut.primal_dual import FamilyOracle, run_primal_dual

RESULTS: dict[str, str] = {}


def record(tag: str, ok: bool, detail: str) -> None:
    line = f"{tag} {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS[tag] = line
    print(line)


# suites -------------------------------------------------------------------

SEEDS = range(25)
# (p, safe_prob) per parity for the F1 = E suites
BASE_CONFIGS = {"even": [(2, 0.2), (4, 0.5)], "odd": [(1, 0.2), (3, 0.5)]}


@functools.lru_cache(maxsize=None)
def structural_suite(parity: str) -> tuple:
    """(instance, F1, deficient family) for bundle-cycle instances with n <= 8 and F1 = E.

    The instances are (p,1)-feasible and usually not (p,2)-feasible, so the families are rich.
    """
    out = []
    for (p, safe_prob), n, seed in itertools.product(BASE_CONFIGS[parity], (6, 7, 8), SEEDS):
        inst = generate_bundle_instance(seed, n, p, safe_prob, q=1)
        F1 = inst.graph.all_edges
        out.append((inst, F1, deficient_cuts(inst, F1)))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def pipeline_suite(parity: str) -> tuple:
    """Pipeline runs on (p,2)-feasible bundle-cycle instances, n <= 8."""
    ps = (2, 4) if parity == "even" else (1, 3)
    runs = []
    for p, n, seed in itertools.product(ps, (5, 6, 7, 8), SEEDS):
        inst = generate_bundle_instance(seed, n, p, 0.5 if p == 4 else 0.3, chords=2, q=2)
        mode = "exact" if inst.m <= 20 else "heuristic"
        runs.append((inst, solve_p2fgc(inst, mode, strict=False, p1_random_samples=20)))
    return tuple(runs)


RATIO_CONFIGS = [
    (1, 6, 10, 0.3),
    (1, 5, 8, 0.3),
    (2, 5, 10, 0.6),
    (2, 4, 8, 0.5),
    (2, 6, 10, 0.7),
    (3, 4, 10, 0.7),
    (3, 3, 8, 0.6),
]


# criteria -----------------------------------------------------------------


def test_ac1_four_node_example():
    start = time.perf_counter()
    rows = [(0, 1, 1, "U"), (0, 1, 1, "S"), (1, 2, 1, "S"), (1, 2, 1, "S"),
            (2, 3, 1, "U"), (2, 3, 1, "S"), (0, 3, 1, "U"), (0, 3, 1, "U")]
    inst = FgcInstance(LabeledMultigraph.from_edges(4, rows), 3, 1)
    pair_cuts = {NodeShore.of([0, 1], 4).canonical(), NodeShore.of([1, 2], 4).canonical()}
    q1 = is_feasible(inst, None, q=1)
    q2 = is_feasible(inst, None, q=2)
    fam = deficient_cuts(inst, None)
    unc, pair = check_uncrossable(fam)
    weak, _ = check_weakly_uncrossable(fam)
    elapsed = time.perf_counter() - start
    ok = (
        q1.feasible
        and not q2.feasible
        and q2.witness.shore.canonical() in pair_cuts
        and not unc
        and {pair[0].canonical(), pair[1].canonical()} == pair_cuts
        and weak
        and elapsed < 1.0
    )
    record("AC1", ok, f"four-node example: (3,1) feasible={q1.feasible}, (3,2) witness={q2.witness}, "
                      f"uncrossable pair=({pair[0]},{pair[1]}), weakly uncrossable={weak}, {elapsed:.3f}s")
    assert ok


def test_ac2_even_uncrossable():
    start = time.perf_counter()
    failures, crossing, families = 0, 0, 0
    items = list(structural_suite("even")) + [(i, to_mask(r.stage1_edges), r.family) for i, r in pipeline_suite("even")]
    for inst, _, fam in items:
        families += 1
        failures += not check_uncrossable(fam)[0]
        crossing += sum(crosses(a, b, fam.full) for a, b in itertools.combinations(fam.masks, 2))
    elapsed = time.perf_counter() - start
    ok = failures == 0 and families >= 200 and elapsed < 120
    record("AC2", ok, f"even p: {families} families, {crossing} crossing deficient pairs, {failures} failures, {elapsed:.1f}s")
    assert ok


def test_ac3_odd_weak_and_P1():
    start = time.perf_counter()
    weak_fail = p1_fail = families = prefixes = 0
    for inst, F1, fam in structural_suite("odd"):
        families += 1
        weak_fail += not check_weakly_uncrossable(fam)[0]
        if len(fam):
            _, trace = run_primal_dual(inst.graph, FamilyOracle(fam, inst.graph), witnesses=False)
            samples = [trace.edges_before(i) for i in range(len(trace.added) + 1)]
            prefixes += len(samples)
            p1_fail += not check_property_P1(fam, inst.graph, samples)[0]
    for inst, result in pipeline_suite("odd"):
        families += 1
        prefixes += len(result.trace.added) + 1
        weak_fail += not result.family_stats["weakly_uncrossable"]
        p1_fail += not result.family_stats["property_P1"]
    elapsed = time.perf_counter() - start
    ok = weak_fail == 0 and p1_fail == 0 and families >= 200 and elapsed < 300
    record("AC3", ok, f"odd p: {families} families, {prefixes} trace prefixes, weak failures={weak_fail}, "
                      f"P1 failures={p1_fail}, {elapsed:.1f}s")
    assert ok


def test_ac4_certificates():
    runs = failures = missing = 0
    worst = {2: Fraction(0), 16: Fraction(0)}
    for parity in ("even", "odd"):
        for _, result in pipeline_suite(parity):
            runs += 1
            rep = result.certificates
            failures += not rep.ok
            missing += not result.family_stats["witnesses_found"]
            if rep.dual_sum:
                worst[rep.beta] = max(worst[rep.beta], rep.cost / rep.dual_sum)
    ok = runs > 0 and failures == 0 and missing == 0
    record("AC4", ok, f"{runs} pipeline runs, certificate failures={failures}, edges without witness={missing}, "
                      f"max cost/dual even={float(worst[2]):.3f} (<=2), odd={float(worst[16]):.3f} (<=16)")
    assert ok


def test_ac5_ratios_vs_exact():
    start = time.perf_counter()
    worst = {"even": Fraction(0), "odd": Fraction(0)}
    count = bad = 0
    for (p, n, m, safe_prob), costs, seed in itertools.product(RATIO_CONFIGS, [(1, 1), (1, 4)], SEEDS):
        inst = generate_random_instance(seed, n, m, p, safe_prob, costs)
        result = solve_p2fgc(inst, "exact")
        _, opt = exact_min_cost_feasible(inst, q=2)
        ratio = result.total_cost / opt
        parity = "even" if p % 2 == 0 else "odd"
        worst[parity] = max(worst[parity], ratio)
        bad += ratio > (3 if parity == "even" else 17)
        count += 1
    elapsed = time.perf_counter() - start
    ok = count >= 300 and bad == 0 and worst["even"] <= 6 and worst["odd"] <= 20 and elapsed < 600
    record("AC5", ok, f"{count} instances, max ratio even={worst['even']} ({float(worst['even']):.3f}, bound 3), "
                      f"odd={worst['odd']} ({float(worst['odd']):.3f}, bound 17), {elapsed:.1f}s")
    assert ok


def test_ac6_gap_curve():
    start = time.perf_counter()
    rows, problems = [], []
    for k in range(2, 7):
        row = run_gap_row(k)
        G, layout, oracle = counterexample_oracle(k)
        hub_cover = oracle.is_covered(to_mask(layout.hub_edges))
        if row.pd_cost != k * k or not row.level_edges_only:
            problems.append(f"k={k}: pd cost {row.pd_cost}")
        if row.deleted:
            problems.append(f"k={k}: reverse delete removed {row.deleted}")
        if not hub_cover or row.opt > 2 * k:
            problems.append(f"k={k}: no cover of cost <= 2k")
        if row.ratio < Fraction(k, 2):
            problems.append(f"k={k}: ratio {row.ratio} < k/2")
        if row.waves != [Fraction(1, 2**i) for i in range(1, k + 1)]:
            problems.append(f"k={k}: waves {row.waves}")
        if not row.certificate_ok:
            problems.append(f"k={k}: certificate failure")
        rows.append(row)
    ratios = [r.ratio for r in rows]
    if any(b <= a for a, b in zip(ratios, ratios[1:])):
        problems.append(f"ratios not strictly increasing: {ratios}")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 300
    curve = ", ".join(f"k={r.k}: {r.pd_cost}/{r.opt}{'' if r.opt_exact else '(2k)'}" for r in rows)
    record("AC6", ok, f"gap curve {curve}; {'; '.join(problems) or 'no deletions, waves 1/2..1/2^k'}, {elapsed:.1f}s")
    assert ok


def test_ac7_identities_and_parity():
    rng = np.random.default_rng(2024)
    identity_fail = 0
    for _ in range(10_000):
        n = int(rng.integers(3, 9))
        G = random_multigraph(rng, n, int(rng.integers(n, 3 * n)), 0.5, (1, 1))
        a, b = (int(x) for x in rng.integers(1, G.full, size=2))
        F = int(rng.integers(0, G.all_edges + 1))
        identity_fail += not counting_identities_check(G, F, a, b).holds
    pairs = {"even": 0, "odd": 0}
    parity_fail = {"even": 0, "odd": 0}
    for parity in ("even", "odd"):
        items = [(i, F1, fam) for i, F1, fam in structural_suite(parity)]
        items += [(i, to_mask(r.stage1_edges), r.family) for i, r in pipeline_suite(parity)]
        for inst, F1, fam in items:
            for a, b in itertools.combinations(fam.masks, 2):
                if crosses(a, b, fam.full):
                    pairs[parity] += 1
                    rep = parity_check(inst.graph, F1, a, b, inst.p)
                    parity_fail[parity] += not (rep.applicable and rep.holds)
    ok = identity_fail == 0 and not any(parity_fail.values()) and all(pairs.values())
    record("AC7", ok, f"counting identities on 10000 triples: {identity_fail} failures; parity on "
                      f"{pairs['even']} even / {pairs['odd']} odd crossing deficient pairs: "
                      f"{parity_fail['even'] + parity_fail['odd']} failures")
    assert ok


def test_ac8_oracle_agreement():
    rng = np.random.default_rng(8)
    pyrng = random.Random(8)
    mismatches, cases = [], 0
    for n, p, q, rep in itertools.product(range(2, 9), (1, 2, 3, 4), (0, 1, 2), range(2)):
        m = int(rng.integers(max(n, 2), 2 * n + 3))
        G = random_multigraph(rng, n, m, 0.5, (1, 3))
        rows = oracles.edge_rows(G)
        inst = FgcInstance(G, p, q, check=False)
        for F in (G.all_edges, int(rng.integers(0, G.all_edges + 1))):
            chosen = [i for i in range(m) if F >> i & 1]
            cases += 1
            expected = oracles.feasible_by_scan(n, rows, chosen, p, q)
            got = (is_feasible(inst, F, method="shores").feasible, is_feasible(inst, F, method="removal").feasible)
            if m <= 12 and oracles.feasible_by_removal(n, rows, chosen, p, q) != expected:
                mismatches.append(f"oracles disagree n={n} p={p} q={q}")
            if got != (expected, expected):
                mismatches.append(f"feasibility n={n} m={m} p={p} q={q} F={F:#x}")
            if edge_connectivity(G, F) != oracles.edge_connectivity(n, rows, chosen):
                mismatches.append(f"connectivity n={n} F={F:#x}")
        base = FgcInstance(G, p, 1, check=False)
        if is_feasible(base, None).feasible:
            fam = deficient_cuts(base, None)
            if {s.members for s in fam} != oracles.deficient_family(n, rows, range(m), p):
                mismatches.append(f"deficient family n={n} p={p}")
        else:
            masks = [pyrng.randrange(1, (1 << n) - 1) for _ in range(4)] if n > 1 else []
            fam = CutFamily.from_masks(n, masks)
        oracle = FamilyOracle(fam, G)
        sets = [s.members for s in fam]
        for F in (0, int(rng.integers(0, G.all_edges + 1))):
            expected = oracles.minimal_sets(oracles.violated_shores(n, rows, sets, [i for i in range(m) if F >> i & 1]))
            got = {frozenset(NodeShore(s, n).members) for s in oracle.minimal_violated(F)}
            if got != expected:
                mismatches.append(f"minimal violated n={n} F={F:#x}")
    ok = not mismatches
    record("AC8", ok, f"{cases} feasibility/connectivity cases over n=2..8, p=1..4, q=0..2 plus family oracles: "
                      f"{len(mismatches)} mismatches{(' e.g. ' + mismatches[0]) if mismatches else ''}")
    assert ok
