"""Primal-dual covering of a cut family, with exact dual bookkeeping.

The engine grows duals uniformly on the minimal violated shores, adds one
newly tight edge per iteration (smallest edge id on ties), and finishes with
a reverse-delete pass.  All arithmetic is on :class:`fractions.Fraction`.
"""
from __future__ import annotations

import enum
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Protocol

import numpy as np

from .families import CutFamily, family_cut_table
from .graph import ContractViolation, LabeledMultigraph, NodeShore, bits, edge_set_mask, format_cost, to_mask


class InfeasibleCover(ValueError):
    def __init__(self, message: str, shore: NodeShore | None = None):
        super().__init__(message)
        self.shore = shore


class CertificateError(AssertionError):
    pass


class ViolationOracle(Protocol):
    """What the engine needs from a family: membership and minimal violated shores."""

    graph: LabeledMultigraph

    def h(self, shore: int) -> int: ...

    def minimal_violated(self, F: int) -> list[int]: ...

    def is_covered(self, F: int) -> bool: ...


class FamilyOracle:
    """Violation oracle over an explicit :class:`CutFamily`, vectorised over bitmasks."""

    def __init__(self, family: CutFamily, graph: LabeledMultigraph):
        if family.n != graph.n:
            raise ContractViolation("family and graph live on different node sets")
        self.family = family
        self.graph = graph
        self._shores, self._cuts = family_cut_table(family, graph)
        self._native = self._shores.dtype == np.uint64
        if self._native:
            self._sizes = np.bitwise_count(self._shores).astype(np.int64)
        else:
            self._sizes = np.array([int(s).bit_count() for s in self._shores], dtype=np.int64)

    def _scalar(self, x: int):
        return np.uint64(x) if self._native else x

    def h(self, shore: int) -> int:
        return self.family.h(shore)

    def _uncovered(self, F: int) -> np.ndarray:
        return (self._cuts & self._scalar(F)) == 0

    def is_covered(self, F: int) -> bool:
        return not self._uncovered(F).any()

    def violated(self, F: int) -> list[int]:
        return [int(s) for s in self._shores[self._uncovered(F)]]

    def minimal_violated(self, F: int) -> list[int]:
        sel = self._uncovered(F)
        shores, sizes = self._shores[sel], self._sizes[sel]
        if not len(shores):
            return []
        order = np.lexsort((shores, sizes)) if self._native else sorted(
            range(len(shores)), key=lambda i: (sizes[i], int(shores[i]))
        )
        arr = shores[order]
        found = []
        while len(arr):
            s = arr[0]
            found.append(int(s))
            arr = arr[(arr & s) != s]
        return sorted(found)

    def witnesses(self, F_now: int, F_final: int, edge: int) -> list[int]:
        """Oriented shores violated by ``F_now`` whose cut meets ``F_final`` exactly in ``edge``."""
        sel = self._uncovered(F_now) & ((self._cuts & self._scalar(F_final)) == self._scalar(1 << edge))
        return [int(s) for s in self._shores[sel]]


@dataclass(frozen=True)
class Iteration:
    active: tuple[int, ...]
    epsilon: Fraction
    tight_edge: int


@dataclass
class PrimalDualTrace:
    n: int
    candidates: int
    iterations: list[Iteration] = field(default_factory=list)
    added: list[int] = field(default_factory=list)
    deleted: list[int] = field(default_factory=list)
    duals: dict[int, Fraction] = field(default_factory=dict)
    witness_map: dict[int, NodeShore] = field(default_factory=dict)

    @property
    def final_edges(self) -> frozenset[int]:
        return frozenset(self.added) - frozenset(self.deleted)

    @property
    def final_mask(self) -> int:
        return to_mask(self.final_edges)

    @property
    def dual_sum(self) -> Fraction:
        return sum(self.duals.values(), Fraction(0))

    @property
    def waves(self) -> list[Fraction]:
        """The positive dual increments in order; zero-step iterations are folded away."""
        return [it.epsilon for it in self.iterations if it.epsilon > 0]

    def edges_before(self, index: int) -> int:
        """Edge mask at the start of iteration ``index``."""
        return to_mask(self.added[:index])

    def to_dict(self) -> dict:
        def shore(mask: int) -> list[int]:
            return list(bits(mask))

        return {
            "n": self.n,
            "iterations": [
                {
                    "active": [shore(c) for c in it.active],
                    "epsilon": str(it.epsilon),
                    "tight_edge": it.tight_edge,
                }
                for it in self.iterations
            ],
            "added": list(self.added),
            "deleted": list(self.deleted),
            "final_edges": sorted(self.final_edges),
            "duals": [{"shore": shore(s), "y": str(y)} for s, y in sorted(self.duals.items())],
            "dual_sum": str(self.dual_sum),
            "witnesses": {str(e): shore(s.mask) for e, s in sorted(self.witness_map.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _oracle_for(G: LabeledMultigraph, oracle) -> ViolationOracle:
    if isinstance(oracle, CutFamily):
        return FamilyOracle(oracle, G)
    if oracle.graph.n != G.n or oracle.graph.m != G.m:
        raise ContractViolation("oracle was built for a different graph")
    return oracle


def run_primal_dual(
    G: LabeledMultigraph,
    oracle: ViolationOracle | CutFamily,
    candidates: Iterable[int] | int | None = None,
    *,
    witnesses: bool = True,
) -> tuple[frozenset[int], PrimalDualTrace]:
    """Cover every positive shore of ``oracle`` with edges from ``candidates`` (default: all of E)."""
    oracle = _oracle_for(G, oracle)
    cand = edge_set_mask(G, candidates)
    if not oracle.is_covered(cand):
        bad = oracle.minimal_violated(cand)[0]
        raise InfeasibleCover(f"{NodeShore(bad, G.n)} has no candidate edge in its cut", NodeShore(bad, G.n))

    trace = PrimalDualTrace(G.n, cand)
    slack = {i: G.edges[i].cost for i in bits(cand)}
    F = 0
    while True:
        active = oracle.minimal_violated(F)
        if not active:
            break
        hits: dict[int, int] = {}
        for c in active:
            for e in bits(G.cut_mask(c) & cand & ~F):
                hits[e] = hits.get(e, 0) + 1
        if not hits:
            raise InfeasibleCover(f"{NodeShore(active[0], G.n)} cannot be covered", NodeShore(active[0], G.n))
        eps = min(slack[e] / k for e, k in hits.items())
        for c in active:
            trace.duals[c] = trace.duals.get(c, Fraction(0)) + eps
        for e, k in hits.items():
            slack[e] -= eps * k
        tight = min(e for e in hits if slack[e] == 0)
        trace.iterations.append(Iteration(tuple(active), eps, tight))
        trace.added.append(tight)
        F |= 1 << tight

    trace.deleted = reverse_delete(G, trace.added, oracle)
    if witnesses and hasattr(oracle, "witnesses"):
        for e in sorted(trace.final_edges):
            try:
                trace.witness_map[e] = find_witness(e, trace, oracle)
            except CertificateError:
                pass
    return trace.final_edges, trace


def reverse_delete(G: LabeledMultigraph, F_added: list[int], oracle: ViolationOracle | CutFamily) -> list[int]:
    """Drop edges in reverse addition order whenever coverage survives; returns the dropped ids."""
    oracle = _oracle_for(G, oracle)
    current = to_mask(F_added)
    if not oracle.is_covered(current):
        raise ContractViolation("reverse_delete needs an edge list that already covers the family")
    dropped = []
    for e in reversed(F_added):
        if not current >> e & 1:
            continue
        trial = current & ~(1 << e)
        if oracle.is_covered(trial):
            current = trial
            dropped.append(e)
    return dropped


def find_witness(e: int, trace: PrimalDualTrace, oracle, iteration: int | None = None) -> NodeShore:
    """A shore violated at ``iteration`` whose cut meets the final edge set in exactly ``e``.

    The default iteration is the one in which ``e`` was added.  Search is
    exhaustive over the oracle's explicit family; the canonical orientation
    of the lowest match is returned.
    """
    if not hasattr(oracle, "witnesses"):
        raise ContractViolation("witness search needs an explicit family oracle")
    final = trace.final_mask
    if not final >> e & 1:
        raise ContractViolation(f"edge {e} is not in the final edge set")
    if iteration is None:
        iteration = trace.added.index(e)
    matches = oracle.witnesses(trace.edges_before(iteration), final, e)
    if not matches:
        raise CertificateError(f"no witness shore for edge {e} at iteration {iteration}")
    return NodeShore(min(NodeShore(m, trace.n).canonical().mask for m in matches), trace.n)


class Mode(str, enum.Enum):
    UNCROSSABLE = "uncrossable"
    WEAKLY_UNCROSSABLE_P1 = "weakly_uncrossable_p1"

    @property
    def beta(self) -> int:
        return 2 if self is Mode.UNCROSSABLE else 16


@dataclass
class CertificateReport:
    mode: Mode
    beta: int
    cost: Fraction
    dual_sum: Fraction
    max_charge_ratio: Fraction | None
    witnesses_checked: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "beta": self.beta,
            "ok": self.ok,
            "cost": format_cost(self.cost),
            "dual_sum": format_cost(self.dual_sum),
            "max_charge_ratio": None if self.max_charge_ratio is None else format_cost(self.max_charge_ratio),
            "witnesses_checked": self.witnesses_checked,
            "failures": list(self.failures),
        }


def verify_certificates(
    trace: PrimalDualTrace,
    oracle,
    mode: Mode | str = Mode.UNCROSSABLE,
    *,
    strict: bool = False,
    check_witnesses: bool = True,
) -> CertificateReport:
    """Re-check a trace: dual feasibility, tightness, the cost identity, the per-iteration
    charging bound ``sum_C |delta_F'(C)| <= beta |C|``, the resulting ``cost <= beta * sum y``,
    disjointness of active sets and (explicit families) witness shores for every edge
    charged in every iteration.

    ``strict`` raises :class:`CertificateError` on the first report with failures;
    otherwise failures are reported and a warning is emitted.
    """
    mode = Mode(mode)
    G = oracle.graph
    beta = mode.beta
    final = trace.final_mask
    failures = []

    load = {i: Fraction(0) for i in bits(trace.candidates)}
    for s, y in trace.duals.items():
        if y < 0:
            failures.append(f"negative dual on {NodeShore(s, trace.n)}")
        if not oracle.h(s):
            failures.append(f"dual raised on non-member {NodeShore(s, trace.n)}")
        for e in bits(G.cut_mask(s) & trace.candidates):
            load[e] += y
    for e, total in load.items():
        if total > G.edges[e].cost:
            failures.append(f"edge {e} overloaded: {total} > {G.edges[e].cost}")
    for e in bits(final):
        if load.get(e) != G.edges[e].cost:
            failures.append(f"chosen edge {e} is not tight: {load.get(e)} != {G.edges[e].cost}")
    if final & ~trace.candidates:
        failures.append("final edge set uses non-candidate edges")
    if not oracle.is_covered(final):
        failures.append("final edge set leaves a violated shore")

    cost = G.cost(final)
    charged = sum((y * (G.cut_mask(s) & final).bit_count() for s, y in trace.duals.items()), Fraction(0))
    if charged != cost:
        failures.append(f"cost identity fails: c(F') = {cost} but sum y_S |delta_F'(S)| = {charged}")

    worst = None
    explicit = check_witnesses and hasattr(oracle, "witnesses")
    for idx, it in enumerate(trace.iterations):
        if any(a & b for i, a in enumerate(it.active) for b in it.active[i + 1:]):
            failures.append(f"iteration {idx}: active sets overlap")
        cut_hits = [G.cut_mask(c) & final for c in it.active]
        charge = sum(x.bit_count() for x in cut_hits)
        ratio = Fraction(charge, len(it.active))
        worst = ratio if worst is None else max(worst, ratio)
        if charge > beta * len(it.active):
            failures.append(f"iteration {idx}: charge {charge} exceeds {beta} * {len(it.active)} active sets")
        if explicit:
            now = trace.edges_before(idx)
            H = 0
            for x in cut_hits:
                H |= x
            for e in bits(H):
                if not oracle.witnesses(now, final, e):
                    failures.append(f"iteration {idx}: edge {e} has no witness shore")

    dual_sum = trace.dual_sum
    if cost > beta * dual_sum:
        failures.append(f"cost {cost} exceeds {beta} * dual {dual_sum}")

    report = CertificateReport(mode, beta, cost, dual_sum, worst, explicit, failures)
    if failures:
        if strict:
            raise CertificateError("; ".join(failures))
        warnings.warn(f"certificate check failed ({len(failures)} issues): {failures[0]}", stacklevel=2)
    return report
