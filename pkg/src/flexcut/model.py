"""(p,q)-flexible connectivity: instances, feasibility and deficient cuts."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .families import CutFamily
from .graph import (
    ContractViolation,
    LabeledMultigraph,
    NodeShore,
    bits,
    canonical_masks,
    edge_set_mask,
    min_cut,
    read_graph_text,
    to_mask,
    write_graph_text,
)

N_MAX = 18


class InfeasibleInstance(ValueError):
    """The full edge set does not meet the (p, q) requirement."""

    def __init__(self, message: str, witness: "DeficiencyWitness | None" = None):
        super().__init__(message)
        self.witness = witness


class PreconditionError(ValueError):
    def __init__(self, message: str, witness: "DeficiencyWitness | None" = None):
        super().__init__(message)
        self.witness = witness


class EnumerationLimit(ValueError):
    """Exhaustive shore enumeration was requested above the configured node limit."""


@dataclass(frozen=True)
class DeficiencyWitness:
    shore: NodeShore
    total_edges: int
    unsafe_edges: int

    @property
    def safe_edges(self) -> int:
        return self.total_edges - self.unsafe_edges

    def __str__(self) -> str:
        return f"{self.shore} total={self.total_edges} unsafe={self.unsafe_edges}"


class Feasibility(NamedTuple):
    feasible: bool
    witness: DeficiencyWitness | None = None

    def __bool__(self) -> bool:
        return self.feasible


@functools.lru_cache(maxsize=64)
def shore_table(G: LabeledMultigraph) -> tuple[np.ndarray, np.ndarray]:
    """Canonical shore masks and the ``[shores, m]`` crossing matrix of ``G``."""
    masks = canonical_masks(G.n)
    return masks, G.incidence(masks)


def cut_counts(G: LabeledMultigraph, F: int, n_max: int = N_MAX) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per canonical shore: (masks, total edges of F in the cut, unsafe edges of F in the cut)."""
    if G.n > n_max:
        raise EnumerationLimit(f"exhaustive shore enumeration needs n <= {n_max}, got n = {G.n}")
    masks, inc = shore_table(G)
    chosen = np.array([bool(F >> e.id & 1) for e in G.edges], dtype=bool)
    unsafe = np.array([not e.safe for e in G.edges], dtype=bool)
    total = inc[:, chosen].sum(axis=1)
    bad = inc[:, chosen & unsafe].sum(axis=1)
    return masks, total, bad


@dataclass(frozen=True)
class FgcInstance:
    graph: LabeledMultigraph
    p: int
    q: int
    check: bool = True

    def __post_init__(self):
        if self.p < 1:
            raise ContractViolation(f"p must be >= 1, got {self.p}")
        if self.q < 0:
            raise ContractViolation(f"q must be >= 0, got {self.q}")
        if self.check:
            verdict = is_feasible(self, None)
            if not verdict.feasible:
                raise InfeasibleInstance(
                    f"E is not ({self.p},{self.q})-feasible; violating cut {verdict.witness}", verdict.witness
                )

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    def with_q(self, q: int, check: bool = False) -> "FgcInstance":
        return FgcInstance(self.graph, self.p, q, check=check)

    @classmethod
    def from_text(cls, text: str, check: bool = True) -> "FgcInstance":
        G, p, q = read_graph_text(text)
        return cls(G, p, q, check=check)

    @classmethod
    def load(cls, path: str | Path, check: bool = True) -> "FgcInstance":
        return cls.from_text(Path(path).read_text(), check=check)

    def to_text(self) -> str:
        return write_graph_text(self.graph, self.p, self.q)


def _requirement_met(safe: np.ndarray | int, unsafe: np.ndarray | int, p: int, q: int):
    return safe + np.maximum(0, unsafe - q) >= p


def _feasible_by_shores(G: LabeledMultigraph, F: int, p: int, q: int, n_max: int) -> Feasibility:
    masks, total, bad = cut_counts(G, F, n_max)
    ok = _requirement_met(total - bad, bad, p, q)
    if ok.all():
        return Feasibility(True)
    i = int(np.argmin(ok))
    return Feasibility(False, DeficiencyWitness(NodeShore(int(masks[i]), G.n), int(total[i]), int(bad[i])))


def _feasible_by_removal(G: LabeledMultigraph, F: int, p: int, q: int) -> Feasibility:
    """Remove every set of at most q unsafe edges of F and test p-edge-connectivity."""
    unsafe = list(bits(F & G.unsafe_mask))
    for r in range(min(q, len(unsafe)) + 1):
        for removed in itertools.combinations(unsafe, r):
            value, shore = min_cut(G, F & ~to_mask(removed))
            if value < p:
                cut = G.cut_mask(shore.mask) & F
                witness = DeficiencyWitness(shore.canonical(), cut.bit_count(), (cut & G.unsafe_mask).bit_count())
                return Feasibility(False, witness)
    return Feasibility(True)


def is_feasible(
    inst: FgcInstance,
    F: Iterable[int] | int | None,
    *,
    q: int | None = None,
    method: str = "auto",
    n_max: int = N_MAX,
) -> Feasibility:
    """Whether ``(V, F - F')`` stays ``p``-edge-connected for every ``F'`` of at most ``q`` unsafe edges of F.

    ``method="shores"`` scans every cut with the count ``safe + max(0, unsafe - q) >= p``;
    ``method="removal"`` enumerates the failure sets and runs max-flow.  ``"auto"``
    scans shores up to ``n_max`` nodes.  ``q`` overrides the instance's own value.
    """
    G = inst.graph
    F = edge_set_mask(G, F)
    q = inst.q if q is None else q
    if method == "auto":
        method = "shores" if G.n <= n_max else "removal"
    if method == "shores":
        return _feasible_by_shores(G, F, inst.p, q, n_max)
    if method == "removal":
        return _feasible_by_removal(G, F, inst.p, q)
    raise ContractViolation(f"unknown feasibility method {method!r}")


def deficient_cuts(inst: FgcInstance, F1: Iterable[int] | int | None, *, n_max: int = N_MAX) -> CutFamily:
    """Shores whose cut in ``F1`` has exactly ``p + 1`` edges, at least two of them unsafe.

    ``F1`` must be (p,1)-feasible.  Every ``p``-cut of such an ``F1`` is all-safe;
    that is asserted while scanning.  The returned family carries
    ``(total, unsafe)`` counts per shore in ``info``.
    """
    G, p = inst.graph, inst.p
    F1 = edge_set_mask(G, F1)
    masks, total, bad = cut_counts(G, F1, n_max)
    ok = _requirement_met(total - bad, bad, p, 1)
    if not ok.all():
        i = int(np.argmin(ok))
        witness = DeficiencyWitness(NodeShore(int(masks[i]), G.n), int(total[i]), int(bad[i]))
        raise PreconditionError(f"F1 is not ({p},1)-feasible; violating cut {witness}", witness)
    p_cuts = total == p
    if (bad[p_cuts] != 0).any():
        raise AssertionError("a p-cut of a (p,1)-feasible edge set carries an unsafe edge")
    chosen = np.flatnonzero((total == p + 1) & (bad >= 2))
    info = {int(masks[i]): (int(total[i]), int(bad[i])) for i in chosen}
    return CutFamily(G.n, tuple(int(masks[i]) for i in chosen), info)


def feasibility_text(verdict: Feasibility) -> str:
    if verdict.feasible:
        return "FEASIBLE"
    return f"INFEASIBLE {verdict.witness}"
