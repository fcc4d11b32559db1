"""Weakly uncrossable family on which plain primal-dual pays ``k^2`` against an optimum below ``2k``.

Node layout (one node per region): node 0 is the hub ``v0``; then the cells
``c[i][j]`` for cylinder ``i in 1..k`` and layer ``j in 0..k``; then the ring
nodes ``t[i][j]`` for level ``i in 1..k`` on layer ``j in 1..k``, so that the
nested set at level ``i`` of layer ``j`` is ``{t[1][j], ..., t[i][j]}``.

Edges, all of unit cost: first the ``k^2`` level edges ``t[i][j] - c[i][j]``
ordered by ``(i, j)``, then the ``2k`` hub edges ``v0 - t[1][j]`` and
``v0 - c[i][0]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact import BudgetExceeded, SolveBudget, exact_min_cost_cover
from .families import CutFamily, close_complements
from .graph import LabeledMultigraph, NodeShore, bits
from .primal_dual import FamilyOracle, Mode, run_primal_dual, verify_certificates

EXPLICIT_K_MAX = 4


@dataclass(frozen=True)
class CounterexampleLayout:
    k: int
    cell: dict  # (i, j) -> node, i in 1..k, j in 0..k
    ring: dict  # (i, j) -> node, i, j in 1..k
    level_edges: tuple[int, ...]
    hub_edges: tuple[int, ...]

    @property
    def n(self) -> int:
        return 1 + len(self.cell) + len(self.ring)

    def cylinder(self, i: int) -> int:
        return sum(1 << self.cell[i, j] for j in range(self.k + 1))

    def nested(self, i: int, j: int) -> int:
        return sum(1 << self.ring[level, j] for level in range(1, i + 1))

    def cells_below(self, i: int) -> int:
        """Cells usable by a type-(II) set at level ``i``: every cell of the cylinders ``1..i-1``."""
        return sum(self.cylinder(r) for r in range(1, i))

    def level_edge(self, i: int, j: int) -> int:
        return self.level_edges[(i - 1) * self.k + (j - 1)]

    def hub_ring_edge(self, j: int) -> int:
        return self.hub_edges[j - 1]

    def hub_cell_edge(self, i: int) -> int:
        return self.hub_edges[self.k + i - 1]


def counterexample_graph(k: int) -> tuple[LabeledMultigraph, CounterexampleLayout]:
    if k < 2:
        raise ValueError("the construction needs k >= 2")
    node = iter(range(1, 10**9))
    cell = {(i, j): next(node) for i in range(1, k + 1) for j in range(k + 1)}
    ring = {(i, j): next(node) for j in range(1, k + 1) for i in range(1, k + 1)}
    rows = [(ring[i, j], cell[i, j], 1, "S") for i in range(1, k + 1) for j in range(1, k + 1)]
    rows += [(0, ring[1, j], 1, "S") for j in range(1, k + 1)]
    rows += [(0, cell[i, 0], 1, "S") for i in range(1, k + 1)]
    G = LabeledMultigraph.from_edges(1 + len(cell) + len(ring), rows)
    layout = CounterexampleLayout(k, cell, ring, tuple(range(k * k)), tuple(range(k * k, k * k + 2 * k)))
    return G, layout


def _submasks(mask: int) -> np.ndarray:
    positions = list(bits(mask))
    idx = np.arange(1 << len(positions), dtype=np.uint64)
    out = np.zeros_like(idx)
    for t, pos in enumerate(positions):
        out |= ((idx >> np.uint64(t)) & np.uint64(1)) << np.uint64(pos)
    return out


def family_prime(layout: CounterexampleLayout) -> list[int]:
    """The unclosed family: the cylinders, then every nested set joined with any cells of lower cylinders."""
    k = layout.k
    out = [layout.cylinder(i) for i in range(1, k + 1)]
    for i in range(1, k + 1):
        below = layout.cells_below(i)
        for j in range(1, k + 1):
            out.extend(int(x) for x in _submasks(below) | np.uint64(layout.nested(i, j)))
    return out


def family_prime_size(k: int) -> int:
    return k + sum(k * 2 ** ((i - 1) * (k + 1)) for i in range(1, k + 1))


@dataclass(frozen=True)
class Counterexample:
    k: int
    graph: LabeledMultigraph
    layout: CounterexampleLayout
    family_prime: list = field(repr=False)
    family: CutFamily = field(repr=False)

    def __iter__(self):
        """Unpacks as ``G, fam``."""
        return iter((self.graph, self.family))


def build_counterexample(k: int, *, explicit_k_max: int = EXPLICIT_K_MAX) -> Counterexample:
    if k > explicit_k_max:
        raise BudgetExceeded(
            f"explicit family for k={k} has {family_prime_size(k)} sets; use CounterexampleOracle instead"
        )
    G, layout = counterexample_graph(k)
    prime = family_prime(layout)
    return Counterexample(k, G, layout, prime, close_complements(prime, G.n))


class CounterexampleOracle:
    """Implicit violation oracle for the construction, usable for any ``k``.

    For an edge set ``F`` every minimal violated shore is one of: a cylinder,
    the smallest violated type-(II) set of some (level, layer), or the
    complement of a cylinder or of the largest violated type-(II) set of some
    (level, layer).  Minimality is then decided among those candidates only.
    """

    def __init__(self, graph: LabeledMultigraph, layout: CounterexampleLayout):
        self.graph = graph
        self.layout = layout
        self.n = graph.n
        self.full = (1 << graph.n) - 1
        k = layout.k
        self._cylinders = {layout.cylinder(i): i for i in range(1, k + 1)}
        self._nested = {layout.nested(i, j): (i, j) for i in range(1, k + 1) for j in range(1, k + 1)}
        self._ring_all = sum(1 << v for v in layout.ring.values())
        self._cells_below = {i: layout.cells_below(i) for i in range(1, k + 1)}

    def _in_prime(self, mask: int) -> bool:
        if mask & 1:
            return False
        if mask in self._cylinders:
            return True
        key = self._nested.get(mask & self._ring_all)
        if key is None:
            return False
        return not mask & ~self._ring_all & ~self._cells_below[key[0]]

    def h(self, shore: int) -> int:
        mask = int(shore.mask) if isinstance(shore, NodeShore) else int(shore)
        if not 0 < mask < self.full:
            return 0
        return int(self._in_prime(mask) or self._in_prime(self.full ^ mask))

    def _candidates(self, F: int) -> list[int]:
        lay, k = self.layout, self.layout.k
        out = []
        for i in range(1, k + 1):
            out.append(lay.cylinder(i))
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                smallest = lay.nested(i, j)
                largest = lay.nested(i, j)
                for r in range(1, i):
                    for jj in range(0, k + 1):
                        c = 1 << lay.cell[r, jj]
                        if jj == j:
                            largest |= c
                            if F >> lay.level_edge(r, j) & 1:
                                smallest |= c
                        elif jj == 0:
                            if not F >> lay.hub_cell_edge(r) & 1:
                                largest |= c
                        elif not F >> lay.level_edge(r, jj) & 1:
                            largest |= c
                out += [smallest, largest, self.full ^ largest]
        out += [self.full ^ lay.cylinder(i) for i in range(1, k + 1)]
        return out

    def _violated_candidates(self, F: int) -> list[int]:
        G = self.graph
        return sorted({c for c in self._candidates(F) if not G.cut_mask(c) & F})

    def is_covered(self, F: int) -> bool:
        return not self._violated_candidates(F)

    def minimal_violated(self, F: int) -> list[int]:
        viol = sorted(self._violated_candidates(F), key=lambda m: (m.bit_count(), m))
        found = []
        for s in viol:
            if not any(m & s == m for m in found):
                found.append(s)
        return sorted(found)


def counterexample_oracle(k: int, *, explicit_k_max: int = EXPLICIT_K_MAX):
    """Graph, layout and the explicit oracle for small ``k``, the implicit one beyond."""
    if k <= explicit_k_max:
        ce = build_counterexample(k, explicit_k_max=explicit_k_max)
        return ce.graph, ce.layout, FamilyOracle(ce.family, ce.graph)
    G, layout = counterexample_graph(k)
    return G, layout, CounterexampleOracle(G, layout)


@dataclass
class GapRow:
    k: int
    pd_cost: Fraction
    dual_sum: Fraction
    opt: Fraction
    opt_exact: bool
    ratio: Fraction
    waves: list
    deleted: list
    level_edges_only: bool
    certificate_ok: bool
    max_charge_ratio: Fraction | None
    oracle: str

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "pd_cost": str(self.pd_cost),
            "dual_sum": str(self.dual_sum),
            "opt": str(self.opt),
            "opt_kind": "exact" if self.opt_exact else "upper bound 2k",
            "ratio": str(self.ratio),
            "ratio_float": float(self.ratio),
            "waves": [str(w) for w in self.waves],
            "deleted": list(self.deleted),
            "level_edges_only": self.level_edges_only,
            "certificate_ok": self.certificate_ok,
            "max_charge_ratio": None if self.max_charge_ratio is None else str(self.max_charge_ratio),
            "oracle": self.oracle,
        }


def run_gap_row(k: int, *, exact_k_max: int = 4, explicit_k_max: int = EXPLICIT_K_MAX,
                budget: SolveBudget | None = None) -> GapRow:
    G, layout, oracle = counterexample_oracle(k, explicit_k_max=explicit_k_max)
    chosen, trace = run_primal_dual(G, oracle, witnesses=False)
    report = verify_certificates(trace, oracle, Mode.WEAKLY_UNCROSSABLE_P1, check_witnesses=False)
    pd_cost = G.cost(chosen)
    hub_bound = Fraction(len(layout.hub_edges))
    opt, exact = hub_bound, False
    if k <= exact_k_max:
        budget = budget or SolveBudget(max_nodes=G.n, max_edges=G.m, max_family=10**6)
        try:
            _, opt = exact_min_cost_cover(oracle, G, budget=budget)
            exact = True
        except BudgetExceeded:
            pass
    return GapRow(
        k=k,
        pd_cost=pd_cost,
        dual_sum=trace.dual_sum,
        opt=opt,
        opt_exact=exact,
        ratio=pd_cost / opt,
        waves=trace.waves,
        deleted=list(trace.deleted),
        level_edges_only=set(chosen) == set(layout.level_edges),
        certificate_ok=report.ok,
        max_charge_ratio=report.max_charge_ratio,
        oracle="explicit" if isinstance(oracle, FamilyOracle) else "implicit",
    )


def run_gap_experiment(k_min: int, k_max: int, **kwargs) -> list[GapRow]:
    return [run_gap_row(k, **kwargs) for k in range(k_min, k_max + 1)]
