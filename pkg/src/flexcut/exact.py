"""Exact minimum-cost solvers used as ground truth at desk scale.

Both solvers share one branch-and-bound: find a violated constraint for the
current partial solution, then branch on each edge that could help it (the
i-th branch includes edge i and forbids edges 0..i-1 of that constraint).
Leaves are feasible sets; a branch is cut once its cost plus the cheapest
usable helper edge exceeds the incumbent.  Ties keep the smaller
``(cost, sorted edge ids)`` key, so the result does not depend on the
traversal schedule.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .families import CutFamily
from .graph import ContractViolation, LabeledMultigraph, bits, edge_set_mask
from .model import FgcInstance, InfeasibleInstance, N_MAX, cut_counts, is_feasible
from .primal_dual import FamilyOracle, InfeasibleCover


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveBudget:
    max_nodes: int = 12
    max_edges: int = 20
    max_subsets_explored: int = 2_000_000
    max_family: int = 10_000

    def __post_init__(self):
        if min(self.max_nodes, self.max_edges, self.max_subsets_explored, self.max_family) <= 0:
            raise ContractViolation("budget limits must be positive")


COVER_BUDGET = SolveBudget(max_nodes=64, max_edges=24, max_family=10_000)


def _key(cost: Fraction, mask: int) -> tuple:
    return cost, tuple(bits(mask))


def _branch_and_bound(
    G: LabeledMultigraph,
    allowed: int,
    helpers: Callable[[int], int | None],
    budget: SolveBudget,
) -> tuple[int, Fraction]:
    """``helpers(chosen)`` returns None when ``chosen`` is feasible, else the edges able to repair
    one violated constraint."""
    costs = [e.cost for e in G.edges]
    order = sorted(range(G.m), key=lambda i: (costs[i], i))
    best: list = [None, None]
    explored = 0

    def visit(chosen: int, excluded: int, cost: Fraction) -> None:
        nonlocal explored
        explored += 1
        if explored > budget.max_subsets_explored:
            raise BudgetExceeded(f"explored more than {budget.max_subsets_explored} search nodes")
        need = helpers(chosen)
        if need is None:
            if best[0] is None or _key(cost, chosen) < _key(best[1], best[0]):
                best[0], best[1] = chosen, cost
            return
        usable = [e for e in order if (need & allowed & ~chosen & ~excluded) >> e & 1]
        if not usable:
            return
        if best[0] is not None and cost + costs[usable[0]] > best[1]:
            return
        banned = excluded
        for e in usable:
            if best[0] is not None and cost + costs[e] > best[1]:
                break
            visit(chosen | 1 << e, banned, cost + costs[e])
            banned |= 1 << e

    visit(0, 0, Fraction(0))
    if best[0] is None:
        raise InfeasibleCover("no feasible edge set exists")
    return best[0], best[1]


def _fgc_helpers(inst: FgcInstance, q: int, n_max: int) -> Callable[[int], int | None]:
    G, p = inst.graph, inst.p
    masks, _, _ = cut_counts(G, 0, n_max)
    cuts = np.array([G.cut_mask(int(s)) for s in masks], dtype=np.uint64)
    safe = cuts & np.uint64(G.safe_mask)
    unsafe = cuts & np.uint64(G.unsafe_mask)

    def helpers(chosen: int) -> int | None:
        f = np.uint64(chosen)
        s = np.bitwise_count(safe & f).astype(np.int64)
        u = np.bitwise_count(unsafe & f).astype(np.int64)
        bad = s + np.maximum(0, u - q) < p
        if not bad.any():
            return None
        idx = np.flatnonzero(bad)
        room = np.bitwise_count(cuts[idx] & ~f)
        return int(cuts[idx[int(np.argmin(room))]])

    return helpers


def exact_min_cost_feasible(
    inst: FgcInstance,
    budget: SolveBudget | None = None,
    *,
    q: int | None = None,
    n_max: int = N_MAX,
) -> tuple[frozenset[int], Fraction]:
    """Minimum-cost (p,q)-feasible edge set; ``q`` overrides the instance's own value."""
    budget = budget or SolveBudget()
    G = inst.graph
    q = inst.q if q is None else q
    if G.n > budget.max_nodes or G.m > budget.max_edges:
        raise BudgetExceeded(f"instance n={G.n}, m={G.m} exceeds budget n<={budget.max_nodes}, m<={budget.max_edges}")
    if G.m > 63:
        raise BudgetExceeded("edge masks limited to 63 edges")
    verdict = is_feasible(inst, None, q=q)
    if not verdict.feasible:
        raise InfeasibleInstance(f"E itself is not ({inst.p},{q})-feasible: {verdict.witness}", verdict.witness)
    chosen, cost = _branch_and_bound(G, G.all_edges, _fgc_helpers(inst, q, n_max), budget)
    return frozenset(bits(chosen)), cost


def exhaustive_min_cost_feasible(inst: FgcInstance, *, q: int | None = None) -> tuple[frozenset[int], Fraction]:
    """Plain enumeration of all ``2^m`` subsets; reference for the branch-and-bound."""
    G = inst.graph
    q = inst.q if q is None else q
    if G.m > 16:
        raise BudgetExceeded("plain enumeration limited to 16 edges")
    best = None
    for r in range(G.m + 1):
        for combo in itertools.combinations(range(G.m), r):
            mask = sum(1 << e for e in combo)
            key = _key(G.cost(mask), mask)
            if best is not None and key >= best:
                continue
            if is_feasible(inst, mask, q=q).feasible:
                best = key
    if best is None:
        raise InfeasibleInstance("no feasible edge set")
    return frozenset(best[1]), best[0]


def exact_min_cost_cover(
    fam,
    G: LabeledMultigraph,
    costs: Iterable | None = None,
    budget: SolveBudget | None = None,
    *,
    candidates: Iterable[int] | int | None = None,
) -> tuple[frozenset[int], Fraction]:
    """Cheapest edge set crossing every positive shore of ``fam``.

    ``fam`` is a :class:`CutFamily` or any violation oracle.  ``costs``
    replaces the graph's edge costs when given.
    """
    budget = budget or COVER_BUDGET
    if costs is not None:
        costs = [Fraction(c) for c in costs]
        if len(costs) != G.m:
            raise ContractViolation("one cost per edge required")
        G = LabeledMultigraph.from_edges(G.n, [(e.u, e.v, c, e.safe) for e, c in zip(G.edges, costs)])
    if isinstance(fam, CutFamily):
        if len(fam) > budget.max_family:
            raise BudgetExceeded(f"family of {len(fam)} shores exceeds budget {budget.max_family}")
        oracle = FamilyOracle(fam, G)
    else:
        oracle = fam
    if G.m > budget.max_edges:
        raise BudgetExceeded(f"{G.m} edges exceeds budget {budget.max_edges}")
    allowed = edge_set_mask(G, candidates)
    if not oracle.is_covered(allowed):
        raise InfeasibleCover("some shore has no candidate edge in its cut")

    def helpers(chosen: int) -> int | None:
        pending = oracle.minimal_violated(chosen)
        if not pending:
            return None
        return min((G.cut_mask(s) & allowed for s in pending), key=lambda c: (c.bit_count(), c))

    chosen, cost = _branch_and_bound(G, allowed, helpers, budget)
    return frozenset(bits(chosen)), cost
