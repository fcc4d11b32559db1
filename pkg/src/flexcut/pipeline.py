"""Two-stage (p,2) solver: a (p,1)-feasible base, then primal-dual augmentation of deficient cuts."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exact import SolveBudget, exact_min_cost_feasible
from .families import CutFamily, check_property_P1, check_uncrossable, check_weakly_uncrossable
from .graph import bits, format_cost, to_mask
from .model import N_MAX, FgcInstance, InfeasibleInstance, deficient_cuts, is_feasible
from .primal_dual import (
    CertificateReport,
    FamilyOracle,
    Mode,
    PrimalDualTrace,
    run_primal_dual,
    verify_certificates,
)
from .validation import check_instance


class Stage1Mode(str, enum.Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"


class StructureError(AssertionError):
    """The deficient family lacks the crossing structure its parity guarantees."""


def stage1_p1fgc(
    inst: FgcInstance, mode: Stage1Mode | str = Stage1Mode.EXACT, budget: SolveBudget | None = None
) -> frozenset[int]:
    """A (p,1)-feasible edge set.

    ``exact`` solves (p,1) to optimality.  ``heuristic`` starts from E and drops
    edges in decreasing cost order (ties: lower id first) while (p,1)-feasibility
    holds; it carries no approximation guarantee.
    """
    mode = Stage1Mode(mode)
    verdict = is_feasible(inst, None, q=1)
    if not verdict.feasible:
        raise InfeasibleInstance(f"instance is not ({inst.p},1)-feasible: {verdict.witness}", verdict.witness)
    if mode is Stage1Mode.EXACT:
        return exact_min_cost_feasible(inst, budget, q=1)[0]
    G = inst.graph
    current = G.all_edges
    for e in sorted(G.edges, key=lambda e: (-e.cost, e.id)):
        trial = current & ~(1 << e.id)
        if is_feasible(inst, trial, q=1).feasible:
            current = trial
    return frozenset(bits(current))


@dataclass
class PipelineResult:
    stage1_edges: frozenset[int]
    augmentation_edges: frozenset[int]
    stage1_cost: Fraction
    augmentation_cost: Fraction
    parity_branch: str
    certificates: CertificateReport
    family: CutFamily = field(repr=False)
    trace: PrimalDualTrace = field(repr=False)
    family_stats: dict = field(default_factory=dict)

    @property
    def edges(self) -> frozenset[int]:
        return self.stage1_edges | self.augmentation_edges

    @property
    def total_cost(self) -> Fraction:
        return self.stage1_cost + self.augmentation_cost

    def to_dict(self) -> dict:
        return {
            "parity_branch": self.parity_branch,
            "edges": sorted(self.edges),
            "stage1_edges": sorted(self.stage1_edges),
            "augmentation_edges": sorted(self.augmentation_edges),
            "stage1_cost": format_cost(self.stage1_cost),
            "augmentation_cost": format_cost(self.augmentation_cost),
            "total_cost": format_cost(self.total_cost),
            "family_stats": dict(self.family_stats),
            "certificates": self.certificates.to_dict(),
            "trace": self.trace.to_dict(),
        }


def p1_samples(trace: PrimalDualTrace, candidates: int, n_random: int = 100, seed: int = 0) -> list[int]:
    """Edge sets for the nested-crossing check: every prefix of the run plus random candidate subsets."""
    samples = [trace.edges_before(i) for i in range(len(trace.added) + 1)]
    samples.append(trace.final_mask)
    rng = random.Random(seed)
    pool = list(bits(candidates))
    for _ in range(n_random):
        samples.append(to_mask(e for e in pool if rng.random() < 0.5))
    return list(dict.fromkeys(samples))


def solve_p2fgc(
    inst: FgcInstance,
    stage1_mode: Stage1Mode | str = Stage1Mode.EXACT,
    *,
    strict: bool = True,
    p1_random_samples: int = 100,
    budget: SolveBudget | None = None,
    n_max: int = N_MAX,
) -> PipelineResult:
    """Solve (p,2)-FGC: stage-1 base ``F1``, then cover the deficient cuts of ``F1`` with edges of ``E - F1``.

    ``strict`` turns certificate failures into exceptions; structural failures
    (even ``p`` not uncrossable, odd ``p`` not weakly uncrossable) always raise.
    """
    inst = check_instance(inst)
    if not is_feasible(inst, None, q=2).feasible:
        raise InfeasibleInstance(f"instance is not ({inst.p},2)-feasible")
    G, p = inst.graph, inst.p
    F1 = stage1_p1fgc(inst, stage1_mode, budget)
    F1_mask = to_mask(F1)
    family = deficient_cuts(inst, F1_mask, n_max=n_max)
    even = p % 2 == 0
    stats = {"deficient_cuts": len(family)}
    if even:
        ok, pair = check_uncrossable(family)
        stats["uncrossable"] = ok
        if not ok:
            raise StructureError(f"deficient family for even p={p} is not uncrossable: {pair[0]}, {pair[1]}")
    else:
        ok, pair = check_weakly_uncrossable(family)
        stats["weakly_uncrossable"] = ok
        if not ok:
            raise StructureError(f"deficient family for odd p={p} is not weakly uncrossable: {pair[0]}, {pair[1]}")

    candidates = G.all_edges & ~F1_mask
    oracle = FamilyOracle(family, G)
    chosen, trace = run_primal_dual(G, oracle, candidates)
    mode = Mode.UNCROSSABLE if even else Mode.WEAKLY_UNCROSSABLE_P1
    report = verify_certificates(trace, oracle, mode, strict=strict)
    if not even:
        p1_ok, _ = check_property_P1(family, G, p1_samples(trace, candidates, p1_random_samples))
        stats["property_P1"] = p1_ok
    missing = [e for e in chosen if e not in trace.witness_map]
    stats["witnesses_found"] = not missing
    if missing and strict:
        raise AssertionError(f"no witness shore for output edges {sorted(missing)}")

    final = F1_mask | to_mask(chosen)
    verdict = is_feasible(inst, final, q=2)
    if not verdict.feasible:
        raise AssertionError(f"pipeline output is not ({p},2)-feasible: {verdict.witness}")
    return PipelineResult(
        stage1_edges=frozenset(F1),
        augmentation_edges=frozenset(chosen),
        stage1_cost=G.cost(F1),
        augmentation_cost=G.cost(chosen),
        parity_branch="EVEN" if even else "ODD",
        certificates=report,
        family=family,
        trace=trace,
        family_stats=stats,
    )


class P2FGCSolver(BaseEstimator):
    """Estimator-style front end to :func:`solve_p2fgc`.

    ``fit`` takes an :class:`FgcInstance` (or instance text / path) and stores
    the result in ``result_``, ``edges_`` and ``cost_``.
    """

    def __init__(self, stage1: str = "exact", strict: bool = True, p1_random_samples: int = 100, n_max: int = N_MAX):
        self.stage1 = stage1
        self.strict = strict
        self.p1_random_samples = p1_random_samples
        self.n_max = n_max

    def fit(self, X, y=None):
        inst = check_instance(X)
        self.result_ = solve_p2fgc(
            inst, self.stage1, strict=self.strict, p1_random_samples=self.p1_random_samples, n_max=self.n_max
        )
        self.edges_ = self.result_.edges
        self.cost_ = self.result_.total_cost
        self.n_nodes_ = inst.n
        return self

    def predict(self, X=None):
        """Chosen edge ids as a sorted list."""
        check_is_fitted(self, "result_")
        return sorted(self.edges_)

    def score(self, X, y=None) -> float:
        """Negative total cost, so that larger is better."""
        check_is_fitted(self, "result_")
        return -float(self.cost_)

