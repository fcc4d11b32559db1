"""Approximation algorithms and verification tools for (p,2)-flexible graph connectivity."""
from .counterexample import (
    CounterexampleOracle,
    build_counterexample,
    counterexample_graph,
    run_gap_experiment,
)
from .exact import BudgetExceeded, SolveBudget, exact_min_cost_cover, exact_min_cost_feasible
from .families import (
    CutFamily,
    ViolatedCollections,
    check_property_P1,
    check_uncrossable,
    check_weakly_uncrossable,
    close_complements,
    lemma51_precondition_check,
    two_of_four_closure_check,
    parity_check,
    violated_collections,
)
from .generators import generate_bundle_instance, generate_random_instance
from .graph import (
    ContractViolation,
    LabeledMultigraph,
    NodeShore,
    between,
    counting_identities_check,
    cut_edges,
    edge_connectivity,
)
from .model import DeficiencyWitness, FgcInstance, InfeasibleInstance, deficient_cuts, is_feasible
from .pipeline import P2FGCSolver, PipelineResult, solve_p2fgc, stage1_p1fgc
from .primal_dual import (
    FamilyOracle,
    Mode,
    PrimalDualTrace,
    find_witness,
    reverse_delete,
    run_primal_dual,
    verify_certificates,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ContractViolation",
    "CounterexampleOracle",
    "CutFamily",
    "DeficiencyWitness",
    "FamilyOracle",
    "FgcInstance",
    "InfeasibleInstance",
    "LabeledMultigraph",
    "Mode",
    "NodeShore",
    "P2FGCSolver",
    "PipelineResult",
    "PrimalDualTrace",
    "SolveBudget",
    "ViolatedCollections",
    "between",
    "build_counterexample",
    "check_property_P1",
    "check_uncrossable",
    "check_weakly_uncrossable",
    "close_complements",
    "counterexample_graph",
    "counting_identities_check",
    "cut_edges",
    "deficient_cuts",
    "edge_connectivity",
    "exact_min_cost_cover",
    "exact_min_cost_feasible",
    "find_witness",
    "generate_bundle_instance",
    "generate_random_instance",
    "is_feasible",
    "lemma51_precondition_check",
    "parity_check",
    "reverse_delete",
    "run_gap_experiment",
    "run_primal_dual",
    "solve_p2fgc",
    "stage1_p1fgc",
    "two_of_four_closure_check",
    "verify_certificates",
    "violated_collections",
]
