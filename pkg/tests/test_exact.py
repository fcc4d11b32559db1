from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from flexcut.cli import golden_line
from flexcut.exact import (
    BudgetExceeded,
    SolveBudget,
    exact_min_cost_cover,
    exact_min_cost_feasible,
    exhaustive_min_cost_feasible,
)
from flexcut.families import CutFamily
from flexcut.generators import generate_random_instance
from flexcut.model import FgcInstance, InfeasibleInstance, is_feasible
from flexcut.primal_dual import InfeasibleCover
from test_graph import multigraphs

GOLDEN_INSTANCES = [
    "seed1_n6_m12_p2.fgc",
    "seed7_n4_m10_p3_costs.fgc",
    "seed3_n6_m10_p1_costs.fgc",
    "four_node_plus_diagonals_p3.fgc",
]


@pytest.mark.parametrize("name", GOLDEN_INSTANCES)
def test_golden_optima(data_dir, name):
    golden = set((data_dir / "golden.txt").read_text().splitlines())
    inst = FgcInstance.load(data_dir / name)
    edges, cost = exact_min_cost_feasible(inst)
    assert golden_line(inst, edges, cost) in golden


def test_four_node_q1_optimum_is_everything(four_node_instance):
    # every node has degree 4 and p = 3, so no edge can go
    edges, cost = exact_min_cost_feasible(four_node_instance)
    assert cost == 8 and edges == set(range(8))
    with pytest.raises(InfeasibleInstance):
        exact_min_cost_feasible(four_node_instance, q=2)


@settings(max_examples=60, deadline=None)
@given(multigraphs(n_min=2, n_max=5, m_max=9), st.integers(1, 3), st.integers(0, 2))
def test_branch_and_bound_matches_enumeration(G, p, q):
    inst = FgcInstance(G, p, q, check=False)
    if not is_feasible(inst, None).feasible:
        with pytest.raises(InfeasibleInstance):
            exact_min_cost_feasible(inst)
        return
    edges, cost = exact_min_cost_feasible(inst)
    assert is_feasible(inst, edges).feasible
    ref = oracles.min_cost_feasible(G.n, oracles.edge_rows(G), p, q)
    assert cost == ref[0]
    if all(e.cost > 0 for e in G.edges):
        # with positive costs every optimum is inclusion-minimal, so the tie-break is exact
        assert tuple(sorted(edges)) == ref[1]
    assert exhaustive_min_cost_feasible(inst)[1] == cost


def test_budget_guards():
    inst = generate_random_instance(0, 6, 12, 2)
    with pytest.raises(BudgetExceeded):
        exact_min_cost_feasible(inst, SolveBudget(max_nodes=5))
    with pytest.raises(BudgetExceeded):
        exact_min_cost_feasible(inst, SolveBudget(max_edges=10))
    with pytest.raises(BudgetExceeded):
        exact_min_cost_feasible(inst, SolveBudget(max_subsets_explored=3))


@settings(max_examples=80, deadline=None)
@given(multigraphs(n_min=3, n_max=6, m_max=10), st.data())
def test_cover_matches_enumeration(G, data):
    fam = CutFamily.from_masks(G.n, data.draw(st.lists(st.integers(1, G.full - 1), min_size=1, max_size=6)))
    cand = data.draw(st.integers(0, G.all_edges))
    ids = [e for e in range(G.m) if cand >> e & 1]
    ref = oracles.cover_min_cost(G.n, oracles.edge_rows(G), [s.members for s in fam], ids)
    if ref is None:
        with pytest.raises(InfeasibleCover):
            exact_min_cost_cover(fam, G, candidates=cand)
        return
    edges, cost = exact_min_cost_cover(fam, G, candidates=cand)
    assert cost == ref[0]
    assert edges <= set(ids)


def test_cover_cost_override():
    G = generate_random_instance(2, 4, 6, 1).graph
    fam = CutFamily.from_masks(4, [0b0010])
    _, cost = exact_min_cost_cover(fam, G, costs=[Fraction(1, 2)] * G.m)
    assert cost == Fraction(1, 2)


@pytest.mark.parametrize("p, n, m, safe_prob", [(1, 5, 8, 0.3), (2, 4, 8, 0.5), (3, 3, 8, 0.6)])
def test_seeded_optima_match_enumeration(p, n, m, safe_prob):
    for seed in range(15):
        for q in (1, 2):
            inst = generate_random_instance(seed, n, m, p, safe_prob, (1, 4), q=q)
            ref = oracles.min_cost_feasible(n, oracles.edge_rows(inst.graph), p, q)
            edges, cost = exact_min_cost_feasible(inst)
            assert (cost, tuple(sorted(edges))) == ref
