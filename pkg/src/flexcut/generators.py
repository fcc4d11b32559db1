"""Seeded random instances."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .graph import LabeledMultigraph
from .model import FgcInstance, is_feasible


class GenerationFailed(RuntimeError):
    pass


def random_multigraph(
    rng: np.random.Generator, n: int, m: int, safe_prob: float, cost_range: tuple[int, int]
) -> LabeledMultigraph:
    """A Hamiltonian cycle on a random node order plus ``m - n`` uniform random extra edges."""
    if m < n:
        raise ValueError(f"need m >= n for the spanning cycle, got n={n}, m={m}")
    order = rng.permutation(n)
    pairs = [(int(order[i]), int(order[(i + 1) % n])) for i in range(n)]
    while len(pairs) < m:
        u, v = rng.choice(n, size=2, replace=False)
        pairs.append((int(u), int(v)))
    lo, hi = cost_range
    rows = []
    for u, v in pairs:
        cost = Fraction(int(rng.integers(lo, hi + 1)))
        rows.append((u, v, cost, bool(rng.random() < safe_prob)))
    return LabeledMultigraph.from_edges(n, rows)


def generate_random_instance(
    seed: int,
    n: int,
    m: int,
    p: int,
    safe_prob: float = 0.5,
    cost_range: tuple[int, int] = (1, 1),
    *,
    q: int = 2,
    max_retries: int = 500,
) -> FgcInstance:
    """Deterministic per seed: draws multigraphs until one is (p, q)-feasible."""
    if min(n, m, p) <= 0 or not 0 <= safe_prob <= 1 or cost_range[0] < 0 or cost_range[1] < cost_range[0]:
        raise ValueError("invalid generator parameters")
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        G = random_multigraph(rng, n, m, safe_prob, cost_range)
        inst = FgcInstance(G, p, q, check=False)
        if is_feasible(inst, None).feasible:
            return FgcInstance(G, p, q, check=False)
    raise GenerationFailed(f"no ({p},{q})-feasible instance after {max_retries} draws (seed={seed}, n={n}, m={m})")


def bundle_cycle_multigraph(
    rng: np.random.Generator, n: int, p: int, safe_prob: float, chords: int, cost_range: tuple[int, int]
) -> LabeledMultigraph:
    """A cycle whose consecutive nodes are joined by bundles of ``ceil(p/2)`` or ``ceil(p/2) + 1``
    parallel edges, plus ``chords`` random extra edges.

    Every arc of the cycle then has a cut of size ``p``..``p + 3``, so crossing
    ``(p + 1)``-cuts are common.
    """
    base = -(-p // 2)
    order = rng.permutation(n)
    pairs = []
    for i in range(n):
        u, v = int(order[i]), int(order[(i + 1) % n])
        pairs += [(u, v)] * (base + int(rng.integers(0, 2)))
    for _ in range(chords):
        u, v = rng.choice(n, size=2, replace=False)
        pairs.append((int(u), int(v)))
    lo, hi = cost_range
    rows = [(u, v, Fraction(int(rng.integers(lo, hi + 1))), bool(rng.random() < safe_prob)) for u, v in pairs]
    return LabeledMultigraph.from_edges(n, rows)


def generate_bundle_instance(
    seed: int,
    n: int,
    p: int,
    safe_prob: float = 0.5,
    chords: int = 0,
    cost_range: tuple[int, int] = (1, 1),
    *,
    q: int = 2,
    max_retries: int = 500,
) -> FgcInstance:
    """Like :func:`generate_random_instance` but over :func:`bundle_cycle_multigraph` draws."""
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        G = bundle_cycle_multigraph(rng, n, p, safe_prob, chords, cost_range)
        inst = FgcInstance(G, p, q, check=False)
        if is_feasible(inst, None).feasible:
            return inst
    raise GenerationFailed(f"no ({p},{q})-feasible bundle instance after {max_retries} draws (seed={seed})")
