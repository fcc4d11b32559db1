"""Labeled multigraphs, node shores and the cut primitives built on them.

Node sets are handled internally as integer bitmasks (bit ``i`` set means
node ``i`` is a member) and edge sets as integer bitmasks over edge ids.
:class:`NodeShore` is the public wrapper around a node bitmask.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import networkx as nx
import numpy as np

SAFE = "S"
UNSAFE = "U"


class ContractViolation(ValueError):
    """An operation was called with arguments outside its domain."""


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return mask


def parse_cost(text: str) -> Fraction:
    cost = Fraction(text.strip())
    if cost < 0:
        raise ContractViolation(f"negative edge cost {text!r}")
    return cost


def format_cost(cost: Fraction) -> str:
    """Decimal form when the value has a finite decimal expansion, else ``p/q``."""
    cost = Fraction(cost)
    if cost.denominator == 1:
        return str(cost.numerator)
    d = cost.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{cost.numerator}/{cost.denominator}"
    places = max(twos, fives)
    scaled = cost * 10**places
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    sign = "-" if scaled < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    cost: Fraction
    safe: bool

    @property
    def label(self) -> str:
        return SAFE if self.safe else UNSAFE


@dataclass(frozen=True)
class NodeShore:
    """One side of a cut ``delta(S)``.

    The stored orientation is the one the caller supplied; :meth:`canonical`
    gives the orientation that does not contain node 0, which is how cut
    families deduplicate ``S`` and its complement.
    """

    mask: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ContractViolation("shore needs a ground set of at least one node")
        if self.mask < 0 or self.mask >> self.n:
            raise ContractViolation(f"mask {self.mask:#x} has nodes outside [0, {self.n})")

    @classmethod
    def of(cls, members: Iterable[int], n: int) -> "NodeShore":
        members = list(members)
        for v in members:
            if not 0 <= int(v) < n:
                raise ContractViolation(f"node {v} outside [0, {n})")
        return cls(to_mask(members), n)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def members(self) -> frozenset[int]:
        return frozenset(bits(self.mask))

    def sorted(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    def complement(self) -> "NodeShore":
        return NodeShore(self.full ^ self.mask, self.n)

    def canonical(self) -> "NodeShore":
        return self.complement() if self.mask & 1 else self

    def same_cut(self, other: "NodeShore") -> bool:
        return self.n == other.n and self.canonical().mask == other.canonical().mask

    @property
    def is_proper(self) -> bool:
        return 0 < self.mask < self.full

    def require_proper(self) -> "NodeShore":
        if not self.is_proper:
            raise ContractViolation(f"{self} is not a nonempty proper node subset")
        return self

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return bits(self.mask)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, (int, np.integer)) and 0 <= int(v) < self.n and bool(self.mask >> int(v) & 1)

    def __str__(self) -> str:
        return "S={" + ",".join(map(str, self.sorted())) + "}"


def as_mask(shore: NodeShore | Iterable[int] | int) -> int:
    if isinstance(shore, NodeShore):
        return shore.mask
    if isinstance(shore, (int, np.integer)):
        return int(shore)
    return to_mask(shore)


@dataclass(frozen=True, eq=False)
class LabeledMultigraph:
    """Loop-free undirected multigraph whose edges carry a cost and a safety label.

    Edge ids are the positions in ``edges``.  Instances are immutable; cut
    masks are memoised per instance.
    """

    n: int
    edges: tuple[Edge, ...]
    _cut_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ContractViolation("a graph needs at least two nodes")
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise ContractViolation(f"edge ids must be dense and ordered; got {e.id} at position {i}")
            if e.u == e.v:
                raise ContractViolation(f"edge {e.id} is a loop at node {e.u}")
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise ContractViolation(f"edge {e.id} has an endpoint outside [0, {self.n})")
            if e.cost < 0:
                raise ContractViolation(f"edge {e.id} has negative cost")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple]) -> "LabeledMultigraph":
        """Build from ``(u, v, cost, label)`` tuples; label is ``"S"``/``"U"`` or a bool (True = safe)."""
        built = []
        for i, (u, v, cost, label) in enumerate(edges):
            safe = label if isinstance(label, bool) else str(label).upper() == SAFE
            if not isinstance(label, bool) and str(label).upper() not in (SAFE, UNSAFE):
                raise ContractViolation(f"edge label must be S or U, got {label!r}")
            built.append(Edge(i, int(u), int(v), Fraction(cost), bool(safe)))
        return cls(int(n), tuple(built))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def all_edges(self) -> int:
        return (1 << self.m) - 1

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def safe_mask(self) -> int:
        return to_mask(e.id for e in self.edges if e.safe)

    @property
    def unsafe_mask(self) -> int:
        return to_mask(e.id for e in self.edges if not e.safe)

    def cost(self, edge_set: Iterable[int] | int) -> Fraction:
        ids = bits(edge_set) if isinstance(edge_set, int) else edge_set
        return sum((self.edges[i].cost for i in ids), Fraction(0))

    def shore(self, members: Iterable[int]) -> NodeShore:
        return NodeShore.of(members, self.n)

    def cut_mask(self, node_mask: int) -> int:
        """Edge bitmask of ``delta(S)`` for an arbitrary node bitmask (empty for ``{}`` and ``V``)."""
        cached = self._cut_cache.get(node_mask)
        if cached is None:
            cached = 0
            for e in self.edges:
                if (node_mask >> e.u ^ node_mask >> e.v) & 1:
                    cached |= 1 << e.id
            if len(self._cut_cache) < 1 << 16:
                self._cut_cache[node_mask] = cached
        return cached

    def between_mask(self, x: int, y: int) -> int:
        out = 0
        for e in self.edges:
            if (x >> e.u & 1 and y >> e.v & 1) or (x >> e.v & 1 and y >> e.u & 1):
                out |= 1 << e.id
        return out

    def incidence(self, node_masks: np.ndarray) -> np.ndarray:
        """Boolean matrix ``[len(node_masks), m]``: entry true iff the edge crosses that node set."""
        node_masks = np.asarray(node_masks, dtype=np.int64)
        us = np.array([e.u for e in self.edges], dtype=np.int64)
        vs = np.array([e.v for e in self.edges], dtype=np.int64)
        return (((node_masks[:, None] >> us) ^ (node_masks[:, None] >> vs)) & 1).astype(bool)

    def to_networkx(self, edge_set: int | None = None) -> nx.Graph:
        """Simple graph on all nodes; parallel edges collapse into an integer ``capacity``."""
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        chosen = self.all_edges if edge_set is None else edge_set
        for i in bits(chosen):
            e = self.edges[i]
            if g.has_edge(e.u, e.v):
                g[e.u][e.v]["capacity"] += 1
            else:
                g.add_edge(e.u, e.v, capacity=1)
        return g

    def with_edges(self, extra: Iterable[tuple]) -> "LabeledMultigraph":
        rows = [(e.u, e.v, e.cost, e.safe) for e in self.edges] + list(extra)
        return LabeledMultigraph.from_edges(self.n, rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LabeledMultigraph) and (self.n, self.edges) == (other.n, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges))


def edge_set_mask(G: LabeledMultigraph, F: Iterable[int] | int | None) -> int:
    """Normalise an edge set argument to a bitmask, checking ids against ``G``."""
    if F is None:
        return G.all_edges
    mask = int(F) if isinstance(F, (int, np.integer)) else to_mask(F)
    if mask >> G.m:
        raise ContractViolation(f"edge set refers to ids outside [0, {G.m})")
    return mask


def _proper_mask(G: LabeledMultigraph, S) -> int:
    if isinstance(S, NodeShore) and S.n != G.n:
        raise ContractViolation(f"shore over {S.n} nodes used with a graph on {G.n} nodes")
    mask = as_mask(S)
    if not 0 < mask < G.full:
        raise ContractViolation("cut shore must be a nonempty proper subset of V")
    return mask


def cut_edges(G: LabeledMultigraph, S: NodeShore | Iterable[int]) -> frozenset[int]:
    return frozenset(bits(G.cut_mask(_proper_mask(G, S))))


def between(G: LabeledMultigraph, X: NodeShore | Iterable[int], Y: NodeShore | Iterable[int]) -> frozenset[int]:
    x, y = as_mask(X), as_mask(Y)
    if x & y:
        raise ContractViolation("between() needs disjoint node sets")
    if (x | y) >> G.n:
        raise ContractViolation("node set has members outside the graph")
    return frozenset(bits(G.between_mask(x, y)))


def _flow_connectivity(G: LabeledMultigraph, F: int) -> tuple[int, int]:
    """Min over sinks t of maxflow(0, t); returns (value, shore mask on the sink side)."""
    H = G.to_networkx(F)
    best, best_shore = None, 0
    for t in range(1, G.n):
        value, (_, sink_side) = nx.minimum_cut(H, 0, t, capacity="capacity")
        if best is None or value < best:
            best, best_shore = value, to_mask(sink_side)
        if best == 0:
            break
    return int(best), best_shore


def edge_connectivity(G: LabeledMultigraph, F: Iterable[int] | int | None = None) -> int:
    """Edge connectivity of ``(V, F)`` via ``n - 1`` max-flow computations rooted at node 0."""
    return _flow_connectivity(G, edge_set_mask(G, F))[0]


def min_cut(G: LabeledMultigraph, F: Iterable[int] | int | None = None) -> tuple[int, NodeShore]:
    value, shore = _flow_connectivity(G, edge_set_mask(G, F))
    return value, NodeShore(shore, G.n)


def canonical_masks(n: int) -> np.ndarray:
    """All nonempty proper node subsets that avoid node 0, as increasing bitmasks."""
    if n > 30:
        raise ContractViolation(f"refusing to enumerate 2^{n - 1} shores")
    return np.arange(1, 1 << (n - 1), dtype=np.int64) << 1


def edge_connectivity_exhaustive(G: LabeledMultigraph, F: Iterable[int] | int | None = None) -> int:
    """Reference value by scanning every shore; exponential in ``n``."""
    F = edge_set_mask(G, F)
    chosen = np.array([bool(F >> e.id & 1) for e in G.edges], dtype=bool)
    inc = G.incidence(canonical_masks(G.n))
    return int((inc & chosen).sum(axis=1).min()) if G.m else 0


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of the three cut-counting identities for a pair of shores."""

    union_intersection: tuple[int, int]
    differences: tuple[int, int]
    difference_intersection: tuple[int, int]

    @property
    def holds(self) -> bool:
        return all(lhs == rhs for lhs, rhs in dataclasses.astuple(self))


def counting_identities_check(
    G: LabeledMultigraph, F: Iterable[int] | int | None, A: NodeShore | Iterable[int], B: NodeShore | Iterable[int]
) -> IdentityReport:
    """Evaluate the union/intersection, difference and mixed counting identities on ``F``.

    Cut sizes of the empty set and of ``V`` count as zero.
    """
    F = edge_set_mask(G, F)
    a, b = _proper_mask(G, A), _proper_mask(G, B)
    outside = G.full ^ (a | b)

    def d(mask: int) -> int:
        return (G.cut_mask(mask) & F).bit_count()

    def e(x: int, y: int) -> int:
        return (G.between_mask(x, y) & F).bit_count()

    da, db = d(a), d(b)
    return IdentityReport(
        union_intersection=(d(a | b) + d(a & b) + 2 * e(a & ~b, b & ~a), da + db),
        differences=(d(a & ~b) + d(b & ~a) + 2 * e(a & b, outside), da + db),
        difference_intersection=(d(a & ~b) + d(a & b), da + 2 * e(a & ~b, a & b)),
    )


def crosses(a: int, b: int, full: int) -> bool:
    return bool(a & b) and bool(a & ~b & full) and bool(b & ~a & full) and (a | b) != full


def read_graph_text(text: str) -> tuple[LabeledMultigraph, int, int]:
    """Parse the ``n m p q`` / ``u v cost S|U`` text format; returns ``(G, p, q)``."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ContractViolation("empty instance file")
    header = lines[0].split()
    if len(header) != 4:
        raise ContractViolation(f"header must be 'n m p q', got {lines[0]!r}")
    n, m, p, q = map(int, header)
    if len(lines) - 1 != m:
        raise ContractViolation(f"header announces {m} edges, file has {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4:
            raise ContractViolation(f"edge line must be 'u v cost S|U', got {ln!r}")
        rows.append((int(parts[0]), int(parts[1]), parse_cost(parts[2]), parts[3]))
    return LabeledMultigraph.from_edges(n, rows), p, q


def write_graph_text(G: LabeledMultigraph, p: int, q: int) -> str:
    out = [f"{G.n} {G.m} {p} {q}"]
    out += [f"{e.u} {e.v} {format_cost(e.cost)} {e.label}" for e in G.edges]
    return "\n".join(out) + "\n"
