"""Explicit cut families and their structural checkers.

A :class:`CutFamily` stores one canonical shore per cut (the side without
node 0); its membership function answers 1 on both orientations.  The pair
checkers below therefore only iterate canonical representatives: for a
complement-closed ``h`` replacing ``A`` by its complement permutes the four
derived sets ``A|B, A&B, A-B, B-A`` up to complementation, which leaves both
the uncrossable and the weakly uncrossable condition unchanged.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .graph import ContractViolation, LabeledMultigraph, NodeShore, as_mask, bits, crosses, edge_set_mask


def _canon(mask: int, full: int) -> int:
    return full ^ mask if mask & 1 else mask


@dataclass(frozen=True, eq=False)
class CutFamily:
    n: int
    masks: tuple[int, ...]
    info: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        full = (1 << self.n) - 1
        for mask in self.masks:
            if not 0 < mask < full or mask & 1:
                raise ContractViolation(f"{mask:#x} is not a canonical proper shore")
        object.__setattr__(self, "_members", frozenset(self.masks))

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int], info: dict | None = None) -> "CutFamily":
        full = (1 << n) - 1
        canon = sorted({_canon(int(m), full) for m in masks})
        return cls(n, tuple(canon), dict(info or {}))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def h(self, shore: NodeShore | Iterable[int] | int) -> int:
        mask = as_mask(shore)
        if mask <= 0 or mask >= self.full:
            return 0
        return int(_canon(mask, self.full) in self._members)

    def oriented_masks(self) -> list[int]:
        """Both orientations of every member, sorted."""
        return sorted(itertools.chain(self.masks, (self.full ^ m for m in self.masks)))

    def shores(self) -> list[NodeShore]:
        return [NodeShore(m, self.n) for m in self.masks]

    def __contains__(self, shore: object) -> bool:
        return isinstance(shore, (NodeShore, int)) and bool(self.h(shore))

    def __iter__(self) -> Iterator[NodeShore]:
        return iter(self.shores())

    def __len__(self) -> int:
        return len(self.masks)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CutFamily) and (self.n, self.masks) == (other.n, other.masks)

    def __hash__(self) -> int:
        return hash((self.n, self.masks))

    def to_text(self) -> str:
        lines = []
        for mask in self.masks:
            line = str(NodeShore(mask, self.n))
            if mask in self.info:
                total, unsafe = self.info[mask]
                line += f" total={total} unsafe={unsafe}"
            lines.append(line)
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str, n: int) -> "CutFamily":
        """Parse one ``S={i,j,...}`` per line; trailing ``key=value`` tokens are ignored."""
        masks = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head = line.split()[0]
            if not (head.startswith("S={") and head.endswith("}")):
                raise ContractViolation(f"bad family line {line!r}")
            body = head[3:-1]
            nodes = [int(tok) for tok in body.split(",") if tok.strip()]
            shore = NodeShore.of(nodes, n)
            if not shore.is_proper:
                raise ContractViolation(f"family line {line!r} is not a proper shore")
            masks.append(shore.mask)
        return close_complements([NodeShore(m, n) for m in masks], n)


def close_complements(shores: Iterable[NodeShore | Iterable[int] | int], n: int) -> CutFamily:
    full = (1 << n) - 1
    masks = []
    for s in shores:
        mask = as_mask(s)
        if not 0 < mask < full:
            raise ContractViolation("close_complements: the empty set and V cannot be family members")
        masks.append(mask)
    return CutFamily.from_masks(n, masks)


def _derived(a: int, b: int) -> tuple[int, int, int, int]:
    return a | b, a & b, a & ~b, b & ~a


def check_uncrossable(fam: CutFamily) -> tuple[bool, tuple[NodeShore, NodeShore] | None]:
    """Exhaustive pair check; returns the lexicographically first offending pair on failure."""
    h = fam.h
    for i, a in enumerate(fam.masks):
        for b in fam.masks[i + 1:]:
            union, inter, a_b, b_a = _derived(a, b)
            if not ((h(a_b) and h(b_a)) or (h(inter) and h(union))):
                return False, (NodeShore(a, fam.n), NodeShore(b, fam.n))
    return True, None


def check_weakly_uncrossable(fam: CutFamily) -> tuple[bool, tuple[NodeShore, NodeShore] | None]:
    h = fam.h
    for i, a in enumerate(fam.masks):
        for b in fam.masks[i + 1:]:
            if sum(h(x) for x in _derived(a, b)) < 2:
                return False, (NodeShore(a, fam.n), NodeShore(b, fam.n))
    return True, None


def two_of_four_closure_check(shores: Sequence[NodeShore | Iterable[int] | int]) -> bool:
    """Two-of-four closure of an *unclosed* family, taken literally on the given orientations."""
    masks = [as_mask(s) for s in shores]
    members = set(masks)
    for a, b in itertools.combinations(members, 2):
        if sum(x in members for x in _derived(a, b)) < 2:
            return False
    return True


lemma51_precondition_check = two_of_four_closure_check  # contract name


@dataclass(frozen=True)
class ViolatedCollections:
    violated: list[NodeShore]
    minimal: list[NodeShore]


def minimal_masks(violated: Sequence[int]) -> list[int]:
    """Inclusion-minimal elements of a list of node bitmasks, returned sorted."""
    if not violated:
        return []
    arr = np.array(sorted(set(violated), key=lambda m: (m.bit_count(), m)), dtype=object)
    native = max(int(x) for x in arr).bit_length() <= 64
    if native:
        arr = arr.astype(np.uint64)
    found = []
    while len(arr):
        s = arr[0]
        found.append(int(s))
        arr = arr[(arr & s) != s]
    return sorted(found)


def family_cut_table(fam: CutFamily, G: LabeledMultigraph) -> tuple[np.ndarray, np.ndarray]:
    """Oriented family masks and their cut edge masks, as parallel arrays."""
    oriented = fam.oriented_masks()
    cuts = [G.cut_mask(s) for s in oriented]
    dtype = np.uint64 if fam.n <= 64 and G.m <= 64 else object
    return np.array(oriented, dtype=dtype), np.array(cuts, dtype=dtype)


def _violated_masks(fam: CutFamily, G: LabeledMultigraph, F: int) -> list[int]:
    if G.n != fam.n:
        raise ContractViolation("family and graph live on different node sets")
    return [s for s in fam.oriented_masks() if not G.cut_mask(s) & F]


def violated_collections(fam: CutFamily, G: LabeledMultigraph, F: Iterable[int] | int | None) -> ViolatedCollections:
    """All violated shores (both orientations) and the inclusion-minimal ones among them."""
    F = edge_set_mask(G, 0 if F is None else F)
    violated = _violated_masks(fam, G, F)
    return ViolatedCollections(
        violated=[NodeShore(m, fam.n) for m in violated],
        minimal=[NodeShore(m, fam.n) for m in minimal_masks(violated)],
    )


@dataclass(frozen=True)
class P1Counterexample:
    edges: frozenset[int]
    inner: NodeShore
    outer: NodeShore
    active: NodeShore
    remainder: NodeShore


def check_property_P1(
    fam: CutFamily, G: LabeledMultigraph, F_samples: Iterable[Iterable[int] | int]
) -> tuple[bool, P1Counterexample | None]:
    """Check the nested-crossing closure property on each sampled edge set.

    For every ``S1 < S2`` violated and every minimal violated ``C`` crossing
    both, ``S2 - (S1 | C)`` must be empty or violated.  Violation means
    ``h = 1`` and no sampled edge in the cut.
    """
    full = fam.full
    for sample in F_samples:
        F = edge_set_mask(G, sample)
        violated = _violated_masks(fam, G, F)
        vset = set(violated)
        for c in minimal_masks(violated):
            crossing = [s for s in violated if crosses(c, s, full)]
            for s1, s2 in itertools.permutations(crossing, 2):
                if s1 & ~s2 or s1 == s2:
                    continue
                rest = s2 & ~(s1 | c)
                if rest and rest not in vset:
                    return False, P1Counterexample(
                        frozenset(bits(F)),
                        NodeShore(s1, fam.n),
                        NodeShore(s2, fam.n),
                        NodeShore(c, fam.n),
                        NodeShore(rest, fam.n),
                    )
    return True, None


@dataclass(frozen=True)
class ParityReport:
    applicable: bool
    reason: str = ""
    sizes: dict = field(default_factory=dict)
    union_intersection_parity: bool | None = None
    differences_parity: bool | None = None
    intersection_difference_parity: bool | None = None
    all_four_p_plus_1: bool | None = None
    one_pair_p_plus_1: bool | None = None

    @property
    def holds(self) -> bool:
        if not self.applicable:
            return True
        checks = (
            self.union_intersection_parity,
            self.differences_parity,
            self.intersection_difference_parity,
            self.all_four_p_plus_1,
            self.one_pair_p_plus_1,
        )
        return all(c for c in checks if c is not None)


def parity_check(
    G: LabeledMultigraph,
    F1: Iterable[int] | int,
    A: NodeShore | Iterable[int],
    B: NodeShore | Iterable[int],
    p: int,
) -> ParityReport:
    """Parity relations between the four cuts derived from two crossing deficient shores.

    For even ``p`` the intersection and the difference ``A - B`` have opposite
    parity and one of the pairs (union, intersection) / (differences) must
    consist of ``p + 1`` cuts; for odd ``p`` they have equal parity and all four
    derived cuts must be ``p + 1`` cuts.  Precondition failures come back as
    ``applicable=False``.
    """
    F1 = edge_set_mask(G, F1)
    a, b = as_mask(A), as_mask(B)
    full = G.full
    unsafe = G.unsafe_mask

    def size(mask: int) -> int:
        return (G.cut_mask(mask) & F1).bit_count()

    for name, mask in (("A", a), ("B", b)):
        cut = G.cut_mask(mask) & F1
        if not 0 < mask < full or cut.bit_count() != p + 1 or (cut & unsafe).bit_count() < 2:
            return ParityReport(False, f"{name} is not a deficient shore of F1")
    if not crosses(a, b, full):
        return ParityReport(False, "not applicable: A and B do not cross")

    union, inter, a_b, b_a = _derived(a, b)
    sizes = {"union": size(union), "intersection": size(inter), "a_minus_b": size(a_b), "b_minus_a": size(b_a)}
    same_outer = sizes["union"] % 2 == sizes["intersection"] % 2
    same_differences = sizes["a_minus_b"] % 2 == sizes["b_minus_a"] % 2
    if p % 2 == 0:
        mixed = sizes["intersection"] % 2 == (sizes["a_minus_b"] + 1) % 2
        pair = (sizes["union"] == sizes["intersection"] == p + 1) or (sizes["a_minus_b"] == sizes["b_minus_a"] == p + 1)
        return ParityReport(True, "", sizes, same_outer, same_differences, mixed, None, pair)
    mixed = sizes["intersection"] % 2 == sizes["a_minus_b"] % 2
    four = all(v == p + 1 for v in sizes.values())
    return ParityReport(True, "", sizes, same_outer, same_differences, mixed, four, None)
