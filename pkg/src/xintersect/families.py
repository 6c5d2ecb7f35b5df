"""Explicit families over S_p and the family-level predicates.

A :class:`Family` is a dense boolean vector indexed by rank.  Everything here
is exact; sizes are capped by ``MAX_FAMILY_DOMAIN``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (
    Point,
    ResourceLimitError,
    SizeVector,
    ValidationError,
    as_size_vector,
    check_point,
    check_r,
    domain_size,
    points_array,
    rank,
)

MAX_FAMILY_DOMAIN = 1 << 20

# bound on the size of the temporary agreement matrix built by dual()
_BLOCK_CELLS = 1 << 22


class Family:
    """Immutable subset of S_p."""

    __slots__ = ("domain", "members", "cardinality")

    def __init__(self, domain, members):
        domain = as_size_vector(domain)
        size = domain_size(domain)
        if size > MAX_FAMILY_DOMAIN:
            raise ResourceLimitError(
                f"|S_p| = {size} exceeds the explicit-family cap {MAX_FAMILY_DOMAIN}"
            )
        members = np.asarray(members, dtype=bool).reshape(-1)
        if members.shape[0] != size:
            raise ValidationError(f"bit vector length {members.shape[0]} != |S_p| = {size}")
        members = members.copy()
        members.setflags(write=False)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "cardinality", int(members.sum()))

    def __setattr__(self, name, value):
        raise AttributeError("Family is immutable")

    @classmethod
    def empty(cls, p) -> "Family":
        return cls(p, np.zeros(domain_size(p), dtype=bool))

    @classmethod
    def full(cls, p) -> "Family":
        return cls(p, np.ones(domain_size(p), dtype=bool))

    @classmethod
    def from_points(cls, p, points: Iterable[Sequence[int]]) -> "Family":
        p = as_size_vector(p)
        bits = np.zeros(domain_size(p), dtype=bool)
        for x in points:
            bits[rank(p, x)] = True
        return cls(p, bits)

    @classmethod
    def from_ranks(cls, p, ranks: Iterable[int]) -> "Family":
        bits = np.zeros(domain_size(p), dtype=bool)
        bits[list(ranks)] = True
        return cls(p, bits)

    @classmethod
    def from_predicate(cls, p, pred) -> "Family":
        pts = points_array(p)
        return cls(p, [bool(pred(tuple(int(v) for v in row))) for row in pts])

    def __len__(self) -> int:
        return self.cardinality

    def __contains__(self, x) -> bool:
        return bool(self.members[rank(self.domain, x)])

    def __iter__(self):
        return iter(self.points())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((self.domain, np.packbits(self.members).tobytes()))

    def __repr__(self) -> str:
        return f"Family({self.domain!r}, |A|={self.cardinality})"

    def ranks(self) -> list[int]:
        return np.flatnonzero(self.members).tolist()

    def points(self) -> list[Point]:
        pts = points_array(self.domain)[self.members]
        return [tuple(int(v) for v in row) for row in pts]

    def issubset(self, other: "Family") -> bool:
        _same_domain(self, other)
        return not np.any(self.members & ~other.members)

    def cube(self) -> np.ndarray:
        """Membership reshaped to the grid p_1 x ... x p_n (axis i <-> coordinate i+1)."""
        return self.members.reshape(self.domain.entries)

    def to_json(self) -> list[list[int]]:
        return [list(x) for x in self.points()]


def _same_domain(a: Family, b: Family) -> None:
    if a.domain != b.domain:
        raise ValidationError(f"domain mismatch: {a.domain} vs {b.domain}")


def _min_agreements(a: Family) -> np.ndarray:
    """For every y in S_p, the minimum number of coordinates y shares with a member of A."""
    pts = points_array(a.domain)
    n = a.domain.n
    best = np.full(pts.shape[0], n + 1, dtype=np.int16)
    members = pts[a.members]
    block = max(1, _BLOCK_CELLS // max(1, pts.shape[0]))
    for start in range(0, members.shape[0], block):
        chunk = members[start:start + block]
        agree = (chunk[:, None, :] == pts[None, :, :]).sum(axis=2, dtype=np.int16)
        np.minimum(best, agree.min(axis=0), out=best)
    return best


def dual(a: Family, r: int) -> Family:
    """All points that r-intersect every member of A.  dual(empty) is S_p."""
    check_r(a.domain.n, r)
    return Family(a.domain, _min_agreements(a) >= r)


def are_r_cross_intersecting(a: Family, b: Family, r: int) -> bool:
    _same_domain(a, b)
    check_r(a.domain.n, r)
    if a.cardinality == 0 or b.cardinality == 0:
        return True
    small, large = (a, b) if a.cardinality <= b.cardinality else (b, a)
    return bool(np.all(_min_agreements(small)[large.members] >= r))


def check_mutual_duality(a: Family, b: Family, r: int) -> bool:
    _same_domain(a, b)
    return dual(a, r) == b and dual(b, r) == a


def relevant_coordinates(a: Family) -> frozenset[int]:
    """1-based coordinates along which membership changes somewhere."""
    cube = a.cube()
    out = set()
    for axis in range(a.domain.n):
        first = np.take(cube, [0], axis=axis)
        if np.any(cube != first):
            out.add(axis + 1)
    return frozenset(out)


def lemma9_witness(a: Family, b: Family, i: int) -> int | None:
    """Smallest value l in [p_i] with at most a 1/p_i fraction of either family off l at coordinate i."""
    _same_domain(a, b)
    p = a.domain
    if not 1 <= i <= p.n:
        raise ValidationError(f"coordinate {i} out of range 1..{p.n}")
    pi = p[i - 1]
    col = points_array(p)[:, i - 1]
    a_counts = np.bincount(col[a.members], minlength=pi + 1)
    b_counts = np.bincount(col[b.members], minlength=pi + 1)
    for l in range(1, pi + 1):
        off_a = a.cardinality - int(a_counts[l])
        off_b = b.cardinality - int(b_counts[l])
        # integer form of off <= |family| / p_i
        if off_a * pi <= a.cardinality and off_b * pi <= b.cardinality:
            return l
    return None


def antipodal(p, x: Sequence[int]) -> Point:
    p = as_size_vector(p)
    x = check_point(p, x)
    return tuple(xi % pi + 1 for xi, pi in zip(x, p.entries))


@dataclass(frozen=True)
class FunctionSet:
    """A set W of maps I -> [2], each stored as a tuple of values in the order of ``binary_coords``."""

    binary_coords: tuple[int, ...]
    functions: frozenset[tuple[int, ...]]

    def __post_init__(self):
        coords = tuple(sorted(int(i) for i in self.binary_coords))
        object.__setattr__(self, "binary_coords", coords)
        funcs = frozenset(tuple(int(v) for v in f) for f in self.functions)
        for f in funcs:
            if len(f) != len(coords) or any(v not in (1, 2) for v in f):
                raise ValidationError(f"function {f} is not a map {coords} -> [2]")
        object.__setattr__(self, "functions", funcs)

    @classmethod
    def for_domain(cls, p, functions) -> "FunctionSet":
        p = as_size_vector(p)
        coords = tuple(i + 1 for i, v in enumerate(p.entries) if v == 2)
        return cls(coords, frozenset(functions))

    @classmethod
    def all_of_size(cls, p, size: int) -> list["FunctionSet"]:
        p = as_size_vector(p)
        coords = tuple(i + 1 for i, v in enumerate(p.entries) if v == 2)
        all_funcs = list(itertools.product((1, 2), repeat=len(coords)))
        return [cls(coords, frozenset(c)) for c in itertools.combinations(all_funcs, size)]


def aw_bw(p, w: FunctionSet) -> tuple[Family, Family]:
    """A_W matches some f on I; B_W is everything not disagreeing with some f on all of I."""
    p = as_size_vector(p)
    binary = tuple(i + 1 for i, v in enumerate(p.entries) if v == 2)
    if w.binary_coords != binary:
        raise ValidationError(
            f"W must be defined exactly on the binary coordinates {binary}, got {w.binary_coords}"
        )
    if not w.functions:
        raise ValidationError("W must be nonempty")
    pts = points_array(p)
    proj = pts[:, [i - 1 for i in binary]]
    funcs = np.array(sorted(w.functions), dtype=pts.dtype).reshape(len(w.functions), len(binary))
    eq = proj[:, None, :] == funcs[None, :, :]
    in_a = eq.all(axis=2).any(axis=1)
    killed = (~eq).all(axis=2).any(axis=1)
    return Family(p, in_a), Family(p, ~killed)
