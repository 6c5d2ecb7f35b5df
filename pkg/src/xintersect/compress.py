"""Supports, monotone families, and shifting a cross-intersecting pair down to a fixpoint.

Subsets of [n] are bitmasks: coordinate i (1-based) is bit i-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import SizeVector, ValidationError, as_size_vector, points_array
from .families import Family, are_r_cross_intersecting

MAX_SUPPORT_N = 30


def mask_of(coords: Iterable[int]) -> int:
    m = 0
    for i in coords:
        m |= 1 << (i - 1)
    return m


def coords_of(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class SupportSystem:
    n: int
    sets: frozenset[int]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_SUPPORT_N:
            raise ValidationError(f"support systems are limited to n <= {MAX_SUPPORT_N}")
        sets = frozenset(int(s) for s in self.sets)
        if any(s < 0 or s >> self.n for s in sets):
            raise ValidationError(f"support bitmask outside [n] for n={self.n}")
        object.__setattr__(self, "sets", sets)

    @classmethod
    def from_subsets(cls, n: int, subsets: Iterable[Iterable[int]]) -> "SupportSystem":
        return cls(n, frozenset(mask_of(s) for s in subsets))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "SupportSystem":
        """Decode a system stored as one bit per subset (bit s set iff s is in the system)."""
        return cls(n, frozenset(s for s in range(1 << n) if mask >> s & 1))

    @classmethod
    def everything(cls, n: int) -> "SupportSystem":
        return cls(n, frozenset(range(1 << n)))

    @classmethod
    def ball(cls, n: int, coords: Iterable[int], radius: int) -> "SupportSystem":
        """Supports of the ball of the given radius in ``coords`` around the all-ones point."""
        t = mask_of(coords)
        return cls(n, frozenset(s for s in range(1 << n) if (s & t).bit_count() <= radius))

    def as_mask(self) -> int:
        m = 0
        for s in self.sets:
            m |= 1 << s
        return m

    def is_subset_closed(self) -> bool:
        for s in self.sets:
            bits = s
            while bits:
                low = bits & -bits
                if s ^ low not in self.sets:
                    return False
                bits ^= low
        return True

    def relevant_coordinates(self) -> frozenset[int]:
        """Coordinates of the monotone family that actually matter (system assumed subset-closed)."""
        out = set()
        for i in range(self.n):
            bit = 1 << i
            for s in self.sets:
                if not s & bit and (s | bit) not in self.sets:
                    out.add(i + 1)
                    break
        return frozenset(out)

    def ball_shape(self) -> tuple[tuple[int, ...], int] | None:
        """(T, radius) if the system is {s : |s & T| <= radius}, else None."""
        if not self.sets:
            return None
        t = mask_of(self.relevant_coordinates())
        radius = max((s & t).bit_count() for s in self.sets)
        if self == SupportSystem.ball(self.n, coords_of(t), radius):
            return tuple(sorted(coords_of(t))), radius
        return None

    def sorted_masks(self) -> list[int]:
        return sorted(self.sets)

    def __lt__(self, other: "SupportSystem") -> bool:
        return self.sorted_masks() < other.sorted_masks()

    def __len__(self) -> int:
        return len(self.sets)


def support_vector(x: Sequence[int]) -> frozenset[int]:
    return frozenset(i + 1 for i, v in enumerate(x) if v > 1)


def _support_masks(p: SizeVector) -> np.ndarray:
    pts = points_array(p)
    weights = (1 << np.arange(p.n, dtype=np.int64))
    return ((pts > 1).astype(np.int64) * weights).sum(axis=1)


def support_system(a: Family) -> SupportSystem:
    masks = _support_masks(a.domain)[a.members]
    return SupportSystem(a.domain.n, frozenset(int(m) for m in np.unique(masks)))


def is_monotone(a: Family) -> bool:
    masks = _support_masks(a.domain)
    inside = np.unique(masks[a.members])
    outside = np.unique(masks[~a.members])
    if np.intersect1d(inside, outside).size:
        return False
    return SupportSystem(a.domain.n, frozenset(int(m) for m in inside)).is_subset_closed()


def family_from_support(p, system: SupportSystem) -> Family:
    p = as_size_vector(p)
    if system.n != p.n:
        raise ValidationError(f"support system on n={system.n} but domain has n={p.n}")
    if not system.is_subset_closed():
        raise ValidationError("support system is not subset-closed")
    allowed = np.zeros(1 << p.n, dtype=bool)
    allowed[list(system.sets)] = True
    return Family(p, allowed[_support_masks(p)])


def support_weight(p: SizeVector, s: int) -> int:
    """Number of points whose support is exactly s."""
    return math.prod(p[i] - 1 for i in range(p.n) if s >> i & 1)


def size_from_support(p, system: SupportSystem) -> int:
    p = as_size_vector(p)
    if system.n != p.n:
        raise ValidationError(f"support system on n={system.n} but domain has n={p.n}")
    if not system.is_subset_closed():
        raise ValidationError("support system is not subset-closed")
    return sum(support_weight(p, s) for s in system.sets)


def supports_cross_intersecting(sa: SupportSystem, sb: SupportSystem, r: int) -> bool:
    """Support-level test for monotone pairs: every a, b has |a | b| <= n - r."""
    limit = sa.n - r
    return all((a | b).bit_count() <= limit for a in sa.sets for b in sb.sets)


def shift(a: Family, i: int, j: int) -> Family:
    """Move members with x_i = j to x_i = 1 wherever that spot is free."""
    p = a.domain
    if not 1 <= i <= p.n:
        raise ValidationError(f"coordinate {i} out of range 1..{p.n}")
    if not 2 <= j <= p[i - 1]:
        raise ValidationError(f"value j={j} must satisfy 2 <= j <= p_i={p[i - 1]}")
    cube = np.moveaxis(a.cube().copy(), i - 1, 0)
    ones, js = cube[0].copy(), cube[j - 1].copy()
    cube[0] = ones | js
    cube[j - 1] = js & ones
    return Family(p, np.moveaxis(cube, 0, i - 1))


def potential(a: Family) -> int:
    """Sum of all coordinates of all members."""
    return int(points_array(a.domain)[a.members].astype(np.int64).sum())


@dataclass(frozen=True)
class CompressionResult:
    a: Family
    b: Family
    monotone: bool
    sweeps: int
    # potential(A) + potential(B) before the first sweep and after each changing sweep
    potentials: tuple[int, ...] = field(default=())

    def pair(self) -> tuple[Family, Family]:
        return self.a, self.b


def compress_pair(a: Family, b: Family, r: int) -> CompressionResult:
    """Apply joint shifts in (i, j) lexicographic order until a full sweep changes nothing."""
    if not are_r_cross_intersecting(a, b, r):
        raise ValidationError(f"input pair is not {r}-cross-intersecting")
    p = a.domain
    moves = [(i, j) for i in range(1, p.n + 1) for j in range(2, p[i - 1] + 1)]
    potentials = [potential(a) + potential(b)]
    sweeps = 0
    while True:
        changed = False
        for i, j in moves:
            na, nb = shift(a, i, j), shift(b, i, j)
            if na != a or nb != b:
                a, b, changed = na, nb, True
        sweeps += 1
        if not changed:
            break
        potentials.append(potential(a) + potential(b))
    return CompressionResult(a, b, is_monotone(a) and is_monotone(b), sweeps, tuple(potentials))
