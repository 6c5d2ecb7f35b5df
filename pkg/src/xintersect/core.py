"""Mixed-radix domain S_p: size vectors, points, ranks and the r-intersecting predicate.

Points are tuples of 1-based coordinates; ranks are 0-based positions in the
mixed-radix (row-major, last coordinate fastest) enumeration of S_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

Point = tuple[int, ...]


class ValidationError(ValueError):
    """Raised when an argument violates an operation's precondition."""


class ResourceLimitError(RuntimeError):
    """Raised when an instance exceeds a configured enumeration cap."""


@dataclass(frozen=True)
class SizeVector:
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(v) for v in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValidationError("size vector must have at least one coordinate")
        bad = [v for v in entries if v < 2]
        if bad:
            raise ValidationError(f"size vector entries must be >= 2, got {list(entries)}")

    @classmethod
    def of(cls, *entries: int) -> "SizeVector":
        if len(entries) == 1 and not isinstance(entries[0], int):
            entries = tuple(entries[0])
        return cls(tuple(entries))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def k(self) -> int:
        """Smallest alphabet size."""
        return min(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __repr__(self) -> str:
        return f"SizeVector{self.entries}"

    def sorted_order(self) -> tuple[int, ...]:
        """0-based coordinate indices sorted by (p_i, i)."""
        return tuple(sorted(range(self.n), key=lambda i: (self.entries[i], i)))


def as_size_vector(p) -> SizeVector:
    if isinstance(p, SizeVector):
        return p
    return SizeVector(tuple(p))


def domain_size(p) -> int:
    return math.prod(as_size_vector(p).entries)


def check_point(p: SizeVector, x: Sequence[int]) -> Point:
    x = tuple(int(v) for v in x)
    if len(x) != p.n:
        raise ValidationError(f"point {x} has length {len(x)}, expected {p.n}")
    for xi, pi in zip(x, p.entries):
        if not 1 <= xi <= pi:
            raise ValidationError(f"point {x} out of range for {p}")
    return x


def rank(p, x: Sequence[int]) -> int:
    p = as_size_vector(p)
    x = check_point(p, x)
    value = 0
    for xi, pi in zip(x, p.entries):
        value = value * pi + (xi - 1)
    return value


def unrank(p, i: int) -> Point:
    p = as_size_vector(p)
    if not 0 <= i < domain_size(p):
        raise ValidationError(f"rank {i} out of range for {p}")
    coords = []
    for pi in reversed(p.entries):
        i, digit = divmod(i, pi)
        coords.append(digit + 1)
    return tuple(reversed(coords))


def iter_points(p) -> Iterable[Point]:
    p = as_size_vector(p)
    for i in range(domain_size(p)):
        yield unrank(p, i)


@lru_cache(maxsize=64)
def _points_array(entries: tuple[int, ...]) -> np.ndarray:
    grids = np.indices(entries, dtype=np.int16).reshape(len(entries), -1).T + 1
    grids.setflags(write=False)
    return grids


def points_array(p) -> np.ndarray:
    """All points of S_p as an (|S_p|, n) read-only array in rank order."""
    return _points_array(as_size_vector(p).entries)


def hamming_distance(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y):
        raise ValidationError(f"length mismatch: {len(x)} vs {len(y)}")
    return sum(1 for a, b in zip(x, y) if a != b)


def agreements(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y):
        raise ValidationError(f"length mismatch: {len(x)} vs {len(y)}")
    return sum(1 for a, b in zip(x, y) if a == b)


def check_r(n: int, r: int) -> int:
    if not 0 <= r <= n:
        raise ValidationError(f"r={r} must satisfy 0 <= r <= n={n}")
    return r


def r_intersecting(x: Sequence[int], y: Sequence[int], r: int) -> bool:
    check_r(len(x), r)
    return hamming_distance(x, y) <= len(x) - r


def normalize(p_raw: Sequence[int], r: int) -> tuple[SizeVector, int]:
    """Drop unit coordinates; each one is a forced agreement, so r drops by one per coordinate.

    A non-positive remainder is clamped to 0 (every pair intersects).
    """
    p_raw = [int(v) for v in p_raw]
    if any(v < 1 for v in p_raw):
        raise ValidationError(f"alphabet sizes must be positive, got {p_raw}")
    if r < 1:
        raise ValidationError(f"r must be >= 1, got {r}")
    kept = [v for v in p_raw if v != 1]
    if not kept:
        raise ValidationError("no coordinate with p_i >= 2 remains after normalization")
    r_new = max(r - (len(p_raw) - len(kept)), 0)
    if r_new > len(kept):
        raise ValidationError(f"r={r} exceeds the number of coordinates {len(p_raw)}")
    return SizeVector(tuple(kept)), r_new
