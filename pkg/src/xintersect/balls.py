"""Hamming balls in a coordinate subset, their exact sizes, and the best ball pair."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import (
    Point,
    SizeVector,
    ValidationError,
    as_size_vector,
    check_point,
    check_r,
    points_array,
)
from .families import Family


def _coords(p: SizeVector, coords: Iterable[int]) -> tuple[int, ...]:
    t = tuple(sorted(set(int(i) for i in coords)))
    if any(not 1 <= i <= p.n for i in t):
        raise ValidationError(f"coordinate set {t} not contained in 1..{p.n}")
    return t


@dataclass(frozen=True)
class BallSpec:
    center: Point
    coords: tuple[int, ...]
    radius: int

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(self.center))
        object.__setattr__(self, "coords", tuple(sorted(set(self.coords))))
        if not 0 <= self.radius <= len(self.coords):
            raise ValidationError(f"radius {self.radius} outside 0..|T|={len(self.coords)}")


@dataclass(frozen=True)
class BallPairSpec:
    center: Point
    coords: tuple[int, ...]
    radius_a: int
    radius_b: int
    r: int

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(self.center))
        object.__setattr__(self, "coords", tuple(sorted(set(self.coords))))
        if min(self.radius_a, self.radius_b) < 0:
            raise ValidationError("radii must be non-negative")
        if len(self.coords) != self.radius_a + self.radius_b + self.r:
            raise ValidationError(
                f"|T|={len(self.coords)} must equal l + m + r = "
                f"{self.radius_a + self.radius_b + self.r}"
            )

    def balls(self) -> tuple[BallSpec, BallSpec]:
        return (
            BallSpec(self.center, self.coords, self.radius_a),
            BallSpec(self.center, self.coords, self.radius_b),
        )

    def to_json(self) -> dict:
        return {
            "center": list(self.center),
            "T": list(self.coords),
            "radius_a": self.radius_a,
            "radius_b": self.radius_b,
            "r": self.r,
        }


def ball_members(p, spec: BallSpec) -> Family:
    p = as_size_vector(p)
    center = check_point(p, spec.center)
    t = _coords(p, spec.coords)
    pts = points_array(p)
    if not t:
        return Family.full(p)
    idx = [i - 1 for i in t]
    mismatches = (pts[:, idx] != np.asarray(center)[idx]).sum(axis=1)
    return Family(p, mismatches <= spec.radius)


def ball_size_profile(p, coords: Iterable[int]) -> list[int]:
    """Ball sizes for every radius 0..|T|, by accumulating mismatch counts coordinate by coordinate."""
    p = as_size_vector(p)
    t = _coords(p, coords)
    # counts[d] = number of patterns on the processed part of T with exactly d mismatches
    counts = [1]
    for i in t:
        q = p[i - 1] - 1
        nxt = counts + [0]
        for d in range(len(counts)):
            nxt[d + 1] += counts[d] * q
        counts = nxt
    outside = math.prod(p[i] for i in range(p.n) if i + 1 not in t)
    sizes, acc = [], 0
    for c in counts:
        acc += c
        sizes.append(acc * outside)
    return sizes


def ball_size(p, coords: Iterable[int], radius: int) -> int:
    p = as_size_vector(p)
    t = _coords(p, coords)
    if not 0 <= radius <= len(t):
        raise ValidationError(f"radius {radius} outside 0..|T|={len(t)}")
    return ball_size_profile(p, t)[radius]


def log_concave_check(p, coords: Iterable[int], l: int) -> bool:
    p = as_size_vector(p)
    t = _coords(p, coords)
    if not 1 <= l < len(t):
        raise ValidationError(f"l={l} must satisfy 1 <= l < |T|={len(t)}")
    sizes = ball_size_profile(p, t)
    return sizes[l] ** 2 > sizes[l - 1] * sizes[l + 1]


def _prefix_coords(p: SizeVector, size: int) -> tuple[int, ...]:
    return tuple(sorted(i + 1 for i in p.sorted_order()[:size]))


def optimal_ball_pairs(p, r: int) -> tuple[int, list[BallPairSpec]]:
    """Maximum ball-pair product and every (|T|, l) attaining it, in tie-break order.

    T ranges over prefixes of the coordinates sorted by p_i (lowest index first
    on ties); all radius splits are tried, balanced or not.
    """
    p = as_size_vector(p)
    check_r(p.n, r)
    if r < 1:
        raise ValidationError("best_ball_pair needs r >= 1")
    center = (1,) * p.n
    best, found = -1, []
    for size in range(r, p.n + 1):
        t = _prefix_coords(p, size)
        sizes = ball_size_profile(p, t)
        for l in range(0, size - r + 1):
            m = size - r - l
            product = sizes[l] * sizes[m]
            spec = BallPairSpec(center, t, l, m, r)
            if product > best:
                best, found = product, [spec]
            elif product == best:
                found.append(spec)
    return best, found


def best_ball_pair(p, r: int) -> tuple[BallPairSpec, int]:
    product, specs = optimal_ball_pairs(p, r)
    return specs[0], product
