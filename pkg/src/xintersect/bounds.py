"""Closed-form bounds on |A|*|B| and the regime classification for r-cross-intersecting pairs.

Real-exponent comparisons raise both sides to a common integer power when that
is cheap; real-valued quantities use mpmath at 40 significant digits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import mpmath

from .core import SizeVector, ValidationError, as_size_vector, check_r, domain_size

_DPS = 40


def _sorted_entries(p: SizeVector) -> list[int]:
    return sorted(p.entries)


def _coords(p: SizeVector, coords: Iterable[int]) -> tuple[int, ...]:
    t = tuple(sorted(set(int(i) for i in coords)))
    if any(not 1 <= i <= p.n for i in t):
        raise ValidationError(f"coordinate set {t} not contained in 1..{p.n}")
    return t


def theorem1_bound(p) -> Fraction:
    """|S_p|^2 / k^2 with k the smallest alphabet size."""
    p = as_size_vector(p)
    return Fraction(domain_size(p) ** 2, p.k ** 2)


def trivial_product(p, r: int) -> int:
    """|C|^2 for C obtained by fixing the r smallest coordinates."""
    p = as_size_vector(p)
    check_r(p.n, r)
    return math.prod(v * v for v in _sorted_entries(p)[r:])


@dataclass(frozen=True)
class Lemma2Check:
    holds: bool
    with_equality: bool
    lhs: Fraction | None = None
    reason: str = ""


def lemma2_applies(p, r: int) -> Lemma2Check:
    """Exact test of 2/p_{r+1} + sum_{i<=r} 1/p_i <= 1 on ascending p with p_1 >= 3."""
    p = as_size_vector(p)
    if not 1 <= r < p.n:
        raise ValidationError(f"lemma needs 1 <= r < n, got r={r}, n={p.n}")
    q = _sorted_entries(p)
    lhs = Fraction(2, q[r]) + sum(Fraction(1, v) for v in q[:r])
    if q[0] < 3:
        return Lemma2Check(False, False, lhs, "min p_i < 3")
    if lhs > 1:
        return Lemma2Check(False, False, lhs, "inequality fails")
    return Lemma2Check(True, lhs == 1, lhs)


def _entropy_factor_exponent(v: int) -> Fraction:
    return Fraction(v - 2, v)


def theorem5_bound(p, coords: Iterable[int]) -> mpmath.mpf:
    """|S_p| / prod_{i in T} (p_i - 1)^(1 - 2/p_i)."""
    p = as_size_vector(p)
    t = _coords(p, coords)
    with mpmath.workdps(_DPS):
        denom = mpmath.mpf(1)
        for i in t:
            e = _entropy_factor_exponent(p[i - 1])
            denom *= mpmath.power(p[i - 1] - 1, mpmath.mpf(e.numerator) / e.denominator)
        return +(mpmath.mpf(domain_size(p)) / denom)


_EXACT_BITS = 1 << 20


def _power_compare(lhs: int, factors: list[tuple[int, Fraction]]) -> int:
    """Sign of lhs - prod base**exp.

    Exact via a common denominator of the exponents when the integers stay
    small. Otherwise a 60-digit log comparison decides, unless it is too close
    to call, in which case the exact route is taken anyway.
    """
    denom = math.lcm(1, *(e.denominator for _, e in factors))
    widest = max([lhs.bit_length()] + [b.bit_length() for b, _ in factors])
    if denom * widest * (len(factors) + 1) > _EXACT_BITS:
        with mpmath.workdps(60):
            diff = mpmath.log(lhs) - mpmath.fsum(
                mpmath.mpf(e.numerator) / e.denominator * mpmath.log(b) for b, e in factors
            )
            if abs(diff) > mpmath.mpf(10) ** -40:
                return 1 if diff > 0 else -1
    left = lhs ** denom
    right = 1
    for base, e in factors:
        right *= base ** (e.numerator * denom // e.denominator)
    return (left > right) - (left < right)


def theorem6_filter(p, r: int, coords: Iterable[int]) -> bool:
    """Whether T can be the relevant set of a maximal pair: prod of r smallest p_i >= prod (p_i-1)^(1-2/p_i)."""
    p = as_size_vector(p)
    check_r(p.n, r)
    t = _coords(p, coords)
    lhs = math.prod(_sorted_entries(p)[:r])
    factors = [(p[i - 1] - 1, _entropy_factor_exponent(p[i - 1])) for i in t]
    return _power_compare(lhs, factors) >= 0


def theorem6_count_check(p, r: int, coords: Iterable[int]) -> bool:
    """|{i in T : p_i > 2}| < 5r."""
    p = as_size_vector(p)
    t = _coords(p, coords)
    return sum(1 for i in t if p[i - 1] > 2) < 5 * r


class Regime(str, enum.Enum):
    P1_GT_R_PLUS_1 = "P1_GT_R_PLUS_1"
    P1_EQ_R_PLUS_1_GT_4 = "P1_EQ_R_PLUS_1_GT_4"
    SMALL_P1_BALLS_APPLY = "SMALL_P1_BALLS_APPLY"
    UNCLASSIFIED = "UNCLASSIFIED"


def relevant_count_bound(p1: int, r: int) -> mpmath.mpf:
    """r log p1 / ((1 - 2/p1) log(p1 - 1)); bounds the number of relevant coordinates when p1 >= 3."""
    if p1 < 3:
        raise ValidationError(f"the relevant-coordinate bound needs p_1 >= 3, got {p1}")
    with mpmath.workdps(_DPS):
        return +(r * mpmath.log(p1) / ((1 - mpmath.mpf(2) / p1) * mpmath.log(p1 - 1)))


@dataclass(frozen=True)
class BoundReport:
    p: SizeVector
    r: int
    k: int
    theorem1: Fraction
    trivial_product: int
    lemma2: Lemma2Check | None
    theorem7_regime: Regime
    n_bound: mpmath.mpf | None
    predicted_product: int | None
    predicted_shapes: tuple[str, ...] = field(default=())
    # original 0-based coordinate index of each entry of the ascending p
    permutation: tuple[int, ...] = field(default=())


def theorem7_classify(p, r: int) -> BoundReport:
    p = as_size_vector(p)
    check_r(p.n, r)
    if r < 1:
        raise ValidationError("classification needs r >= 1")
    perm = p.sorted_order()
    p1 = p.k
    lemma2 = lemma2_applies(p, r) if r < p.n else None
    n_bound = relevant_count_bound(p1, r) if p1 >= 3 else None
    trivial = trivial_product(p, r)
    predicted, shapes = None, ()
    if p1 > r + 1:
        regime = Regime.P1_GT_R_PLUS_1
        predicted, shapes = trivial, (f"fix {r} coordinates",)
    elif p1 == r + 1 and p1 > 4:
        regime = Regime.P1_EQ_R_PLUS_1_GT_4
        predicted = trivial
        shapes = (f"fix {r} coordinates",)
        if sum(1 for v in p.entries if v == r + 1) >= r + 2:
            shapes += (f"radius-1 ball in {r + 2} coordinates with p_i = {r + 1}",)
    elif n_bound is not None and n_bound < r + 4:
        regime = Regime.SMALL_P1_BALLS_APPLY
        shapes = (f"balls in at most {r + 3} coordinates",)
    else:
        regime = Regime.UNCLASSIFIED
    return BoundReport(
        p=p,
        r=r,
        k=p1,
        theorem1=theorem1_bound(p),
        trivial_product=trivial,
        lemma2=lemma2,
        theorem7_regime=regime,
        n_bound=n_bound,
        predicted_product=predicted,
        predicted_shapes=shapes,
        permutation=perm,
    )
