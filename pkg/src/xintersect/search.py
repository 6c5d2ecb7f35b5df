"""Exact maximisation of |A|*|B| over r-cross-intersecting pairs.

Two independent routes:

* ``monotone_max`` enumerates every subset-closed support system S_A on [n]
  and pairs it with its largest partner S_B, computed at the support level.
  Shifting turns any maximal pair into a monotone one, so this is exhaustive.
* ``full_max`` enumerates every nonempty A in S_p directly on tiny domains and
  takes B as the set of all points r-intersecting every member of A.
"""

from __future__ import annotations

import enum
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .balls import BallPairSpec, best_ball_pair
from .bounds import theorem6_filter
from .compress import SupportSystem, support_weight
from .core import (
    ResourceLimitError,
    SizeVector,
    ValidationError,
    as_size_vector,
    check_r,
    domain_size,
    points_array,
)
from .families import Family

MAX_MONOTONE_N = 6
MAX_FULL_DOMAIN = 16
_CHUNK = 1 << 18


class Mode(str, enum.Enum):
    MONOTONE = "monotone"
    FULL = "full"


@dataclass
class SearchStats:
    nodes: int = 0
    pruned: int = 0
    elapsed_s: float = 0.0
    workers: int = 1


@dataclass
class SearchResult:
    p: SizeVector
    r: int
    max_product: int
    # monotone mode: pairs of SupportSystem, unordered (A <= B); full mode: ordered pairs of Family
    witnesses: list[tuple]
    mode: Mode
    stats: SearchStats = field(default_factory=SearchStats)

    def witness_families(self) -> list[tuple[Family, Family]]:
        if self.mode is Mode.FULL:
            return list(self.witnesses)
        from .compress import family_from_support

        return [
            (family_from_support(self.p, a), family_from_support(self.p, b))
            for a, b in self.witnesses
        ]


def worker_count() -> int:
    env = os.environ.get("XINTERSECT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


@lru_cache(maxsize=None)
def downsets(n: int) -> np.ndarray:
    """Every subset-closed family of subsets of [n], as bitmasks over the 2^n subsets, sorted.

    A downset on [n] splits into the sets without element n (D0) and the sets
    with it, minus n (D1); both are downsets on [n-1] and D1 is inside D0.
    """
    if n > MAX_MONOTONE_N:
        raise ResourceLimitError(f"monotone enumeration is limited to n <= {MAX_MONOTONE_N}")
    if n == 0:
        out = np.array([0, 1], dtype=np.uint64)
        out.setflags(write=False)
        return out
    prev = downsets(n - 1)
    half = np.uint64(1 << (n - 1))
    parts = []
    for d0 in prev:
        d1 = prev[(prev & ~d0) == 0]
        parts.append(d0 | (d1 << half))
    out = np.sort(np.concatenate(parts))
    out.setflags(write=False)
    return out


def _bad_masks(n: int, r: int) -> list[int]:
    """bad[b] = subsets a with |a | b| > n - r, as a bitmask over subsets."""
    limit = n - r
    out = []
    for b in range(1 << n):
        m = 0
        for a in range(1 << n):
            if (a | b).bit_count() > limit:
                m |= 1 << a
        out.append(m)
    return out


def _relevance_codes(systems: np.ndarray, n: int) -> np.ndarray:
    codes = np.zeros(systems.shape[0], dtype=np.int64)
    for i in range(n):
        without_i = 0
        for s in range(1 << n):
            if not s >> i & 1:
                without_i |= 1 << s
        m = np.uint64(without_i)
        lo = systems & m
        hi = (systems >> np.uint64(1 << i)) & m
        codes |= (lo != hi).astype(np.int64) << i
    return codes


def _evaluate_chunk(systems, weights, bad, admissible, n, exact):
    """Products, A sizes, partner masks, surviving systems and the pruning mask for one chunk."""
    if admissible is not None:
        keep = admissible[_relevance_codes(systems, n)]
        systems = systems[keep]
    else:
        keep = np.ones(systems.shape[0], dtype=bool)
    dtype = np.int64 if exact else np.float64
    size_a = np.zeros(systems.shape[0], dtype=dtype)
    size_b = np.zeros(systems.shape[0], dtype=dtype)
    b_mask = np.zeros(systems.shape[0], dtype=np.uint64)
    one = np.uint64(1)
    for s in range(1 << n):
        w = dtype(weights[s])
        size_a += ((systems >> np.uint64(s)) & one).astype(dtype) * w
        ok = (systems & np.uint64(bad[s])) == 0
        size_b += ok.astype(dtype) * w
        b_mask |= ok.astype(np.uint64) << np.uint64(s)
    return size_a * size_b, size_a, b_mask, systems, keep


def _canonical_pair(a: SupportSystem, b: SupportSystem) -> tuple[SupportSystem, SupportSystem]:
    return (a, b) if a.sorted_masks() <= b.sorted_masks() else (b, a)


def monotone_max(p, r: int, *, prune: bool = True, max_n: int = MAX_MONOTONE_N,
                 workers: int | None = None) -> SearchResult:
    p = as_size_vector(p)
    check_r(p.n, r)
    n = p.n
    if n > min(max_n, MAX_MONOTONE_N):
        raise ResourceLimitError(f"n={n} exceeds the monotone search cap {min(max_n, MAX_MONOTONE_N)}")
    start = time.perf_counter()
    if r == 0:
        full = SupportSystem.everything(n)
        size = domain_size(p)
        return SearchResult(p, 0, size * size, [(full, full)], Mode.MONOTONE,
                            SearchStats(1, 0, time.perf_counter() - start, 1))

    systems = downsets(n)
    systems = systems[systems != 0]
    weights = [support_weight(p, s) for s in range(1 << n)]
    bad = _bad_masks(n, r)
    admissible = None
    if prune:
        admissible = np.array(
            [theorem6_filter(p, r, [i + 1 for i in range(n) if code >> i & 1])
             for code in range(1 << n)],
            dtype=bool,
        )
    total = domain_size(p)
    exact = total * total < (1 << 62)

    workers = workers or worker_count()
    chunks = [systems[i:i + _CHUNK] for i in range(0, systems.shape[0], _CHUNK)]
    args = (weights, bad, admissible, n, exact)
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: _evaluate_chunk(c, *args), chunks))
    else:
        results = [_evaluate_chunk(c, *args) for c in chunks]

    evaluated = sum(res[3].shape[0] for res in results)
    top = max(res[0].max() for res in results if res[0].size)
    threshold = top if exact else top * (1 - 1e-9)
    scored = []
    for products, _, b_masks, kept, _ in results:
        for j in np.flatnonzero(products >= threshold):
            sa = SupportSystem.from_mask(n, int(kept[j]))
            sb = SupportSystem.from_mask(n, int(b_masks[j]))
            scored.append((_size(weights, sa) * _size(weights, sb), sa, sb))
    best = max(prod for prod, _, _ in scored)
    seen = {}
    for prod, sa, sb in scored:
        if prod == best:
            pair = _canonical_pair(sa, sb)
            seen[(tuple(pair[0].sorted_masks()), tuple(pair[1].sorted_masks()))] = pair
    witnesses = [seen[key] for key in sorted(seen)]
    stats = SearchStats(
        nodes=evaluated,
        pruned=int(systems.shape[0] - evaluated),
        elapsed_s=time.perf_counter() - start,
        workers=workers,
    )
    return SearchResult(p, r, best, witnesses, Mode.MONOTONE, stats)


def _size(weights: list[int], system: SupportSystem) -> int:
    return sum(weights[s] for s in system.sets)


def full_max(p, r: int, *, max_domain: int = MAX_FULL_DOMAIN) -> SearchResult:
    """Brute force over all nonempty A; B is forced to be the largest partner of A."""
    p = as_size_vector(p)
    check_r(p.n, r)
    size = domain_size(p)
    if size > max_domain:
        raise ResourceLimitError(f"|S_p|={size} exceeds the full-search cap {max_domain}")
    start = time.perf_counter()
    pts = points_array(p)
    agree = (pts[:, None, :] == pts[None, :, :]).sum(axis=2)
    rows = []
    for x in range(size):
        m = 0
        for y in np.flatnonzero(agree[x] >= r):
            m |= 1 << int(y)
        rows.append(m)
    everything = (1 << size) - 1
    partner = [everything] * (1 << size)
    best, optimal = 0, []
    for a in range(1, 1 << size):
        low = a & -a
        b = partner[a ^ low] & rows[low.bit_length() - 1]
        partner[a] = b
        prod = a.bit_count() * b.bit_count()
        if prod > best:
            best, optimal = prod, [a]
        elif prod == best:
            optimal.append(a)
    witnesses = []
    for a in optimal:
        b = partner[a]
        if partner[b] != a:
            continue
        witnesses.append((_family_from_bits(p, a), _family_from_bits(p, b)))
    witnesses.sort(key=lambda pair: (pair[0].ranks(), pair[1].ranks()))
    stats = SearchStats(nodes=(1 << size) - 1, elapsed_s=time.perf_counter() - start)
    return SearchResult(p, r, best, witnesses, Mode.FULL, stats)


def _family_from_bits(p: SizeVector, bits: int) -> Family:
    return Family.from_ranks(p, [i for i in range(domain_size(p)) if bits >> i & 1])


def enumerate_optimal_pairs(p, r: int, mode: Mode | str = Mode.MONOTONE, **caps) -> list[tuple]:
    mode = Mode(mode)
    if mode is Mode.FULL:
        return full_max(p, r, **caps).witnesses
    return monotone_max(p, r, **caps).witnesses


@dataclass
class ConjectureVerdict:
    consistent: bool
    ball_product: int
    search_product: int
    ball_pair: BallPairSpec
    all_optima_are_balls: bool | None
    counterexample: tuple | None
    search: SearchResult


def check_conjecture3(p, r: int, **caps) -> ConjectureVerdict:
    """Compare the best ball pair with the exact optimum; for min p_i >= 3 also test every optimum for ball shape."""
    p = as_size_vector(p)
    if r < 1:
        raise ValidationError("conjecture check needs r >= 1")
    result = monotone_max(p, r, **caps)
    spec, ball_product = best_ball_pair(p, r)
    consistent = ball_product == result.max_product
    all_balls = None
    counterexample = None
    if p.k >= 3:
        non_balls = [
            (a, b) for a, b in result.witnesses
            if a.ball_shape() is None or b.ball_shape() is None
        ]
        all_balls = not non_balls
        if non_balls:
            counterexample = non_balls[0]
    if not consistent:
        counterexample = result.witnesses[0]
    return ConjectureVerdict(consistent, ball_product, result.max_product, spec,
                             all_balls, counterexample, result)
