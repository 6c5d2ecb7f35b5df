"""Randomised and search-backed property suites.

Each suite draws from one seeded generator and stops at the first failure,
returning it as a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np

from .balls import ball_members, ball_size, BallSpec, log_concave_check
from .bounds import theorem5_bound, theorem6_filter
from .compress import (
    SupportSystem,
    compress_pair,
    family_from_support,
    shift,
    supports_cross_intersecting,
)
from .core import SizeVector, domain_size
from .families import (
    Family,
    are_r_cross_intersecting,
    check_mutual_duality,
    dual,
    lemma9_witness,
    relevant_coordinates,
)
from .search import MAX_FULL_DOMAIN, check_conjecture3, full_max, monotone_max

DEFAULT_SEED = 20240501
DEFAULT_TRIALS = 1000
THEOREM5_RTOL = 1e-9


@dataclass
class SuiteReport:
    suite: str
    trials: int
    failures: int = 0
    certificate: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _random_p(rng, max_n=4, max_entry=5, max_domain=10_000) -> SizeVector:
    while True:
        n = int(rng.integers(1, max_n + 1))
        entries = tuple(int(v) for v in rng.integers(2, max_entry + 1, size=n))
        if domain_size(entries) <= max_domain:
            return SizeVector(entries)


def _random_coords(rng, n: int, min_size: int = 0) -> tuple[int, ...]:
    while True:
        chosen = tuple(i + 1 for i in range(n) if rng.random() < 0.6)
        if len(chosen) >= min_size:
            return chosen


def _random_family(rng, p, density=None) -> Family:
    density = rng.random() if density is None else density
    return Family(p, rng.random(domain_size(p)) < density)


def _random_cross_pair(rng, p, r) -> tuple[Family, Family]:
    a = _random_family(rng, p, rng.uniform(0.02, 0.3))
    partner = dual(a, r)
    b = Family(p, partner.members & (rng.random(domain_size(p)) < rng.uniform(0.3, 1.0)))
    return a, b


def _random_downset(rng, n: int) -> SupportSystem:
    gens = [int(g) for g in rng.integers(0, 1 << n, size=int(rng.integers(1, 4)))]
    return SupportSystem(n, frozenset(s for s in range(1 << n) if any(s & ~g == 0 for g in gens)))


def _pick(rng, p, r, **kw):
    p = p if p is not None else _random_p(rng, **kw)
    r = r if r is not None else int(rng.integers(0, p.n + 1))
    return p, min(r, p.n)


def suite_ballsize(rng, trials, p=None, r=None) -> SuiteReport:
    rep = SuiteReport("ballsize", trials)
    for _ in range(trials):
        q = p if p is not None else _random_p(rng, max_entry=5, max_domain=2000)
        t = _random_coords(rng, q.n)
        radius = int(rng.integers(0, len(t) + 1))
        center = tuple(int(rng.integers(1, v + 1)) for v in q.entries)
        got = ball_size(q, t, radius)
        want = ball_members(q, BallSpec(center, t, radius)).cardinality
        if got != want:
            rep.failures += 1
            rep.certificate = {"p": list(q), "T": list(t), "radius": radius,
                               "center": list(center), "formula": got, "enumerated": want}
            break
    return rep


def suite_logconcavity(rng, trials, p=None, r=None) -> SuiteReport:
    rep = SuiteReport("logconcavity", trials)
    checks = 0
    for _ in range(trials):
        q = p if p is not None and p.n >= 2 else _random_p(rng, max_n=9, max_entry=9,
                                                          max_domain=10 ** 12)
        if q.n < 2:
            continue
        t = _random_coords(rng, q.n, min_size=2)
        for l in range(1, len(t)):
            checks += 1
            if not log_concave_check(q, t, l):
                rep.failures += 1
                rep.certificate = {"p": list(q), "T": list(t), "l": l}
                return rep
    rep.details["checks"] = checks
    return rep


def suite_dual(rng, trials, p=None, r=None) -> SuiteReport:
    rep = SuiteReport("dual", trials)
    for _ in range(trials):
        q, rr = _pick(rng, p, r, max_domain=64)
        big = _random_family(rng, q)
        small = Family(q, big.members & (rng.random(domain_size(q)) < 0.5))
        d_big, d_small = dual(big, rr), dual(small, rr)
        problems = []
        if not d_big.issubset(d_small):
            problems.append("not antitone")
        if dual(dual(d_small, rr), rr) != d_small:
            problems.append("triple dual differs")
        if not are_r_cross_intersecting(small, d_small, rr):
            problems.append("(A, dual A) not cross-intersecting")
        if problems:
            rep.failures += 1
            rep.certificate = {"p": list(q), "r": rr, "A": small.to_json(),
                               "A_superset": big.to_json(), "problems": problems}
            break
    return rep


def suite_shift(rng, trials, p=None, r=None) -> SuiteReport:
    rep = SuiteReport("shift", trials)
    for _ in range(trials):
        q, rr = _pick(rng, p, r, max_domain=256)
        a, b = _random_cross_pair(rng, q, rr)
        i = int(rng.integers(1, q.n + 1))
        j = int(rng.integers(2, q[i - 1] + 1))
        sa, sb = shift(a, i, j), shift(b, i, j)
        if (sa.cardinality != a.cardinality or sb.cardinality != b.cardinality
                or not are_r_cross_intersecting(sa, sb, rr)):
            rep.failures += 1
            rep.certificate = {"p": list(q), "r": rr, "i": i, "j": j,
                               "A": a.to_json(), "B": b.to_json()}
            break
    return rep


def suite_compress(rng, trials, p=None, r=None) -> SuiteReport:
    rep = SuiteReport("compress", trials)
    for _ in range(trials):
        q, rr = _pick(rng, p, r, max_domain=128)
        a, b = _random_cross_pair(rng, q, rr)
        res = compress_pair(a, b, rr)
        pots = res.potentials
        ok = (
            all(x > y for x, y in zip(pots, pots[1:]))
            and res.sweeps == len(pots)
            and res.a.cardinality == a.cardinality
            and res.b.cardinality == b.cardinality
            and are_r_cross_intersecting(res.a, res.b, rr)
        )
        if not ok:
            rep.failures += 1
            rep.certificate = {"p": list(q), "r": rr, "A": a.to_json(), "B": b.to_json(),
                               "potentials": list(pots)}
            break
    return rep


def suite_support(rng, trials, p=None, r=None) -> SuiteReport:
    rep = SuiteReport("support", trials)
    for _ in range(trials):
        q, rr = _pick(rng, p, r, max_domain=256)
        sa, sb = _random_downset(rng, q.n), _random_downset(rng, q.n)
        support_level = supports_cross_intersecting(sa, sb, rr)
        point_level = are_r_cross_intersecting(family_from_support(q, sa),
                                               family_from_support(q, sb), rr)
        if support_level != point_level:
            rep.failures += 1
            rep.certificate = {"p": list(q), "r": rr, "S_A": sa.sorted_masks(),
                               "S_B": sb.sorted_masks(), "support_level": support_level,
                               "point_level": point_level}
            break
    return rep


def certified_optima(p: SizeVector, r: int) -> list[tuple[Family, Family]]:
    """Witness pairs from the monotone search, plus the full search when the domain is tiny."""
    pairs = monotone_max(p, r).witness_families()
    if domain_size(p) <= MAX_FULL_DOMAIN:
        pairs += full_max(p, r).witnesses
    return pairs


def pair_conformance(p: SizeVector, r: int, a: Family, b: Family) -> list[str]:
    """Bound checks every maximal pair must pass; returns the list of violations."""
    problems = []
    if not check_mutual_duality(a, b, r):
        problems.append("not mutually dual")
    rel_a, rel_b = relevant_coordinates(a), relevant_coordinates(b)
    if rel_a != rel_b:
        problems.append("relevant coordinates differ")
    relevant = rel_a | rel_b
    for i in sorted(relevant):
        if lemma9_witness(a, b, i) is None:
            problems.append(f"no concentration value at coordinate {i}")
    bound = theorem5_bound(p, relevant)
    slack = bound * (1 + mpmath.mpf(THEOREM5_RTOL))
    if a.cardinality > slack or b.cardinality > slack:
        problems.append(f"size exceeds entropy bound {mpmath.nstr(bound, 15)}")
    if r >= 1 and not theorem6_filter(p, r, relevant):
        problems.append("relevant set fails the product filter")
    return problems


def _conformance_suite(name, check):
    def run(rng, trials, p=None, r=None) -> SuiteReport:
        if p is None or r is None:
            raise ValueError(f"suite {name} needs --p and --r")
        rep = SuiteReport(name, 0)
        for a, b in certified_optima(p, r):
            rep.trials += 1
            problems = check(p, r, a, b)
            if problems:
                rep.failures += 1
                rep.certificate = {"A": a.to_json(), "B": b.to_json(), "problems": problems}
                break
        return rep
    return run


def _lemma9_only(p, r, a, b):
    relevant = relevant_coordinates(a) | relevant_coordinates(b)
    return [f"no concentration value at coordinate {i}" for i in sorted(relevant)
            if lemma9_witness(a, b, i) is None]


def _theorem5_only(p, r, a, b):
    bound = theorem5_bound(p, relevant_coordinates(a) | relevant_coordinates(b))
    slack = bound * (1 + mpmath.mpf(THEOREM5_RTOL))
    if a.cardinality > slack or b.cardinality > slack:
        return [f"size exceeds entropy bound {mpmath.nstr(bound, 15)}"]
    return []


def suite_conjecture3(rng, trials, p=None, r=None) -> SuiteReport:
    if p is None or r is None:
        raise ValueError("suite conjecture3 needs --p and --r")
    verdict = check_conjecture3(p, r)
    rep = SuiteReport("conjecture3", 1)
    rep.details = {
        "consistent": verdict.consistent,
        "ball_product": verdict.ball_product,
        "search_product": verdict.search_product,
        "all_optima_are_balls": verdict.all_optima_are_balls,
        "optima": len(verdict.search.witnesses),
    }
    if verdict.counterexample is not None:
        a, b = verdict.counterexample
        rep.failures = 1
        rep.certificate = {"S_A": a.sorted_masks(), "S_B": b.sorted_masks()}
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "ballsize": suite_ballsize,
    "logconcavity": suite_logconcavity,
    "dual": suite_dual,
    "shift": suite_shift,
    "compress": suite_compress,
    "support": suite_support,
    "lemma9": _conformance_suite("lemma9", _lemma9_only),
    "theorem5": _conformance_suite("theorem5", _theorem5_only),
    "conformance": _conformance_suite("conformance", pair_conformance),
    "conjecture3": suite_conjecture3,
}


def run_suite(name: str, *, p: SizeVector | None = None, r: int | None = None,
              trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    rng = np.random.default_rng(seed)
    return SUITES[name](rng, trials, p=p, r=r)
