import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xintersect.balls import BallSpec, ball_members
from xintersect.core import ResourceLimitError, SizeVector, ValidationError, domain_size
from xintersect.families import (
    Family,
    FunctionSet,
    antipodal,
    are_r_cross_intersecting,
    aw_bw,
    check_mutual_duality,
    dual,
    lemma9_witness,
    relevant_coordinates,
)

from conftest import brute_agree, brute_points

CUBE = SizeVector((2, 2, 2))
PAPER_A = [(1, 1, 1), (1, 2, 2)]
PAPER_B = [(1, 1, 2), (1, 2, 1)]


def brute_dual(p, members, r):
    return [y for y in brute_points(p) if all(brute_agree(x, y) >= r for x in members)]


def small_families():
    return st.lists(st.integers(2, 3), min_size=1, max_size=3).flatmap(
        lambda e: st.tuples(
            st.just(SizeVector(tuple(e))),
            st.lists(st.booleans(), min_size=int(np.prod(e)), max_size=int(np.prod(e))),
            st.integers(0, len(e)),
        )
    )


def test_family_basics():
    a = Family.from_points(CUBE, PAPER_A)
    assert a.cardinality == 2 and len(a) == 2
    assert (1, 2, 2) in a and (2, 2, 2) not in a
    assert a.points() == PAPER_A
    assert a.to_json() == [[1, 1, 1], [1, 2, 2]]
    assert a == Family.from_ranks(CUBE, [0, 3])
    assert hash(a) == hash(Family.from_ranks(CUBE, [0, 3]))
    with pytest.raises(AttributeError):
        a.cardinality = 3


def test_family_cap():
    with pytest.raises(ResourceLimitError):
        Family.empty((2,) * 21)


def test_cross_intersecting_examples():
    empty = Family.empty(CUBE)
    assert are_r_cross_intersecting(empty, Family.full(CUBE), 3)
    assert are_r_cross_intersecting(Family.from_points(CUBE, PAPER_A), Family.from_points(CUBE, PAPER_B), 2)
    assert not are_r_cross_intersecting(
        Family.from_points(CUBE, [(1, 1, 1)]), Family.from_points(CUBE, [(2, 2, 2)]), 1
    )
    with pytest.raises(ValidationError):
        are_r_cross_intersecting(empty, Family.empty((2, 2)), 1)


def test_dual_examples():
    assert dual(Family.empty(CUBE), 2) == Family.full(CUBE)
    d = dual(Family.from_points(CUBE, PAPER_A), 2)
    assert d.points() == brute_dual(CUBE, PAPER_A, 2) == PAPER_B
    assert dual(Family.full((2, 2)), 1).cardinality == 0


@settings(max_examples=80, deadline=None)
@given(small_families())
def test_dual_matches_brute_force(case):
    p, bits, r = case
    a = Family(p, bits)
    assert dual(a, r).points() == brute_dual(p, a.points(), r)


@settings(max_examples=80, deadline=None)
@given(small_families(), st.data())
def test_dual_is_antitone_galois(case, data):
    p, bits, r = case
    big = Family(p, bits)
    mask = data.draw(st.lists(st.booleans(), min_size=len(bits), max_size=len(bits)))
    small = Family(p, np.array(bits) & np.array(mask))
    assert dual(big, r).issubset(dual(small, r))
    d = dual(small, r)
    assert dual(dual(d, r), r) == d
    assert are_r_cross_intersecting(small, d, r)
    # dual(A) is the unique largest partner: adding any outside point breaks cross-intersection
    for y in range(domain_size(p)):
        if not d.members[y] and small.cardinality:
            grown = Family(p, d.members | (np.arange(domain_size(p)) == y))
            assert not are_r_cross_intersecting(small, grown, r)


def test_mutual_duality_examples():
    assert check_mutual_duality(Family.full(CUBE), Family.full(CUBE), 0)
    assert check_mutual_duality(Family.from_points(CUBE, PAPER_A), Family.from_points(CUBE, PAPER_B), 2)
    p = SizeVector((3, 3))
    fixed = Family.from_predicate(p, lambda x: x[0] == 1)
    assert check_mutual_duality(fixed, fixed, 1)
    assert not check_mutual_duality(Family.from_points(CUBE, PAPER_A[:1]), Family.from_points(CUBE, PAPER_B), 2)


def brute_relevant(a):
    p = a.domain
    pts = set(a.points())
    out = set()
    for x in brute_points(p):
        for i in range(p.n):
            for v in range(1, p[i] + 1):
                y = x[:i] + (v,) + x[i + 1:]
                if (x in pts) != (y in pts):
                    out.add(i + 1)
    return frozenset(out)


def test_relevant_coordinates_examples():
    p = SizeVector((2, 3))
    assert relevant_coordinates(Family.full(p)) == frozenset()
    assert relevant_coordinates(Family.empty(p)) == frozenset()
    assert relevant_coordinates(Family.from_predicate(p, lambda x: x[0] == 1)) == {1}
    q = SizeVector((3,) * 5)
    ball = ball_members(q, BallSpec((1,) * 5, range(1, 6), 1))
    assert relevant_coordinates(ball) == {1, 2, 3, 4, 5} == brute_relevant(ball)


@settings(max_examples=60, deadline=None)
@given(small_families())
def test_relevant_coordinates_brute(case):
    p, bits, _ = case
    a = Family(p, bits)
    assert relevant_coordinates(a) == brute_relevant(a)


def test_lemma9_examples():
    p = SizeVector((3, 3))
    fixed = Family.from_predicate(p, lambda x: x[0] == 1)
    assert lemma9_witness(fixed, fixed, 1) == 1
    q = SizeVector((3,) * 5)
    single = Family.from_points(q, [(1,) * 5])
    ball = ball_members(q, BallSpec((1,) * 5, range(1, 6), 1))
    assert sum(1 for y in ball.points() if y[2] != 1) == 2
    assert lemma9_witness(single, ball, 3) == 1
    full = Family.full((2, 2))
    assert lemma9_witness(full, full, 1) == 1
    with pytest.raises(ValidationError):
        lemma9_witness(full, full, 3)


def test_lemma9_absent_when_spread():
    p = SizeVector((3, 3))
    spread = Family.from_predicate(p, lambda x: x[1] == 1)
    assert lemma9_witness(spread, spread, 1) is None


def test_antipodal_examples():
    assert antipodal((2, 2), (1, 2)) == (2, 1)
    assert antipodal((3, 3), (3, 3)) == (1, 1)


@given(st.lists(st.integers(2, 7), min_size=1, max_size=6), st.data())
def test_antipodal_never_intersects(entries, data):
    x = tuple(data.draw(st.integers(1, v)) for v in entries)
    y = antipodal(entries, x)
    assert brute_agree(x, y) == 0


def test_aw_bw_examples():
    p = SizeVector((2, 2))
    a, b = aw_bw(p, FunctionSet.for_domain(p, [(1, 1), (2, 2)]))
    assert a.points() == [(1, 1), (2, 2)]
    assert b.points() == [(1, 2), (2, 1)]
    assert a.cardinality * b.cardinality == 4 == domain_size(p) ** 2 // 4
    a, b = aw_bw(p, FunctionSet.for_domain(p, itertools.product((1, 2), repeat=2)))
    assert a == Family.full(p) and b.cardinality == 0


def test_aw_bw_majority_example():
    p = SizeVector((2, 2, 2))
    majority_two = [x for x in brute_points(p) if sum(v == 1 for v in x) <= 1]
    a, b = aw_bw(p, FunctionSet.for_domain(p, majority_two))
    assert a.points() == b.points() == majority_two
    assert a.cardinality * b.cardinality == 16 == 64 // 4


def test_aw_bw_validation():
    p = SizeVector((2, 3))
    with pytest.raises(ValidationError):
        aw_bw(p, FunctionSet((1, 2), frozenset({(1, 1)})))
    with pytest.raises(ValidationError):
        aw_bw(p, FunctionSet((1,), frozenset()))


@pytest.mark.parametrize("p", [(2, 2), (2, 3), (2, 2, 2), (2, 3, 2), (2, 2, 2, 2)])
def test_aw_bw_pairs_cross_intersect(p):
    p = SizeVector(p)
    binary = sum(1 for v in p if v == 2)
    for size in range(1, 2 ** binary + 1):
        for w in FunctionSet.all_of_size(p, size):
            a, b = aw_bw(p, w)
            assert are_r_cross_intersecting(a, b, 1)
            if size == 2 ** (binary - 1):
                assert 4 * a.cardinality * b.cardinality == domain_size(p) ** 2
