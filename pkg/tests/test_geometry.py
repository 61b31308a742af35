from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padic_kernel.geometry import (
    Polydisc,
    Relation,
    ball_product,
    compare,
    contains_point,
    disjointify,
    min_valuation,
    product_split,
    split,
)
from padic_kernel.padic import PAdicPoint, points_mod

from strategies import balls, small_primes


def B(p, alpha, *center):
    return Polydisc.of(p, alpha, *center)


def reps(p: int, dim: int, lo: int, depth: int):
    """Representatives of p^lo Z_p^dim modulo p^depth."""
    return list(points_mod(p, dim, lo, depth))


def test_contains_examples():
    assert contains_point(B(3, 0, 0), PAdicPoint.of(3, 0))
    assert not contains_point(B(3, 1, 0), PAdicPoint.of(3, 1))
    assert contains_point(B(3, 1, 1), PAdicPoint.of(3, 4))
    assert PAdicPoint.of(3, Fraction(10, 3)) in B(3, -1, Fraction(1, 3))


def test_canonical_center():
    assert B(3, 1, 4) == B(3, 1, 1)
    assert B(3, -1, 5) == B(3, -1, 0)
    assert B(2, 0, Fraction(3, 2)).center == (Fraction(1, 2),)
    assert B(2, 1, Fraction(3, 2)).center == (Fraction(3, 2),)


def test_compare_examples():
    b = B(3, 1, 2)
    assert compare(b, b) is Relation.EQUAL
    for p in (2, 3, 5):
        assert compare(B(p, 1, 0), B(p, 0, 0)) is Relation.FIRST_INSIDE_SECOND
        assert compare(B(p, 0, 0), B(p, 1, 0)) is Relation.SECOND_INSIDE_FIRST
    assert compare(B(3, 1, 0), B(3, 1, 1)) is Relation.DISJOINT


def test_split_examples():
    b = B(3, 1, 2)
    assert split(b, 1) == [b]
    assert split(B(2, 0, 0), 1) == [B(2, 1, 0), B(2, 1, 1)]
    nine = split(Polydisc(3, 0, (Fraction(0), Fraction(0))), 1)
    assert len(nine) == 9
    assert {b.center for b in nine} == {(Fraction(i), Fraction(j)) for i in range(3) for j in range(3)}
    with pytest.raises(ValueError):
        split(b, 0)


def test_disjointify_examples():
    disjoint = [B(2, 1, 0), B(2, 1, 1)]
    assert disjointify(disjoint) == disjoint
    assert disjointify([B(3, 0, 0), B(3, 1, 0)]) == [B(3, 0, 0)]
    assert disjointify([B(2, 2, 0), B(2, 1, 0), B(2, 1, 1)]) == [B(2, 1, 0), B(2, 1, 1)]


def test_product_split_examples():
    b = Polydisc.of(3, 1, 2, 5)
    c, d = product_split(b, 1)
    assert (c, d) == (B(3, 1, 2), B(3, 1, 5))
    assert ball_product(c, d) == b
    z = Polydisc.of(2, 3, 0, 0)
    assert product_split(z, 1) == (B(2, 3, 0), B(2, 3, 0))


def test_min_valuation_examples():
    assert min_valuation(B(3, 2, 0)) == 2
    assert min_valuation(B(3, 2, 1)) == 0
    assert min_valuation(B(3, 1, Fraction(1, 3))) == -1


def test_volume_and_dilate():
    assert B(3, 2, 0).volume() == Fraction(1, 9)
    assert Polydisc.of(2, -1, 0, 0).volume() == 4
    # {x : 3 x in B(0, 1)} = Z_3
    assert B(3, 1, 0).dilate(3) == B(3, 0, 0)


def test_mixed_primes_rejected():
    with pytest.raises(ValueError):
        compare(B(2, 0, 0), B(3, 0, 0))


# -- properties ----------------------------------------------------------------


@given(st.data())
def test_split_partitions_the_ball(data):
    p = data.draw(small_primes)
    dim = data.draw(st.integers(1, 2))
    b = data.draw(balls(p, dim, -1, 1))
    gamma = data.draw(st.integers(b.alpha, b.alpha + 1))
    parts = split(b, gamma)
    assert len(parts) == p ** (dim * (gamma - b.alpha))
    for x in reps(p, dim, -1, gamma + 1):
        hits = sum(x in part for part in parts)
        assert hits == (1 if x in b else 0)


@given(st.data())
def test_compare_matches_membership(data):
    p = data.draw(small_primes)
    dim = data.draw(st.integers(1, 2))
    b1 = data.draw(balls(p, dim, -1, 2))
    b2 = data.draw(balls(p, dim, -1, 2))
    pts = reps(p, dim, -1, max(b1.alpha, b2.alpha) + 1)
    in1 = {x for x in pts if x in b1}
    in2 = {x for x in pts if x in b2}
    rel = compare(b1, b2)
    assert (rel is Relation.DISJOINT) == (not in1 & in2)
    if rel is Relation.FIRST_INSIDE_SECOND:
        assert in1 < in2
    if rel is Relation.EQUAL:
        assert in1 == in2


@given(st.data())
def test_disjointify_preserves_union(data):
    p = data.draw(small_primes)
    dim = data.draw(st.integers(1, 2))
    bs = data.draw(st.lists(balls(p, dim, -1, 2), max_size=6))
    out = disjointify(bs)
    for i, a in enumerate(out):
        for b in out[i + 1:]:
            assert compare(a, b) is Relation.DISJOINT
    depth = max((b.alpha for b in bs), default=0) + 1
    for x in reps(p, dim, -1, depth):
        assert any(x in b for b in bs) == any(x in b for b in out)


@given(st.data())
def test_product_split_round_trip(data):
    p = data.draw(small_primes)
    b = data.draw(balls(p, 3, -1, 2))
    m = data.draw(st.integers(1, 2))
    c, d = product_split(b, m)
    assert ball_product(c, d) == b
    assert (c.dim, d.dim) == (m, 3 - m)


@given(st.data())
def test_translate_reflect_membership(data):
    p = data.draw(small_primes)
    b = data.draw(balls(p, 1, -1, 2))
    shift = PAdicPoint.of(p, Fraction(data.draw(st.integers(-20, 20)), p))
    for x in reps(p, 1, -2, b.alpha + 1):
        assert (x in b) == (x + shift in b.translate(shift))
        assert (x in b) == (-x in b.reflect())
