from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padic_kernel import oracles
from padic_kernel.geometry import Polydisc, split
from padic_kernel.padic import PAdicPoint, inner, points_mod
from padic_kernel.scalar import Cyc, psi, zeta
from padic_kernel.schwartz import (
    SBFunction,
    add,
    canonicalize,
    convolve,
    dilate,
    eval_at,
    fourier,
    fourier_eval,
    indicator,
    integrate,
    local_constancy_radius,
    modulate,
    mul_pointwise,
    reflect,
    restrict_diagonal,
    sb_equal,
    scale,
    support_radius,
    tensor,
    tensor_decompose,
    translate,
)

from strategies import balls, cyc_scalars, points, raw_terms, sb_functions, small_primes


def B(p, alpha, *center):
    return Polydisc.of(p, alpha, *center)


def one(p, alpha=0, *center, dim=1):
    center = center or (0,) * dim
    return indicator(Polydisc.of(p, alpha, *center))


def test_canonicalize_examples():
    f = one(3, 1, 2) + 2 * one(3, 0, Fraction(1, 3))
    assert canonicalize(f.terms, 3, 1) == f
    merged = canonicalize([(1, B(2, 1, 0)), (1, B(2, 1, 1))], 2, 1)
    assert merged.terms == ((Cyc.rational(2, 1), B(2, 0, 0)),)
    assert canonicalize([(1, B(3, 0, 0)), (-1, B(3, 0, 0))], 3, 1).terms == ()


def test_canonicalize_keeps_unequal_siblings():
    f = canonicalize([(1, B(2, 1, 0)), (2, B(2, 1, 1))], 2, 1)
    assert len(f.terms) == 2


def test_canonicalize_merges_through_levels():
    raw = [(1, b) for b in split(B(3, 0, 0), 2)]
    assert canonicalize(raw, 3, 1) == one(3)


def test_sb_equal_examples():
    f = one(2, 1, 1)
    assert sb_equal(f, f)
    assert sb_equal(one(2), canonicalize([(1, B(2, 1, 0)), (1, B(2, 1, 1))], 2, 1))
    assert not sb_equal(one(2, 1, 0), one(2, 1, 1))


def test_eval_examples():
    x = PAdicPoint.of(3, 3)
    assert eval_at(SBFunction.zero(3, 1), x) == 0
    assert eval_at(one(3, 1), x) == 1
    assert eval_at(one(3, 1), PAdicPoint.of(3, 1)) == 0


def test_algebra_examples():
    f = 3 * one(3, 1, 2)
    assert add(f, SBFunction.zero(3, 1)) == f
    assert mul_pointwise(one(3, 0), one(3, 1)) == one(3, 1)
    assert scale(0, f).is_zero()


def test_tensor_examples():
    assert tensor(one(3, 1, 2), one(3, 1, 1)) == indicator(Polydisc.of(3, 1, 2, 1))
    assert tensor(one(3), SBFunction.zero(3, 1)).is_zero()


def test_tensor_decompose_examples():
    c, d = B(3, 1, 2), B(3, 1, 1)
    assert tensor_decompose(tensor(indicator(c), indicator(d)), 1) == [(Cyc.rational(3, 1), c, d)]
    h = indicator(Polydisc.of(2, 1, 0, 0)) + 2 * indicator(Polydisc.of(2, 1, 1, 1))
    parts = tensor_decompose(h, 1)
    assert [(c, C, D) for c, C, D in parts] == [
        (Cyc.rational(2, 1), B(2, 1, 0), B(2, 1, 0)),
        (Cyc.rational(2, 2), B(2, 1, 1), B(2, 1, 1)),
    ]


def test_integrate_examples():
    assert integrate(one(5)) == 1
    # Z_2 = B(0,1) + B(1,1): two translates of equal volume
    assert integrate(one(2, 1)) == Fraction(1, 2)
    assert integrate(one(2, 1, 1)) == integrate(one(2, 1, 0))
    assert integrate(SBFunction.zero(3, 2)) == 0
    assert integrate(indicator(Polydisc.of(3, -1, 0, 0))) == 9


def _residue_values(f: SBFunction, depth: int) -> dict:
    return {t: eval_at(f, PAdicPoint.of(f.p, *t)).to_fraction() for t in _tuples(f.p, f.dim, depth)}


def _tuples(p, dim, depth):
    return [tuple(int(c) for c in x.coords) for x in points_mod(p, dim, 0, depth)]


def test_convolution_examples():
    p = 3
    # oracle: residue sums mod p^2 and p^3
    zp = one(p)
    vals = _residue_values(zp, 2)
    assert all(oracles.brute_convolution_at(vals, vals, p, 1, 2, (x,)) == 1 for x in range(9))
    assert convolve(zp, zp) == zp
    assert convolve(zp, SBFunction.zero(p, 1)).is_zero()
    f, g = one(p, 1), one(p, 2)
    fv, gv = _residue_values(f, 3), _residue_values(g, 3)
    expected = {x: oracles.brute_convolution_at(fv, gv, p, 1, 3, (x,)) for x in range(27)}
    assert set(expected.values()) == {0, Fraction(1, 9)}
    assert convolve(f, g) == scale(Fraction(1, 9), one(p, 1))


def test_radius_examples():
    assert (support_radius(one(3)), local_constancy_radius(one(3))) == (0, 0)
    f = one(3, 2, 1)
    assert (support_radius(f), local_constancy_radius(f)) == (0, 2)
    g = scale(zeta(3, 1), f)
    assert (support_radius(g), local_constancy_radius(g)) == (0, 2)


def test_modulate_examples():
    f = one(3, 1, 2) - one(3, 0, Fraction(1, 3))
    assert modulate(f, PAdicPoint.of(3, 0)) == f
    m = modulate(one(3), PAdicPoint.of(3, 1))
    # oracle: psi(x) at every residue mod 9
    for x in range(9):
        assert eval_at(m, PAdicPoint.of(3, x)) == psi(3, x)
    assert m == sum((scale(zeta(3, 1, k), one(3, 1, k)) for k in range(1, 3)), one(3, 1, 0))


def test_fourier_examples():
    assert fourier(SBFunction.zero(3, 1)).is_zero()
    for p in (2, 3, 5):
        assert fourier(one(p)) == one(p, 1)
    # character-sum oracle for 1_{Z_3}
    pts = oracles.grid(3, 1, 0, 2)
    vals = [Cyc.rational(3, 1)] * len(pts)
    for s in range(27):
        want = oracles.brute_fourier(vals, pts, 3, 0, 2, (s,), -1)
        assert fourier_eval(one(3), PAdicPoint.of(3, Fraction(s, 3))) == want


def test_restrict_diagonal():
    h = indicator(Polydisc.of(3, 1, 0, 0)) + 2 * indicator(Polydisc.of(3, 1, 1, 2))
    assert restrict_diagonal(h) == one(3, 1, 0)


def test_dimension_checks():
    with pytest.raises(ValueError):
        add(one(3), one(3, dim=2))
    with pytest.raises(ValueError):
        add(one(3), one(2))


# -- properties ----------------------------------------------------------------


@given(st.data())
def test_canonical_form_matches_raw_sum(data):
    p = data.draw(small_primes)
    dim = data.draw(st.integers(1, 2))
    raw = data.draw(raw_terms(p, dim, cyclotomic=True))
    f = canonicalize(raw, p, dim)
    assert canonicalize(f.terms, p, dim) == f
    assert oracles.is_pairwise_disjoint(f.balls)
    gamma = max((b.alpha for _, b in raw), default=0)
    pts = oracles.grid(p, dim, -1, gamma + 1)
    assert oracles.first_mismatch(raw, f.terms, pts, p, -1) is None


@given(st.data())
def test_two_decompositions_canonicalize_identically(data):
    p = data.draw(small_primes)
    raw = data.draw(raw_terms(p, 2))
    rng_split = data.draw(st.lists(st.integers(0, 1), min_size=len(raw), max_size=len(raw)))
    resplit = [(c, child) for (c, b), k in zip(raw, rng_split) for child in split(b, b.alpha + k)]
    shuffled = data.draw(st.permutations(resplit))
    assert canonicalize(shuffled, p, 2) == canonicalize(raw, p, 2)


@given(st.data())
def test_integral_linear_translation_and_refinement_invariant(data):
    p = data.draw(small_primes)
    f = data.draw(sb_functions(p, 1, cyclotomic=True))
    g = data.draw(sb_functions(p, 1))
    a = data.draw(cyc_scalars(p, 1))
    assert integrate(add(scale(a, f), g)) == a * integrate(f) + integrate(g)
    shift = data.draw(points(p, 1, -2, 2))
    assert integrate(translate(f, shift)) == integrate(f)
    refined = [(c, child) for c, b in f.terms for child in b.children()]
    total = Cyc.rational(p, 0)
    for c, b in refined:
        total = total + c * b.volume()
    assert total == integrate(f)


@given(st.data())
def test_translate_reflect_dilate_pointwise(data):
    p = data.draw(small_primes)
    f = data.draw(sb_functions(p, 1))
    a = data.draw(points(p, 1, -1, 2))
    for x in points_mod(p, 1, -2, 3):
        assert eval_at(translate(f, a), x) == eval_at(f, x - a)
        assert eval_at(reflect(f), x) == eval_at(f, -x)
        assert eval_at(dilate(f, p), x) == eval_at(f, x.scale(p))


@given(st.data())
def test_tensor_decompose_reassembles(data):
    p = data.draw(small_primes)
    h = data.draw(sb_functions(p, 2, cyclotomic=True))
    parts = tensor_decompose(h, 1)
    rebuilt = SBFunction.zero(p, 2)
    for c, C, D in parts:
        rebuilt = rebuilt + scale(c, tensor(indicator(C), indicator(D)))
    assert rebuilt == h


@given(st.data())
def test_tensor_evaluates_as_product(data):
    p = data.draw(small_primes)
    f = data.draw(sb_functions(p, 1, cyclotomic=True))
    g = data.draw(sb_functions(p, 1))
    h = tensor(f, g)
    for x in points_mod(p, 1, -1, 2):
        for y in points_mod(p, 1, -1, 1):
            assert eval_at(h, x.concat(y)) == eval_at(f, x) * eval_at(g, y)


@given(st.data())
def test_convolution_commutative_bilinear_and_mollifier(data):
    p = data.draw(small_primes)
    dim = data.draw(st.integers(1, 2))
    f = data.draw(sb_functions(p, dim, max_terms=3))
    g = data.draw(sb_functions(p, dim, max_terms=3))
    k = data.draw(sb_functions(p, dim, max_terms=2))
    assert convolve(f, g) == convolve(g, f)
    assert convolve(f, add(g, scale(2, k))) == add(convolve(f, g), scale(2, convolve(f, k)))
    if not f.is_zero():
        a = local_constancy_radius(f)
        for alpha in (a, a + 1):
            assert convolve(f, indicator(Polydisc.of(p, alpha, *(0,) * dim), Fraction(p) ** (alpha * dim))) == f
        below = indicator(Polydisc.of(p, a - 1, *(0,) * dim), Fraction(p) ** ((a - 1) * dim))
        assert convolve(f, below) != f


@given(st.data())
def test_convolution_matches_residue_sum(data):
    p = data.draw(small_primes)
    b1 = data.draw(balls(p, 1, 0, 2))
    b2 = data.draw(balls(p, 1, 0, 2))
    h = convolve(indicator(b1), indicator(b2))
    v1, v2 = oracles.indicator_values(b1, 3), oracles.indicator_values(b2, 3)
    for x in range(p**3):
        assert eval_at(h, PAdicPoint.of(p, x)) == oracles.brute_convolution_at(v1, v2, p, 1, 3, (x,))


@given(st.data())
def test_modulate_pointwise_and_composition(data):
    p = data.draw(small_primes)
    dim = data.draw(st.integers(1, 2))
    f = data.draw(sb_functions(p, dim, max_terms=3, cyclotomic=True))
    e1 = data.draw(points(p, dim, -2, 1))
    e2 = data.draw(points(p, dim, -2, 1))
    m = modulate(f, e1)
    for x in points_mod(p, dim, -1, 1):
        assert eval_at(m, x) == eval_at(f, x) * psi(p, inner(x, e1))
    assert modulate(m, e2) == modulate(f, e1 + e2)


@given(st.data())
def test_fourier_matches_character_sum(data):
    p = data.draw(small_primes)
    f = data.draw(sb_functions(p, 1, max_terms=3, cyclotomic=True, alpha_hi=2))
    if f.is_zero():
        assert fourier(f).is_zero()
        return
    sigma, ahi = support_radius(f), local_constancy_radius(f)
    gamma = max(ahi, 2)
    pts = oracles.grid(p, 1, sigma, gamma)
    vals = oracles.raw_sum_on_grid(f.terms, pts, p, sigma)
    F = fourier(f)
    for s in range(p ** (2 - sigma)):
        xi = PAdicPoint.of(p, Fraction(s, p))
        assert eval_at(F, xi) == oracles.brute_fourier(vals, pts, p, sigma, gamma, (s,), -1)
    # support of the transform
    assert all(b.alpha >= 1 - ahi for b in F.balls)


@given(st.data())
def test_double_fourier_is_scaled_reflection(data):
    p = data.draw(small_primes)
    dim = data.draw(st.integers(1, 2))
    f = data.draw(sb_functions(p, dim, max_terms=3, cyclotomic=True))
    assert fourier(fourier(f)) == scale(Fraction(1, p**dim), reflect(f))


@given(st.data())
def test_fourier_of_tensor_is_tensor_of_fouriers(data):
    p = data.draw(small_primes)
    f = data.draw(sb_functions(p, 1, max_terms=2))
    g = data.draw(sb_functions(p, 1, max_terms=2))
    assert fourier(tensor(f, g)) == tensor(fourier(f), fourier(g))
