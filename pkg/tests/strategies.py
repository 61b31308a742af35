"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from padic_kernel.geometry import Polydisc
from padic_kernel.padic import PAdicPoint
from padic_kernel.scalar import Cyc, _phi
from padic_kernel.schwartz import canonicalize

primes = st.sampled_from([2, 3, 5])
small_primes = st.sampled_from([2, 3])


def padic_rationals(p: int, max_den_exp: int = 2, max_num: int = 200, nonzero: bool = False):
    num = st.integers(-max_num, max_num)
    if nonzero:
        num = num.filter(bool)
    return st.builds(lambda n, s: Fraction(n, p**s), num, st.integers(0, max_den_exp))


def rationals(max_num: int = 6, max_den: int = 4):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


@st.composite
def cyc_scalars(draw, p: int, max_level: int = 2):
    k = draw(st.integers(0, max_level))
    coeffs = draw(st.lists(rationals(), min_size=_phi(p, k), max_size=_phi(p, k)))
    return Cyc(p, k, coeffs)


def points(p: int, dim: int, lo: int = -1, hi: int = 2):
    coord = st.builds(lambda n: Fraction(n) * Fraction(p) ** lo, st.integers(0, p ** (hi - lo) - 1))
    return st.builds(lambda cs: PAdicPoint(p, tuple(cs)), st.lists(coord, min_size=dim, max_size=dim))


@st.composite
def balls(draw, p: int, dim: int, alpha_lo: int = -1, alpha_hi: int = 2):
    alpha = draw(st.integers(alpha_lo, alpha_hi))
    center = draw(st.lists(st.integers(0, p**2 - 1), min_size=dim, max_size=dim))
    return Polydisc(p, alpha, tuple(Fraction(c) for c in center))


def raw_terms(p: int, dim: int, max_terms: int = 5, cyclotomic: bool = False, alpha_lo: int = -1, alpha_hi: int = 2):
    coef = cyc_scalars(p, 1) if cyclotomic else st.builds(lambda q: Cyc.rational(p, q), rationals())
    return st.lists(st.tuples(coef, balls(p, dim, alpha_lo, alpha_hi)), max_size=max_terms)


def sb_functions(p: int, dim: int, **kwargs):
    return raw_terms(p, dim, **kwargs).map(lambda raw: canonicalize(raw, p, dim))
