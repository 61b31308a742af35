"""Schwartz-Bruhat functions on Q_p^m as finite sums of polydisc indicators.

Every :class:`SBFunction` is kept in its coarsest disjoint form: balls are
pairwise disjoint, coefficients are nonzero and no complete family of p^m
sibling balls shares one coefficient.  That form is unique, so equality of
functions is equality of term lists.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .geometry import Polydisc, ball_product, min_valuation, product_split, split
from .padic import PAdicPoint, inner, ord
from .scalar import Cyc, cyc, psi

__all__ = [
    "SBFunction",
    "add",
    "canonicalize",
    "convolve",
    "dilate",
    "eval_at",
    "fourier",
    "fourier_eval",
    "indicator",
    "integrate",
    "local_constancy_radius",
    "modulate",
    "mul_pointwise",
    "reflect",
    "sb_equal",
    "scale",
    "support_radius",
    "tensor",
    "tensor_decompose",
    "translate",
]

Term = tuple[Cyc, Polydisc]


@dataclass(frozen=True)
class SBFunction:
    p: int
    dim: int
    terms: tuple[Term, ...] = ()

    @classmethod
    def zero(cls, p: int, dim: int) -> SBFunction:
        return cls(p, dim, ())

    @classmethod
    def from_terms(cls, p: int, dim: int, raw: Iterable[tuple[object, Polydisc]]) -> SBFunction:
        return canonicalize(raw, p, dim)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def balls(self) -> list[Polydisc]:
        return [b for _, b in self.terms]

    def __call__(self, x: PAdicPoint) -> Cyc:
        return eval_at(self, x)

    def __add__(self, other: SBFunction) -> SBFunction:
        return add(self, other)

    def __neg__(self) -> SBFunction:
        return scale(-1, self)

    def __sub__(self, other: SBFunction) -> SBFunction:
        return add(self, -other)

    def __mul__(self, other) -> SBFunction:
        if isinstance(other, SBFunction):
            return mul_pointwise(self, other)
        return scale(other, self)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*1[{b}]" for c, b in self.terms)


def indicator(ball: Polydisc, coef=1) -> SBFunction:
    c = cyc(ball.p, coef)
    # a single ball with nonzero coefficient is already coarsest
    return SBFunction(ball.p, ball.dim, () if c.is_zero() else ((c, ball),))


def _refine_disjoint(p: int, acc: dict[Polydisc, Cyc]) -> dict[Polydisc, Cyc]:
    """Split every ball that strictly contains another one until all are disjoint."""
    if len(acc) < 2:
        return dict(acc)
    lo = min(b.alpha for b in acc)
    has_desc = set()
    for b in acc:
        for level in range(lo, b.alpha):
            has_desc.add(b.ancestor(level))
    out: dict[Polydisc, Cyc] = {}
    stack = list(acc.items())
    while stack:
        ball, coef = stack.pop()
        if ball in has_desc:
            stack.extend((child, coef) for child in ball.children())
        elif ball in out:
            out[ball] = out[ball] + coef
        else:
            out[ball] = coef
    return out


def _merge_siblings(p: int, dim: int, fine: dict[Polydisc, Cyc]) -> dict[Polydisc, Cyc]:
    levels: dict[int, dict[Polydisc, Cyc]] = defaultdict(dict)
    for b, c in fine.items():
        levels[b.alpha][b] = c
    family = p**dim
    if not levels:
        return {}
    level = max(levels)
    while level >= min(levels):
        groups: dict[Polydisc, list[Polydisc]] = defaultdict(list)
        for b in levels[level]:
            groups[b.parent()].append(b)
        for parent, kids in groups.items():
            if len(kids) != family:
                continue
            c0 = levels[level][kids[0]]
            if all(levels[level][k] == c0 for k in kids):
                for k in kids:
                    del levels[level][k]
                levels[level - 1][parent] = c0
        level -= 1
    return {b: c for lvl in levels.values() for b, c in lvl.items()}


def canonicalize(raw: Iterable[tuple[object, Polydisc]], p: int, dim: int) -> SBFunction:
    """Coarsest disjoint form of sum(c * 1_B) over the raw terms."""
    acc: dict[Polydisc, Cyc] = {}
    for coef, ball in raw:
        if ball.p != p or ball.dim != dim:
            raise ValueError(f"term on {ball} does not live on Q_{p}^{dim}")
        coef = cyc(p, coef)
        acc[ball] = acc[ball] + coef if ball in acc else coef
    fine = _refine_disjoint(p, acc)
    fine = {b: c for b, c in fine.items() if not c.is_zero()}
    merged = _merge_siblings(p, dim, fine)
    return SBFunction(p, dim, tuple(sorted(((c, b) for b, c in merged.items()), key=lambda t: (t[1].alpha, t[1].center))))


def sb_equal(f: SBFunction, g: SBFunction) -> bool:
    _check(f, g)
    return f.terms == g.terms


def _check(f: SBFunction, g: SBFunction):
    if f.p != g.p:
        raise ValueError(f"mismatched primes {f.p} and {g.p}")
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")


def eval_at(f: SBFunction, x: PAdicPoint) -> Cyc:
    for coef, ball in f.terms:
        if x in ball:
            return coef
    return Cyc.rational(f.p, 0)


def add(f: SBFunction, g: SBFunction) -> SBFunction:
    _check(f, g)
    return canonicalize(f.terms + g.terms, f.p, f.dim)


def scale(c, f: SBFunction) -> SBFunction:
    c = cyc(f.p, c)
    if c.is_zero():
        return SBFunction.zero(f.p, f.dim)
    # scaling by a nonzero constant preserves the coarsest form
    return SBFunction(f.p, f.dim, tuple((c * a, b) for a, b in f.terms))


def mul_pointwise(f: SBFunction, g: SBFunction) -> SBFunction:
    _check(f, g)
    raw = []
    for a, b1 in f.terms:
        for c, b2 in g.terms:
            if b1.alpha >= b2.alpha and b1.ancestor(b2.alpha) == b2:
                raw.append((a * c, b1))
            elif b2.alpha > b1.alpha and b2.ancestor(b1.alpha) == b1:
                raw.append((a * c, b2))
    return canonicalize(raw, f.p, f.dim)


def _common_radius(c: Polydisc, d: Polydisc) -> list[Polydisc]:
    gamma = max(c.alpha, d.alpha)
    return [ball_product(x, y) for x in split(c, gamma) for y in split(d, gamma)]


def tensor(f: SBFunction, g: SBFunction) -> SBFunction:
    """(f (x) g)(x, y) = f(x) g(y) on Q_p^{m+n}."""
    if f.p != g.p:
        raise ValueError(f"mismatched primes {f.p} and {g.p}")
    raw = [(a * c, ball) for a, b1 in f.terms for c, b2 in g.terms for ball in _common_radius(b1, b2)]
    return canonicalize(raw, f.p, f.dim + g.dim)


def tensor_decompose(h: SBFunction, m: int) -> list[tuple[Cyc, Polydisc, Polydisc]]:
    """h = sum c_i 1_{C_i} (x) 1_{D_i}, read off the canonical form."""
    if not 0 < m < h.dim:
        raise ValueError(f"bad split position {m} for dimension {h.dim}")
    return [(c, *product_split(b, m)) for c, b in h.terms]


def integrate(f: SBFunction) -> Cyc:
    """Haar integral, vol(Z_p^m) = 1."""
    total = Cyc.rational(f.p, 0)
    for c, b in f.terms:
        total = total + c * b.volume()
    return total


def convolve(f: SBFunction, g: SBFunction) -> SBFunction:
    """(f * g)(x) = integral f(y) g(x - y) dy, via the closed form on balls."""
    _check(f, g)
    p, m = f.p, f.dim
    raw = []
    for a, b1 in f.terms:
        for c, b2 in g.terms:
            lo, hi = min(b1.alpha, b2.alpha), max(b1.alpha, b2.alpha)
            center = tuple(x + y for x, y in zip(b1.center, b2.center))
            raw.append((a * c * Fraction(p) ** (-hi * m), Polydisc(p, lo, center)))
    return canonicalize(raw, p, m)


def support_radius(f: SBFunction) -> int:
    """Largest alpha with supp f inside B(0, alpha)."""
    if f.is_zero():
        raise ValueError("the zero function has no support radius")
    return min(min_valuation(b) for b in f.balls)


def local_constancy_radius(f: SBFunction) -> int:
    """Smallest alpha such that f is constant on every ball of radius alpha."""
    if f.is_zero():
        raise ValueError("the zero function has no local constancy radius")
    return max(b.alpha for b in f.balls)


def modulate(f: SBFunction, eta: PAdicPoint) -> SBFunction:
    """x -> f(x) * psi(<x, eta>)."""
    if eta.p != f.p or eta.dim != f.dim:
        raise ValueError("frequency does not match the function's space")
    if eta.is_zero():
        return f
    phase_radius = 1 - ord(eta)
    raw = []
    for c, b in f.terms:
        for child in split(b, max(b.alpha, phase_radius)):
            raw.append((c * psi(f.p, inner(child.center_point, eta)), child))
    return canonicalize(raw, f.p, f.dim)


def fourier(f: SBFunction) -> SBFunction:
    """f^(xi) = integral f(x) psi(<x, xi>) dx, exactly.

    The transform of 1_{B(a, alpha)} is p^{-alpha m} psi(<a, xi>) on
    B(0, 1 - alpha); it is split down to the radius where the phase is
    constant.
    """
    p, m = f.p, f.dim
    raw = []
    for c, b in f.terms:
        a = b.center_point
        supp = Polydisc(p, 1 - b.alpha, (Fraction(0),) * m)
        depth = supp.alpha if a.is_zero() else max(supp.alpha, 1 - ord(a))
        weight = c * Fraction(p) ** (-b.alpha * m)
        for child in split(supp, depth):
            raw.append((weight * psi(p, inner(a, child.center_point)), child))
    return canonicalize(raw, p, m)


def fourier_eval(f: SBFunction, xi: PAdicPoint) -> Cyc:
    """Pointwise value of the Fourier transform, without materializing it."""
    p, m = f.p, f.dim
    total = Cyc.rational(p, 0)
    v = ord(xi)
    for c, b in f.terms:
        if v >= 1 - b.alpha:
            total = total + c * Fraction(p) ** (-b.alpha * m) * psi(p, inner(b.center_point, xi))
    return total


def translate(f: SBFunction, shift: PAdicPoint) -> SBFunction:
    """x -> f(x - shift)."""
    return SBFunction(f.p, f.dim, tuple(sorted(((c, b.translate(shift)) for c, b in f.terms), key=lambda t: t[1])))


def reflect(f: SBFunction) -> SBFunction:
    """x -> f(-x)."""
    return SBFunction(f.p, f.dim, tuple(sorted(((c, b.reflect()) for c, b in f.terms), key=lambda t: t[1])))


def dilate(f: SBFunction, lam) -> SBFunction:
    """x -> f(lam * x) for a nonzero scalar lam."""
    lam = Fraction(lam)
    if lam == 0:
        raise ValueError("dilation by 0")
    return canonicalize([(c, b.dilate(lam)) for c, b in f.terms], f.p, f.dim)


def restrict_diagonal(f: SBFunction) -> SBFunction:
    """g(x) = f(x, x) for f on Q_p^{2m}."""
    if f.dim % 2:
        raise ValueError("diagonal restriction needs an even dimension")
    m = f.dim // 2
    raw = []
    for c, b in f.terms:
        first, second = product_split(b, m)
        if first == second:
            raw.append((c, first))
    return canonicalize(raw, f.p, m)

