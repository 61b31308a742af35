"""Distributions on Q_p^m, given by their pairing with polydisc indicators.

A :class:`Distribution` is a formal combination of atoms.  The built-in atoms
(locally constant densities, Dirac masses, the diagonal) pair with any
Schwartz-Bruhat function in closed form; a :class:`Custom` atom supplies its
own finitely additive value on balls up to a declared depth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Union

from .geometry import Polydisc, product_split, split
from .padic import PAdicPoint, inner
from .scalar import Cyc, cyc, psi
from .schwartz import (
    SBFunction,
    canonicalize,
    eval_at,
    fourier_eval,
    indicator,
    integrate,
    modulate,
    mul_pointwise,
    restrict_diagonal,
)

__all__ = [
    "BasisComparison",
    "Custom",
    "DepthLimitExceeded",
    "Density",
    "Diagonal",
    "Dirac",
    "Distribution",
    "density_is_zero",
    "dist_equal_on_basis",
    "modulated_pair",
    "pair",
    "pair_atom",
    "total_weights",
]


class DepthLimitExceeded(ValueError):
    """A custom atom was asked for a ball finer than its declared depth."""


@dataclass(frozen=True)
class Density:
    f: SBFunction


@dataclass(frozen=True)
class Dirac:
    point: PAdicPoint
    weight: Cyc


@dataclass(frozen=True)
class Diagonal:
    half_dim: int


@dataclass(frozen=True, eq=False)
class Custom:
    """A finitely additive set function on polydiscs of radius <= depth_limit.

    ``table`` is kept when the atom came from an explicit ball -> value table
    (all balls at radius ``depth_limit``) so that it can be written back out.
    """

    pairing: Callable[[Polydisc], Cyc]
    depth_limit: int | None = None
    table: tuple[tuple[Polydisc, Cyc], ...] | None = field(default=None)
    label: str = "custom"

    @classmethod
    def from_table(cls, p: int, table: Iterable[tuple[Polydisc, object]], depth_limit: int) -> Custom:
        entries = tuple(sorted(((b, cyc(p, v)) for b, v in table), key=lambda t: t[0]))
        for b, _ in entries:
            if b.alpha != depth_limit:
                raise ValueError(f"table ball {b} must have radius exactly {depth_limit}")
        if len({b for b, _ in entries}) != len(entries):
            raise ValueError("duplicate balls in custom table")
        lookup = dict(entries)

        def pairing(ball: Polydisc) -> Cyc:
            if ball.alpha == depth_limit:
                return lookup.get(ball, Cyc.rational(p, 0))
            total = Cyc.rational(p, 0)
            for b, v in entries:
                if b.ancestor(ball.alpha) == ball:
                    total = total + v
            return total

        return cls(pairing, depth_limit, entries, "table")

    def value(self, ball: Polydisc) -> Cyc:
        if self.depth_limit is not None and ball.alpha > self.depth_limit:
            raise DepthLimitExceeded(f"ball {ball} is finer than depth limit {self.depth_limit}")
        return self.pairing(ball)


Atom = Union[Density, Dirac, Diagonal, Custom]


def _atom_dim(atom: Atom) -> int | None:
    if isinstance(atom, Density):
        return atom.f.dim
    if isinstance(atom, Dirac):
        return atom.point.dim
    if isinstance(atom, Diagonal):
        return 2 * atom.half_dim
    return None


def _atom_prime(atom: Atom) -> int | None:
    if isinstance(atom, Density):
        return atom.f.p
    if isinstance(atom, Dirac):
        return atom.point.p
    return None


@dataclass(frozen=True)
class Distribution:
    p: int
    dim: int
    atoms: tuple[tuple[Cyc, Atom], ...] = ()

    def __post_init__(self):
        for coef, atom in self.atoms:
            if coef.p != self.p or _atom_prime(atom) not in (None, self.p):
                raise ValueError("atoms use a different prime than the distribution")
            if _atom_dim(atom) not in (None, self.dim):
                raise ValueError(f"atom of dimension {_atom_dim(atom)} in a distribution on Q_p^{self.dim}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int, dim: int) -> Distribution:
        return cls(p, dim, ())

    @classmethod
    def of(cls, p: int, dim: int, atoms: Iterable[tuple[object, Atom]]) -> Distribution:
        return cls(p, dim, tuple((cyc(p, c), a) for c, a in atoms))

    @classmethod
    def density(cls, f: SBFunction) -> Distribution:
        return cls(f.p, f.dim, ((Cyc.rational(f.p, 1), Density(f)),))

    @classmethod
    def dirac(cls, point: PAdicPoint, weight=1) -> Distribution:
        return cls(point.p, point.dim, ((Cyc.rational(point.p, 1), Dirac(point, cyc(point.p, weight))),))

    @classmethod
    def diagonal(cls, p: int, half_dim: int) -> Distribution:
        return cls(p, 2 * half_dim, ((Cyc.rational(p, 1), Diagonal(half_dim)),))

    @classmethod
    def custom(cls, p: int, dim: int, atom: Custom) -> Distribution:
        return cls(p, dim, ((Cyc.rational(p, 1), atom),))

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: Distribution) -> Distribution:
        if (other.p, other.dim) != (self.p, self.dim):
            raise ValueError("distributions live on different spaces")
        return Distribution(self.p, self.dim, self.atoms + other.atoms)

    def __rmul__(self, c) -> Distribution:
        c = cyc(self.p, c)
        return Distribution(self.p, self.dim, tuple((c * a, atom) for a, atom in self.atoms))

    __mul__ = __rmul__

    def __neg__(self) -> Distribution:
        return (-1) * self

    def __sub__(self, other: Distribution) -> Distribution:
        return self + (-other)

    def has_custom(self) -> bool:
        return any(isinstance(a, Custom) for _, a in self.atoms)

    def pair(self, phi: SBFunction) -> Cyc:
        return pair(self, phi)

    def on_ball(self, ball: Polydisc) -> Cyc:
        return pair(self, indicator(ball))


def _check(u: Distribution, phi: SBFunction):
    if phi.p != u.p:
        raise ValueError(f"mismatched primes {u.p} and {phi.p}")
    if phi.dim != u.dim:
        raise ValueError(f"dimension mismatch: distribution on {u.dim}, test function on {phi.dim}")


def _diagonal_pair(phi: SBFunction, half: int) -> Cyc:
    total = Cyc.rational(phi.p, 0)
    for c, b in phi.terms:
        first, second = product_split(b, half)
        if first == second:
            total = total + c * first.volume()
    return total


def pair_atom(atom: Atom, phi: SBFunction) -> Cyc:
    if isinstance(atom, Density):
        return integrate(mul_pointwise(atom.f, phi))
    if isinstance(atom, Dirac):
        return atom.weight * eval_at(phi, atom.point)
    if isinstance(atom, Diagonal):
        return _diagonal_pair(phi, atom.half_dim)
    total = Cyc.rational(phi.p, 0)
    for c, b in phi.terms:
        total = total + c * atom.value(b)
    return total


def pair(u: Distribution, phi: SBFunction) -> Cyc:
    """<u, phi>, exact."""
    _check(u, phi)
    total = Cyc.rational(u.p, 0)
    for coef, atom in u.atoms:
        total = total + coef * pair_atom(atom, phi)
    return total


def modulated_pair_atom(atom: Atom, phi: SBFunction, eta: PAdicPoint) -> Cyc:
    if isinstance(atom, Density):
        return fourier_eval(mul_pointwise(atom.f, phi), eta)
    if isinstance(atom, Dirac):
        value = eval_at(phi, atom.point)
        if value.is_zero():
            return value
        return atom.weight * value * psi(phi.p, inner(atom.point, eta))
    if isinstance(atom, Diagonal):
        m = atom.half_dim
        e1, e2 = eta.split(m)
        return fourier_eval(restrict_diagonal(phi), e1 + e2)
    return pair_atom(atom, modulate(phi, eta))


def modulated_pair(u: Distribution, phi: SBFunction, eta: PAdicPoint, generic: bool = False) -> Cyc:
    """<u, phi * psi(<., eta>)>.

    Built-in atoms use closed forms (a Fourier transform evaluated at one
    frequency); ``generic=True`` forces the literal route through
    :func:`modulate` and :func:`pair`.
    """
    _check(u, phi)
    if eta.p != u.p or eta.dim != u.dim:
        raise ValueError("frequency does not match the distribution's space")
    if generic:
        return pair(u, modulate(phi, eta))
    total = Cyc.rational(u.p, 0)
    for coef, atom in u.atoms:
        total = total + coef * modulated_pair_atom(atom, phi, eta)
    return total


def _raw_ball_pairing(p: int, raw: list[tuple[Cyc, Polydisc]], ball: Polydisc) -> Cyc:
    # integral over ball of sum c_i 1_{B_i}, without canonicalizing
    total = Cyc.rational(p, 0)
    for c, b in raw:
        if b.alpha >= ball.alpha and b.ancestor(ball.alpha) == ball:
            total = total + c * b.volume()
        elif ball.alpha > b.alpha and ball.ancestor(b.alpha) == b:
            total = total + c * ball.volume()
    return total


def density_zero_witness(f, probe_depth: int | None = None, p: int | None = None) -> Polydisc | None:
    """A ball B with <T_f, 1_B> != 0, or None if every probe vanishes.

    ``f`` is an SBFunction or a raw list of (coef, ball) terms; the probes are
    the sub-balls of the raw balls down to ``probe_depth`` and the pairings are
    computed from the raw terms directly.  The depth is raised to the finest
    raw radius, where the probes determine f completely.
    """
    if isinstance(f, SBFunction):
        raw = list(f.terms)
        p = f.p
    else:
        raw = [(c, b) for c, b in f]
        if not raw:
            return None
        p = raw[0][1].p
    raw = [(cyc(p, c), b) for c, b in raw]
    if not raw:
        return None
    finest = max(b.alpha for _, b in raw)
    depth = finest if probe_depth is None else max(probe_depth, finest)
    seen = set()
    for _, b in sorted(raw, key=lambda t: t[1]):
        for level in range(b.alpha, depth + 1):
            for probe in split(b, level):
                if probe in seen:
                    continue
                seen.add(probe)
                if not _raw_ball_pairing(p, raw, probe).is_zero():
                    return probe
    return None


def density_is_zero(f, probe_depth: int | None = None) -> bool:
    """True iff T_f vanishes on every probe, which by injectivity means f = 0."""
    return density_zero_witness(f, probe_depth) is None


class BasisComparison(NamedTuple):
    equal: bool
    checked: int = 0
    witness: Polydisc | None = None
    left: Cyc | None = None
    right: Cyc | None = None


def dist_equal_on_basis(u: Distribution, v: Distribution, depth: int, region: Polydisc) -> BasisComparison:
    """Compare <u, 1_B> and <v, 1_B> for every sub-ball B of ``region`` at radius ``depth``."""
    if (u.p, u.dim) != (v.p, v.dim):
        raise ValueError("distributions live on different spaces")
    checked = 0
    for ball in split(region, depth):
        phi = indicator(ball)
        a, b = pair(u, phi), pair(v, phi)
        checked += 1
        if a != b:
            return BasisComparison(False, checked, ball, a, b)
    return BasisComparison(True, checked)


def custom_from_closed_form(u: Distribution, depth_limit: int | None = None) -> Custom:
    """Wrap a distribution's ball pairing as an opaque custom atom."""
    return Custom(lambda ball: pair(u, indicator(ball)), depth_limit, None, "wrapped")


def total_weights(u: Distribution) -> tuple[SBFunction, dict[PAdicPoint, Cyc], Cyc, list[tuple[Cyc, Custom]]]:
    """Collapse atoms into (density, {point: weight}, diagonal weight, customs)."""
    dens = SBFunction.zero(u.p, u.dim)
    diracs: dict[PAdicPoint, Cyc] = {}
    diag = Cyc.rational(u.p, 0)
    customs = []
    raw = []
    for coef, atom in u.atoms:
        if isinstance(atom, Density):
            raw.extend((coef * c, b) for c, b in atom.f.terms)
        elif isinstance(atom, Dirac):
            w = coef * atom.weight
            diracs[atom.point] = diracs.get(atom.point, Cyc.rational(u.p, 0)) + w
        elif isinstance(atom, Diagonal):
            diag = diag + coef
        else:
            customs.append((coef, atom))
    if raw:
        dens = canonicalize(raw, u.p, u.dim)
    diracs = {a: w for a, w in diracs.items() if not w.is_zero()}
    return dens, diracs, diag, customs

