"""Polydiscs B(a, alpha) = a + p^alpha Z_p^m and their ultrametric combinatorics."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable

from .padic import PAdicPoint, reduce_mod, reduce_scalar, valuation

__all__ = [
    "Polydisc",
    "Relation",
    "ball_product",
    "compare",
    "contains_point",
    "disjointify",
    "min_valuation",
    "product_split",
    "split",
]


class Relation(enum.Enum):
    DISJOINT = "disjoint"
    EQUAL = "equal"
    FIRST_INSIDE_SECOND = "first_inside_second"
    SECOND_INSIDE_FIRST = "second_inside_first"


@dataclass(frozen=True)
class Polydisc:
    """The ball a + p^alpha Z_p^m, with ``center`` stored canonically mod p^alpha.

    Larger alpha means a smaller ball.  Two polydiscs are equal as sets iff
    they compare equal as objects.
    """

    p: int
    alpha: int
    center: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "center", tuple(reduce_scalar(Fraction(c), self.p, self.alpha) for c in self.center)
        )
        if not self.center:
            raise ValueError("a polydisc needs dimension >= 1")

    @classmethod
    def _trusted(cls, p: int, alpha: int, center: tuple[Fraction, ...]) -> Polydisc:
        # caller guarantees the center is already the digit truncation at alpha
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "alpha", alpha)
        object.__setattr__(obj, "center", center)
        return obj

    def __hash__(self) -> int:
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.p, self.alpha, self.center))
            object.__setattr__(self, "_hash", h)
            return h

    @classmethod
    def at(cls, point: PAdicPoint, alpha: int) -> Polydisc:
        return cls(point.p, alpha, point.coords)

    @classmethod
    def of(cls, p: int, alpha: int, *center) -> Polydisc:
        return cls(p, alpha, tuple(Fraction(c) for c in center))

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def center_point(self) -> PAdicPoint:
        return PAdicPoint(self.p, self.center)

    def volume(self) -> Fraction:
        return Fraction(self.p) ** (-self.alpha * self.dim)

    def sort_key(self):
        return (self.alpha, self.center)

    def __lt__(self, other: Polydisc) -> bool:
        return self.sort_key() < other.sort_key()

    def parent(self) -> Polydisc:
        return Polydisc(self.p, self.alpha - 1, self.center)

    def ancestor(self, alpha: int) -> Polydisc:
        if alpha > self.alpha:
            raise ValueError("an ancestor must have a smaller radius exponent")
        return Polydisc(self.p, alpha, self.center)

    def children(self) -> list[Polydisc]:
        return split(self, self.alpha + 1)

    def translate(self, shift: PAdicPoint) -> Polydisc:
        return Polydisc(self.p, self.alpha, tuple(c + s for c, s in zip(self.center, shift.coords)))

    def reflect(self) -> Polydisc:
        return Polydisc(self.p, self.alpha, tuple(-c for c in self.center))

    def dilate(self, lam: Fraction) -> Polydisc:
        """The ball {x : lam * x in self}."""
        lam = Fraction(lam)
        v = valuation(lam, self.p)
        return Polydisc(self.p, self.alpha - v, tuple(c / lam for c in self.center))

    def __contains__(self, x: PAdicPoint) -> bool:
        return contains_point(self, x)

    def __str__(self) -> str:
        return f"B(({', '.join(str(c) for c in self.center)}), {self.alpha})"


def _check_pair(a: Polydisc, b: Polydisc):
    if a.p != b.p:
        raise ValueError(f"mismatched primes {a.p} and {b.p}")
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def contains_point(ball: Polydisc, x: PAdicPoint) -> bool:
    if x.p != ball.p:
        raise ValueError(f"mismatched primes {ball.p} and {x.p}")
    if x.dim != ball.dim:
        raise ValueError(f"dimension mismatch: {ball.dim} vs {x.dim}")
    return reduce_mod(x, ball.alpha).coords == ball.center


def _inside(small: Polydisc, big: Polydisc) -> bool:
    return small.alpha >= big.alpha and tuple(
        reduce_scalar(c, big.p, big.alpha) for c in small.center
    ) == big.center


def compare(b1: Polydisc, b2: Polydisc) -> Relation:
    _check_pair(b1, b2)
    if b1 == b2:
        return Relation.EQUAL
    if b1.alpha >= b2.alpha and _inside(b1, b2):
        return Relation.FIRST_INSIDE_SECOND
    if b2.alpha >= b1.alpha and _inside(b2, b1):
        return Relation.SECOND_INSIDE_FIRST
    return Relation.DISJOINT


def split(ball: Polydisc, gamma: int) -> list[Polydisc]:
    """The p^{m(gamma - alpha)} sub-balls of radius gamma, in lexicographic digit order."""
    if gamma < ball.alpha:
        raise ValueError(f"cannot split B(., {ball.alpha}) at coarser radius {gamma}")
    step = Fraction(ball.p) ** ball.alpha
    count = ball.p ** (gamma - ball.alpha)
    return [
        Polydisc._trusted(ball.p, gamma, tuple(c + step * d for c, d in zip(ball.center, digits)))
        for digits in product(range(count), repeat=ball.dim)
    ]


def disjointify(balls: Iterable[Polydisc]) -> list[Polydisc]:
    """Drop every ball contained in another one; the union is unchanged."""
    kept: list[Polydisc] = []
    for b in sorted(set(balls)):
        # sorted by alpha, so any container of b is already in ``kept``
        if not any(_inside(b, k) for k in kept):
            kept.append(b)
    return sorted(kept)


def ball_product(c: Polydisc, d: Polydisc) -> Polydisc:
    """C x D for balls of equal radius."""
    if c.p != d.p:
        raise ValueError(f"mismatched primes {c.p} and {d.p}")
    if c.alpha != d.alpha:
        raise ValueError("product of polydiscs needs a common radius")
    return Polydisc._trusted(c.p, c.alpha, c.center + d.center)


def product_split(ball: Polydisc, m: int) -> tuple[Polydisc, Polydisc]:
    if not 0 < m < ball.dim:
        raise ValueError(f"bad split position {m} for dimension {ball.dim}")
    return (
        Polydisc(ball.p, ball.alpha, ball.center[:m]),
        Polydisc(ball.p, ball.alpha, ball.center[m:]),
    )


def min_valuation(ball: Polydisc) -> int:
    """Smallest coordinate valuation attained on the ball."""
    return min(min(valuation(c, ball.p), ball.alpha) for c in ball.center)
