"""Points of Q_p^m with coordinates in Z[1/p], valuations and the groups Lambda."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .scalar import as_fraction, is_prime, p_power_exponent

__all__ = [
    "INF",
    "LambdaGroup",
    "PAdicPoint",
    "ac",
    "check_coordinate",
    "inner",
    "lambda_contains",
    "ord",
    "reduce_mod",
    "reduce_scalar",
    "valuation",
]

INF = float("inf")


def check_coordinate(p: int, x) -> Fraction:
    x = as_fraction(x)
    if p_power_exponent(x.denominator, p) is None:
        raise ValueError(f"non p-power denominator: {x} at p={p}")
    return x


def valuation(x, p: int) -> int | float:
    """p-adic valuation of a rational; ``INF`` for zero."""
    x = as_fraction(x)
    if x == 0:
        return INF
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def reduce_scalar(x: Fraction, p: int, alpha: int) -> Fraction:
    """Digit truncation of x below p^alpha (x must lie in Z[1/p])."""
    s = p_power_exponent(x.denominator, p)
    if s is None:
        raise ValueError(f"non p-power denominator: {x} at p={p}")
    if alpha + s <= 0:
        return Fraction(0)
    return Fraction(x.numerator % p ** (alpha + s), p**s)


@dataclass(frozen=True)
class PAdicPoint:
    p: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("a point needs at least one coordinate")
        object.__setattr__(self, "coords", tuple(check_coordinate(self.p, c) for c in self.coords))

    @classmethod
    def of(cls, p: int, *coords) -> PAdicPoint:
        return cls(p, tuple(coords))

    @classmethod
    def zero(cls, p: int, dim: int) -> PAdicPoint:
        return cls(p, (Fraction(0),) * dim)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def _check(self, other: PAdicPoint):
        if other.p != self.p:
            raise ValueError(f"mismatched primes {self.p} and {other.p}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: PAdicPoint) -> PAdicPoint:
        self._check(other)
        return PAdicPoint(self.p, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: PAdicPoint) -> PAdicPoint:
        self._check(other)
        return PAdicPoint(self.p, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> PAdicPoint:
        return PAdicPoint(self.p, tuple(-a for a in self.coords))

    def scale(self, lam) -> PAdicPoint:
        lam = check_coordinate(self.p, lam)
        return PAdicPoint(self.p, tuple(lam * a for a in self.coords))

    def concat(self, other: PAdicPoint) -> PAdicPoint:
        if other.p != self.p:
            raise ValueError(f"mismatched primes {self.p} and {other.p}")
        return PAdicPoint(self.p, self.coords + other.coords)

    def split(self, m: int) -> tuple[PAdicPoint, PAdicPoint]:
        if not 0 < m < self.dim:
            raise ValueError(f"bad split position {m} for dimension {self.dim}")
        return PAdicPoint(self.p, self.coords[:m]), PAdicPoint(self.p, self.coords[m:])

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def ord(x: PAdicPoint) -> int | float:
    """Minimum coordinate valuation; ``INF`` for the zero vector."""
    return min(valuation(c, x.p) for c in x.coords)


def ac(x, k: int, p: int) -> int:
    """Angular component: x * p^{-ord x} modulo p^k."""
    x = as_fraction(x)
    if x == 0:
        raise ValueError("ac is undefined at 0")
    v = valuation(x, p)
    unit = x / Fraction(p) ** v
    mod = p**k
    return unit.numerator * pow(unit.denominator, -1, mod) % mod if mod > 1 else 0


def inner(x: PAdicPoint, y: PAdicPoint) -> Fraction:
    x._check(y)
    return sum((a * b for a, b in zip(x.coords, y.coords)), Fraction(0))


def reduce_mod(x: PAdicPoint, alpha: int) -> PAdicPoint:
    """Canonical representative of x modulo p^alpha Z_p^m (digit truncation)."""
    return PAdicPoint(x.p, tuple(reduce_scalar(c, x.p, alpha) for c in x.coords))


@dataclass(frozen=True)
class LambdaGroup:
    """{lam : ord lam = 0 mod ord_modulus, ac_{ac_depth}(lam) in unit_residues}.

    The full group Q_p^x is ``LambdaGroup(p, 1, 0, {0})``; residues are taken
    modulo p^ac_depth, so at depth 0 the only residue is 0.
    """

    p: int
    ord_modulus: int = 1
    ac_depth: int = 0
    unit_residues: frozenset[int] = field(default=frozenset({0}))

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.ord_modulus < 1 or self.ac_depth < 0:
            raise ValueError("ord_modulus must be >= 1 and ac_depth >= 0")
        mod = self.p**self.ac_depth
        res = frozenset(r % mod for r in self.unit_residues)
        object.__setattr__(self, "unit_residues", res)
        if 1 % mod not in res:
            raise ValueError("unit_residues must contain 1")
        if mod > 1 and any(r % self.p == 0 for r in res):
            raise ValueError("unit residues must be coprime to p")
        if any(a * b % mod not in res for a in res for b in res):
            raise ValueError("unit_residues is not closed under multiplication")

    @classmethod
    def full(cls, p: int) -> LambdaGroup:
        return cls(p, 1, 0, frozenset({0}))

    @classmethod
    def power_class(cls, p: int, n: int) -> LambdaGroup:
        """ord x = 0 mod n and ac x = 1."""
        return cls(p, n, 1, frozenset({1}))

    def contains(self, lam) -> bool:
        lam = as_fraction(lam)
        if lam == 0:
            raise ValueError("0 is not in Q_p^x")
        if valuation(lam, self.p) % self.ord_modulus:
            return False
        return ac(lam, self.ac_depth, self.p) in self.unit_residues

    def is_subgroup_of(self, other: LambdaGroup) -> bool:
        """Exact inclusion test on the (ord, residue) description."""
        if self.ord_modulus % other.ord_modulus:
            return False
        depth = max(self.ac_depth, other.ac_depth)
        mod, omod = self.p**depth, self.p**other.ac_depth
        smod = self.p**self.ac_depth
        for u in range(mod):
            if mod > 1 and u % self.p == 0:
                continue
            if u % smod in self.unit_residues and u % omod not in other.unit_residues:
                return False
        return True

    def representatives(self, ord_lo: int, ord_hi: int) -> Iterator[Fraction]:
        """Elements p^j * u with ord_lo <= j < ord_hi, j = 0 mod ord_modulus.

        u runs over the integer lifts of the unit residues in [1, p^ac_depth).
        Ordered by increasing valuation, then by residue.
        """
        lifts = sorted(r if r else 1 for r in self.unit_residues)
        for j in range(ord_lo, ord_hi):
            if j % self.ord_modulus:
                continue
            for u in lifts:
                yield Fraction(self.p) ** j * u


def lambda_contains(group: LambdaGroup, lam) -> bool:
    return group.contains(lam)


def points_mod(p: int, dim: int, lo: int, hi: int, base: Sequence[Fraction] | None = None) -> Iterator[PAdicPoint]:
    """All points base + sum_{lo <= i < hi} d_i p^i with digits d_i in F_p^dim."""
    from itertools import product

    base = tuple(base) if base is not None else (Fraction(0),) * dim
    scale = Fraction(p) ** lo
    count = p ** max(hi - lo, 0)
    for digits in product(range(count), repeat=dim):
        yield PAdicPoint(p, tuple(b + scale * d for b, d in zip(base, digits)))
