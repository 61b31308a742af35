"""Exact arithmetic in the p-power cyclotomic tower Q(zeta_{p^inf}).

An element is stored in the power basis of Q(zeta_{p^k}) at the smallest
level k that contains it.  Sums, products and character values stay exact.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from numbers import Rational

__all__ = [
    "Cyc",
    "as_fraction",
    "cyc",
    "cyc_add",
    "cyc_is_zero",
    "cyc_mul",
    "is_prime",
    "p_power_exponent",
    "psi",
    "zeta",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings to ``Fraction``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def p_power_exponent(n: int, p: int) -> int | None:
    """Return s with n == p**s, or None if n is not a power of p."""
    if n <= 0:
        return None
    s = 0
    while n % p == 0:
        n //= p
        s += 1
    return s if n == 1 else None


def _phi(p: int, k: int) -> int:
    return 1 if k == 0 else (p - 1) * p ** (k - 1)


def _reduce_exponent(p: int, k: int, e: int) -> list[tuple[int, int]]:
    """Express zeta_{p^k}^e in the power basis as [(index, sign), ...]."""
    if k == 0:
        return [(0, 1)]
    e %= p**k
    deg = _phi(p, k)
    if e < deg:
        return [(e, 1)]
    # x^{(p-1)p^{k-1} + r} = -sum_{i<p-1} x^{i p^{k-1} + r}  (mod Phi_{p^k})
    step = p ** (k - 1)
    r = e - deg
    return [(i * step + r, -1) for i in range(p - 1)]


def _normalize(p: int, level: int, sparse: dict[int, Fraction]) -> tuple[int, tuple[Fraction, ...]]:
    sparse = {j: c for j, c in sparse.items() if c}
    # descend while the support only uses p-th powers of the generator
    while level >= 1 and all(j % p == 0 for j in sparse):
        sparse = {j // p: c for j, c in sparse.items()}
        level -= 1
    coeffs = [Fraction(0)] * _phi(p, level)
    for j, c in sparse.items():
        coeffs[j] = c
    return level, tuple(coeffs)


class Cyc:
    """An element of Q(zeta_{p^k}) for some k, in canonical minimal-level form.

    ``coeffs[j]`` is the coefficient of ``zeta_{p^level}**j``.  Instances are
    immutable and hashable; equality is syntactic because the form is canonical.
    """

    __slots__ = ("p", "level", "coeffs", "_hash")

    def __init__(self, p: int, level: int = 0, coeffs=(0,)):
        if level < 0:
            raise ValueError("level must be non-negative")
        coeffs = tuple(as_fraction(c) for c in coeffs)
        if len(coeffs) != _phi(p, level):
            raise ValueError(f"level {level} at p={p} needs {_phi(p, level)} coefficients, got {len(coeffs)}")
        level, coeffs = _normalize(p, level, dict(enumerate(coeffs)))
        self.p = p
        self.level = level
        self.coeffs = coeffs
        self._hash = None

    @classmethod
    def _raw(cls, p: int, level: int, sparse: dict[int, Fraction]) -> Cyc:
        obj = cls.__new__(cls)
        obj.p = p
        obj.level, obj.coeffs = _normalize(p, level, sparse)
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, p: int, x) -> Cyc:
        return cls._raw(p, 0, {0: as_fraction(x)})

    # -- structure ---------------------------------------------------------

    def sparse(self, level: int | None = None) -> dict[int, Fraction]:
        """Nonzero coefficients, lifted to ``level`` (default: own level)."""
        if level is None:
            level = self.level
        if level < self.level:
            raise ValueError("cannot lower the level of an element")
        mult = self.p ** (level - self.level)
        return {j * mult: c for j, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return self.level == 0

    def to_fraction(self) -> Fraction:
        if self.level != 0:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        n = self.p**self.level
        return sum(
            (float(c) * cmath.exp(2j * cmath.pi * j / n) for j, c in enumerate(self.coeffs) if c),
            0j,
        )

    def conj(self) -> Cyc:
        """Complex conjugate: zeta^j -> zeta^{-j}."""
        out: dict[int, Fraction] = {}
        for j, c in self.sparse().items():
            for idx, sgn in _reduce_exponent(self.p, self.level, -j):
                out[idx] = out.get(idx, Fraction(0)) + sgn * c
        return Cyc._raw(self.p, self.level, out)

    def norm_squared(self) -> Cyc:
        return self * self.conj()

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> Cyc:
        if isinstance(other, Cyc):
            if other.p != self.p:
                raise ValueError(f"mismatched primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyc.rational(self.p, other)
        return NotImplemented

    def __add__(self, other) -> Cyc:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        level = max(self.level, other.level)
        out = self.sparse(level)
        for j, c in other.sparse(level).items():
            out[j] = out.get(j, Fraction(0)) + c
        return Cyc._raw(self.p, level, out)

    __radd__ = __add__

    def __neg__(self) -> Cyc:
        return Cyc._raw(self.p, self.level, {j: -c for j, c in self.sparse().items()})

    def __sub__(self, other) -> Cyc:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Cyc:
        return (-self) + other

    def __mul__(self, other) -> Cyc:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if other.level == 0:
            c = other.coeffs[0]
            return Cyc._raw(p, self.level, {j: a * c for j, a in self.sparse().items()})
        if self.level == 0:
            return other * self
        level = max(self.level, other.level)
        a, b = self.sparse(level), other.sparse(level)
        out: dict[int, Fraction] = {}
        for i, x in a.items():
            for j, y in b.items():
                for idx, sgn in _reduce_exponent(p, level, i + j):
                    out[idx] = out.get(idx, Fraction(0)) + (x * y if sgn > 0 else -(x * y))
        return Cyc._raw(p, level, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Cyc:
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = Cyc.rational(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.level == 0 and self.coeffs[0] == other
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.p == other.p and self.level == other.level and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.level, self.coeffs))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"Cyc(p={self.p}, level={self.level}, coeffs={[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        if self.level == 0:
            return str(self.coeffs[0])
        n = self.p**self.level
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                mono = str(abs(c))
            else:
                root = f"z{n}" if j == 1 else f"z{n}^{j}"
                mono = root if abs(c) == 1 else f"{abs(c)}*{root}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, mono))
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, mono in parts[1:]:
            text += f" {sign} {mono}"
        return text


def cyc(p: int, x) -> Cyc:
    """Coerce a rational or a Cyc to a Cyc over ``p``."""
    if isinstance(x, Cyc):
        if x.p != p:
            raise ValueError(f"mismatched primes {p} and {x.p}")
        return x
    return Cyc.rational(p, x)


def zeta(p: int, k: int, j: int = 1) -> Cyc:
    """The root of unity exp(2*pi*i*j / p^k) in canonical form."""
    out: dict[int, Fraction] = {}
    for idx, sgn in _reduce_exponent(p, k, j):
        out[idx] = out.get(idx, Fraction(0)) + sgn
    return Cyc._raw(p, k, out)


def cyc_add(a: Cyc, b: Cyc) -> Cyc:
    return a + b


def cyc_mul(a: Cyc, b: Cyc) -> Cyc:
    return a * b


def cyc_is_zero(a: Cyc) -> bool:
    return a.is_zero()


def psi_exponent(p: int, x) -> tuple[int, int]:
    """Return (k, e) with psi(p, x) = zeta_{p^k}^e, 0 <= e < p^k."""
    x = as_fraction(x)
    s = p_power_exponent(x.denominator, p)
    if s is None:
        raise ValueError(f"non p-power denominator: {x} at p={p}")
    k = s + 1
    return k, x.numerator % p**k


def psi(p: int, x) -> Cyc:
    """Additive character of Q_p, trivial on pZ_p and nontrivial on Z_p.

    Fixed convention: psi(x) = exp(2*pi*i*{x/p}_p) with {.}_p the p-adic
    fractional part, so psi(1) = zeta_p.
    """
    k, e = psi_exponent(p, x)
    return zeta(p, k, e)
