"""Seeded random objects for property runs."""

from __future__ import annotations

import os
import random
from fractions import Fraction

from .geometry import Polydisc
from .padic import PAdicPoint
from .scalar import Cyc, zeta
from .schwartz import SBFunction, canonicalize

DEFAULT_SEED = 20240601


def default_seed() -> int:
    """Seed for property runs; the PDK_SEED environment variable overrides it."""
    return int(os.environ.get("PDK_SEED", DEFAULT_SEED))


def random_rational(rng: random.Random, lo: int = -4, hi: int = 4) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(lo, hi)
    return Fraction(num, rng.randint(1, 3))


def random_scalar(rng: random.Random, p: int, cyclotomic: bool = False) -> Cyc:
    c = Cyc.rational(p, random_rational(rng))
    if cyclotomic and rng.random() < 0.5:
        c = c * zeta(p, rng.randint(1, 2), rng.randint(1, p**2))
    return c


def random_ball(rng: random.Random, p: int, dim: int, alpha_lo: int = -1, alpha_hi: int = 2, center_depth: int = 2) -> Polydisc:
    """Radius in [alpha_lo, alpha_hi], center an integer mod p^center_depth."""
    alpha = rng.randint(alpha_lo, alpha_hi)
    center = tuple(Fraction(rng.randrange(p**center_depth)) for _ in range(dim))
    return Polydisc(p, alpha, center)


def random_raw_terms(
    rng: random.Random, p: int, dim: int, max_terms: int = 6, alpha_lo: int = -1, alpha_hi: int = 2,
    cyclotomic: bool = False,
) -> list[tuple[Cyc, Polydisc]]:
    n = rng.randint(0, max_terms)
    return [(random_scalar(rng, p, cyclotomic), random_ball(rng, p, dim, alpha_lo, alpha_hi)) for _ in range(n)]


def random_sb(rng: random.Random, p: int, dim: int, max_terms: int = 4, alpha_lo: int = -1, alpha_hi: int = 2,
              cyclotomic: bool = False) -> SBFunction:
    return canonicalize(random_raw_terms(rng, p, dim, max_terms, alpha_lo, alpha_hi, cyclotomic), p, dim)


def random_nonzero_sb(rng: random.Random, p: int, dim: int, **kwargs) -> SBFunction:
    while True:
        f = random_sb(rng, p, dim, **kwargs)
        if not f.is_zero():
            return f


def random_point(rng: random.Random, p: int, dim: int, lo: int = 0, hi: int = 2) -> PAdicPoint:
    """Coordinates n / p^(-lo) with n mod p^(hi - lo)."""
    scale = Fraction(p) ** lo
    return PAdicPoint(p, tuple(scale * rng.randrange(p ** (hi - lo)) for _ in range(dim)))


def telescoping_zero(rng: random.Random, p: int, dim: int) -> list[tuple[Cyc, Polydisc]]:
    """A raw term list summing to the zero function: c 1_B minus c times its children."""
    ball = random_ball(rng, p, dim, -1, 1)
    c = Cyc.rational(p, random_rational(rng))
    raw = [(c, ball)] + [(-c, child) for child in ball.children()]
    rng.shuffle(raw)
    return raw
