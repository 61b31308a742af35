"""Brute-force reference computations over finite residue grids.

Nothing here uses canonical forms or closed-form transforms.  Points of
p^lo Z_p^m are enumerated modulo p^hi as integer vectors t with x = p^lo t;
a ball B(a, alpha) with lo <= alpha <= hi is then the congruence
t = a p^{-lo} (mod p^{alpha - lo}).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable

import numpy as np

from .geometry import Polydisc
from .padic import PAdicPoint
from .scalar import Cyc, zeta


def grid(p: int, dim: int, lo: int, hi: int) -> np.ndarray:
    """Integer vectors t in [0, p^(hi-lo))^dim, one row per residue class."""
    n = p ** (hi - lo)
    axes = np.meshgrid(*([np.arange(n, dtype=np.int64)] * dim), indexing="ij")
    return np.stack([a.ravel() for a in axes], axis=1)


def _scaled_center(ball: Polydisc, lo: int) -> list[int]:
    out = []
    for c in ball.center:
        v = c * Fraction(ball.p) ** (-lo)
        if v.denominator != 1:
            raise ValueError(f"{ball} is not inside p^{lo} Z_p^m")
        out.append(int(v))
    return out


def ball_mask(pts: np.ndarray, p: int, lo: int, ball: Polydisc) -> np.ndarray:
    if ball.alpha <= lo:
        return np.ones(len(pts), dtype=bool)
    mod = p ** (ball.alpha - lo)
    center = np.array(_scaled_center(ball, lo), dtype=np.int64) % mod
    return np.all(pts % mod == center, axis=1)


def grouped_sums(raw, pts: np.ndarray, p: int, lo: int) -> tuple[list[Cyc], np.ndarray]:
    """Distinct values of sum c_i 1_{B_i} on the grid, and each point's index into them."""
    raw = list(raw)
    if not raw:
        return [Cyc.rational(p, 0)], np.zeros(len(pts), dtype=np.int64)
    masks = np.stack([ball_mask(pts, p, lo, b) for _, b in raw], axis=1)
    patterns, inverse = np.unique(masks, axis=0, return_inverse=True)
    sums = []
    for row in patterns:
        total = Cyc.rational(p, 0)
        for (c, _), hit in zip(raw, row):
            if hit:
                total = total + c
        sums.append(total)
    return sums, np.asarray(inverse).ravel()


def raw_sum_on_grid(raw, pts: np.ndarray, p: int, lo: int) -> list[Cyc]:
    """sum c_i 1_{B_i}(x) at every grid point."""
    sums, index = grouped_sums(raw, pts, p, lo)
    return [sums[i] for i in index]


def first_mismatch(raw1, raw2, pts: np.ndarray, p: int, lo: int) -> int | None:
    """Index of a grid point where the two raw sums differ, or None."""
    s1, i1 = grouped_sums(raw1, pts, p, lo)
    s2, i2 = grouped_sums(raw2, pts, p, lo)
    pairs, where = np.unique(np.stack([i1, i2], axis=1), axis=0, return_index=True)
    for (a, b), k in zip(pairs, where):
        if s1[a] != s2[b]:
            return int(k)
    return None


def point_of(p: int, lo: int, row) -> PAdicPoint:
    scale = Fraction(p) ** lo
    return PAdicPoint(p, tuple(scale * int(t) for t in row))


def partition_volume(ball: Polydisc, depth: int) -> Fraction:
    """Haar volume by counting radius-``depth`` cells of B inside p^lo Z_p^m."""
    lo = min(ball.alpha, 0)
    pts = grid(ball.p, ball.dim, lo, depth)
    count = int(ball_mask(pts, ball.p, lo, ball).sum())
    return count * Fraction(ball.p) ** (-depth * ball.dim)


def character_sum(values: Iterable[tuple[int, Cyc]], p: int, level: int) -> Cyc:
    """sum over (e, c) of c * zeta_{p^level}^e, grouping by exponent first."""
    grouped: dict[int, Cyc] = {}
    for e, c in values:
        e %= p**level
        grouped[e] = grouped[e] + c if e in grouped else c
    total = Cyc.rational(p, 0)
    for e, c in grouped.items():
        if not c.is_zero():
            total = total + c * zeta(p, level, e)
    return total


def brute_fourier(values_on_grid: list[Cyc], pts: np.ndarray, p: int, lo: int, hi: int, xi_row, xi_lo: int) -> Cyc:
    """sum_x vol(cell) f(x) psi(<x, xi>) with x = p^lo t over the grid, xi = p^xi_lo s.

    Valid when f is constant on radius-``hi`` cells, vanishes off p^lo Z_p^m
    and ord xi >= 1 - hi.  With psi(y) = exp(2 pi i {y/p}), <x, xi>/p has
    denominator dividing p^{1 - lo - xi_lo}.
    """
    dim = pts.shape[1]
    level = max(1 - lo - xi_lo, 0)
    s = np.array([int(v) for v in xi_row], dtype=object)
    cell = Fraction(p) ** (-hi * dim)
    terms = []
    for row, val in zip(pts, values_on_grid):
        if val.is_zero():
            continue
        e = int(sum(int(t) * int(si) for t, si in zip(row, s)))
        terms.append((e, val * cell))
    if level == 0:
        total = Cyc.rational(p, 0)
        for _, c in terms:
            total = total + c
        return total
    return character_sum(terms, p, level)


def brute_convolution_at(f_vals: dict, g_vals: dict, p: int, dim: int, depth: int, x: tuple[int, ...]) -> Fraction:
    """(f * g)(x) = sum_y p^{-depth dim} f(y) g(x - y) over y in Z_p^dim mod p^depth.

    ``f_vals``/``g_vals`` map residue tuples mod p^depth to values; both
    functions must be supported in Z_p^dim and constant on radius-depth cells.
    """
    mod = p**depth
    total = Fraction(0)
    for y in product(range(mod), repeat=dim):
        a = f_vals.get(y, 0)
        if not a:
            continue
        b = g_vals.get(tuple((xi - yi) % mod for xi, yi in zip(x, y)), 0)
        if b:
            total += a * b
    return total * Fraction(p) ** (-depth * dim)


def indicator_values(ball: Polydisc, depth: int) -> dict[tuple[int, ...], int]:
    """{t mod p^depth : t in ball} for a ball inside Z_p^m."""
    mod = ball.p ** ball.alpha
    center = [int(c) for c in ball.center]
    return {
        t: 1
        for t in product(range(ball.p**depth), repeat=ball.dim)
        if all((ti - ci) % mod == 0 for ti, ci in zip(t, center))
    }


def is_pairwise_disjoint(balls: list[Polydisc]) -> bool:
    """No ball equals or contains another, via the set of strict ancestors."""
    keys = set(balls)
    if len(keys) != len(balls):
        return False
    if not balls:
        return True
    lo = min(b.alpha for b in balls)
    return not any(b.ancestor(level) in keys for b in balls for level in range(lo, b.alpha))

