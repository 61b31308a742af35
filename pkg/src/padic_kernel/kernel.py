"""Kernels of distributions on a product Q_p^{n1} x Q_p^{n2}.

``kernel_apply`` realizes psi -> K psi with <u, phi (x) psi> = <K psi, phi>;
``reconstruct`` goes back from a bilinear pairing oracle to a distribution on
the product by decomposing test functions into product indicators.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .distribution import (
    Custom,
    Density,
    Diagonal,
    Dirac,
    Distribution,
    pair,
    pair_atom,
)
from .geometry import Polydisc, product_split, split
from .scalar import Cyc
from .schwartz import SBFunction, canonicalize, eval_at, indicator, tensor, tensor_decompose

__all__ = [
    "IndependenceReport",
    "Kernel",
    "RoundTripReport",
    "basis_balls",
    "check_defining_identity",
    "converse_roundtrip",
    "independence_check",
    "kernel_apply",
    "kernel_pairing",
    "kernel_roundtrip",
    "oracle_from_kernel",
    "oracle_from_map",
    "random_redecomposition",
    "reconstruct",
    "reconstruction_sum",
    "same_function",
]

PairingOracle = Callable[[SBFunction, SBFunction], Cyc]


@dataclass(frozen=True)
class Kernel:
    u: Distribution
    split: tuple[int, int]

    def __post_init__(self):
        n1, n2 = self.split
        if n1 < 1 or n2 < 1:
            raise ValueError("both factors need positive dimension")
        if n1 + n2 != self.u.dim:
            raise ValueError(f"split {self.split} does not add up to dimension {self.u.dim}")

    @property
    def p(self) -> int:
        return self.u.p

    def __call__(self, psi: SBFunction) -> Distribution:
        return kernel_apply(self, psi)


def _partial_integral(f: SBFunction, psi: SBFunction, n1: int) -> SBFunction:
    # x -> integral f(x, y) psi(y) dy
    raw = []
    for c, ball in f.terms:
        first, second = product_split(ball, n1)
        for d, e in psi.terms:
            if second.alpha >= e.alpha and second.ancestor(e.alpha) == e:
                raw.append((c * d * second.volume(), first))
            elif e.alpha > second.alpha and e.ancestor(second.alpha) == second:
                raw.append((c * d * e.volume(), first))
    return canonicalize(raw, f.p, n1)


def kernel_apply(K: Kernel, psi: SBFunction, closed_form: bool = True) -> Distribution:
    """The distribution K psi on the first factor.

    Built-in atoms are mapped to built-in atoms; custom atoms (or every atom
    when ``closed_form`` is false) become a custom atom C -> <u, 1_C (x) psi>.
    """
    n1, n2 = K.split
    u = K.u
    if psi.p != u.p or psi.dim != n2:
        raise ValueError(f"psi must live on Q_{u.p}^{n2}")
    if not closed_form:
        atom = Custom(lambda c: pair(u, tensor(indicator(c), psi)), _depth_of(u), None, "kernel")
        return Distribution.custom(u.p, n1, atom)
    atoms = []
    for coef, atom in u.atoms:
        if isinstance(atom, Density):
            g = _partial_integral(atom.f, psi, n1)
            if not g.is_zero():
                atoms.append((coef, Density(g)))
        elif isinstance(atom, Dirac):
            a, b = atom.point.split(n1)
            w = atom.weight * eval_at(psi, b)
            if not w.is_zero():
                atoms.append((coef, Dirac(a, w)))
        elif isinstance(atom, Diagonal):
            if n1 != n2:
                raise ValueError("the diagonal kernel needs equal factor dimensions")
            if not psi.is_zero():
                atoms.append((coef, Density(psi)))
        else:
            atoms.append((coef, _custom_slice(atom, psi)))
    return Distribution(u.p, n1, tuple(atoms))


def _custom_slice(atom: Custom, psi: SBFunction) -> Custom:
    def pairing(c: Polydisc) -> Cyc:
        return pair_atom(atom, tensor(indicator(c), psi))

    return Custom(pairing, atom.depth_limit, None, "kernel")


def _depth_of(u: Distribution) -> int | None:
    limits = [a.depth_limit for _, a in u.atoms if isinstance(a, Custom) and a.depth_limit is not None]
    return min(limits) if limits else None


def kernel_pairing(K: Kernel, phi: SBFunction, psi: SBFunction) -> Cyc:
    """<K psi, phi>."""
    return pair(kernel_apply(K, psi), phi)


def oracle_from_kernel(K: Kernel) -> PairingOracle:
    return lambda phi, psi: kernel_pairing(K, phi, psi)


def oracle_from_map(kmap: Callable[[SBFunction], Distribution]) -> PairingOracle:
    """Turn psi -> Distribution into the pairing oracle (phi, psi) -> <kmap(psi), phi>."""
    return lambda phi, psi: pair(kmap(psi), phi)


def reconstruction_sum(oracle: PairingOracle, decomposition) -> Cyc:
    """sum c_i <K 1_{D_i}, 1_{C_i}> over (c_i, C_i, D_i)."""
    total = None
    seen: dict[tuple[Polydisc, Polydisc], Cyc] = {}
    for c, C, D in decomposition:
        if (C, D) not in seen:
            seen[C, D] = oracle(indicator(C), indicator(D))
        value = c * seen[C, D]
        total = value if total is None else total + value
    return total


def reconstruct(oracle: PairingOracle, p: int, n1: int, n2: int, depth: int | None) -> Distribution:
    """The unique distribution u on the product with <u, 1_C (x) 1_D> = oracle(1_C, 1_D).

    Pairing with a general phi goes through its product decomposition.
    """

    def pairing(ball: Polydisc) -> Cyc:
        C, D = product_split(ball, n1)
        return oracle(indicator(C), indicator(D))

    return Distribution.custom(p, n1 + n2, Custom(pairing, depth, None, "reconstructed"))


def basis_balls(p: int, dim: int, alpha_lo: int, alpha_hi: int, region_alpha: int | None = None) -> list[Polydisc]:
    """All balls inside B(0, region_alpha) with radius in [alpha_lo, alpha_hi]."""
    region = Polydisc(p, alpha_lo if region_alpha is None else region_alpha, (Fraction(0),) * dim)
    return [b for a in range(max(alpha_lo, region.alpha), alpha_hi + 1) for b in split(region, a)]


@dataclass
class RoundTripReport:
    ok: bool
    checked: int = 0
    failure: tuple | None = None
    direction: str = ""

    def __str__(self) -> str:
        status = "ok" if self.ok else f"FAILED at {self.failure}"
        return f"{self.direction}: {status} ({self.checked} checks)"


def check_defining_identity(K: Kernel, alpha_lo: int, alpha_hi: int, region_alpha: int | None = None) -> RoundTripReport:
    """<K 1_D, 1_C> == <u, 1_{C x D}> for every pair of basis balls."""
    n1, n2 = K.split
    p = K.p
    cs = basis_balls(p, n1, alpha_lo, alpha_hi, region_alpha)
    ds = basis_balls(p, n2, alpha_lo, alpha_hi, region_alpha)
    checked = 0
    for D in ds:
        kd = kernel_apply(K, indicator(D))
        for C in cs:
            left = pair(kd, indicator(C))
            right = pair(K.u, tensor(indicator(C), indicator(D)))
            checked += 1
            if left != right:
                return RoundTripReport(False, checked, (C, D, left, right), "defining identity")
    return RoundTripReport(True, checked, None, "defining identity")


def kernel_roundtrip(K: Kernel, depth: int, alpha_lo: int = 0, region_alpha: int | None = None) -> RoundTripReport:
    """reconstruct(kernel_apply(K, .)) agrees with u on every basis tensor 1_{C x D}."""
    n1, n2 = K.split
    p = K.p
    rebuilt = reconstruct(oracle_from_kernel(K), p, n1, n2, depth)
    checked = 0
    for ball in basis_balls(p, n1 + n2, alpha_lo, depth, region_alpha):
        phi = indicator(ball)
        left, right = pair(rebuilt, phi), pair(K.u, phi)
        checked += 1
        if left != right:
            return RoundTripReport(False, checked, (ball, left, right), "round trip")
    return RoundTripReport(True, checked, None, "round trip")


def converse_roundtrip(
    kmap: Callable[[SBFunction], Distribution], p: int, n1: int, n2: int, depth: int, alpha_lo: int = 0,
    region_alpha: int | None = None,
) -> RoundTripReport:
    """kernel_apply(reconstruct(kmap)) agrees with kmap on basis inputs."""
    u = reconstruct(oracle_from_map(kmap), p, n1, n2, depth)
    K = Kernel(u, (n1, n2))
    cs = basis_balls(p, n1, alpha_lo, depth, region_alpha)
    checked = 0
    for D in basis_balls(p, n2, alpha_lo, depth, region_alpha):
        psi = indicator(D)
        left_dist, right_dist = kernel_apply(K, psi), kmap(psi)
        for C in cs:
            phi = indicator(C)
            left, right = pair(left_dist, phi), pair(right_dist, phi)
            checked += 1
            if left != right:
                return RoundTripReport(False, checked, (C, D, left, right), "converse")
    return RoundTripReport(True, checked, None, "converse")


# -- independence of the decomposition ---------------------------------------


def random_redecomposition(phi: SBFunction, rng: random.Random, max_extra: int = 2) -> list[tuple[Cyc, Polydisc]]:
    """A random raw decomposition of phi: over-split balls, split coefficients,
    and insert cancelling pairs."""
    p = phi.p
    raw: list[tuple[Cyc, Polydisc]] = []
    for c, b in phi.terms:
        for child in split(b, b.alpha + rng.randint(0, max_extra)):
            if rng.random() < 0.3:
                r = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                raw.append((c - r, child))
                raw.append((Cyc.rational(p, r), child))
            else:
                raw.append((c, child))
    if phi.terms and rng.random() < 0.5:
        _, b = rng.choice(phi.terms)
        extra = rng.choice(split(b, b.alpha + 1))
        t = Fraction(rng.randint(1, 7), rng.randint(1, 3))
        raw.append((Cyc.rational(p, t), extra))
        for child in split(extra, extra.alpha + 1):
            raw.append((Cyc.rational(p, -t), child))
    rng.shuffle(raw)
    return raw


def same_function(p: int, dim: int, raw1, raw2) -> bool:
    """Both raw decompositions sum to the same function (canonical forms are unique)."""
    return canonicalize(raw1, p, dim) == canonicalize(raw2, p, dim)


def _memoized(oracle: PairingOracle) -> PairingOracle:
    cache: dict[tuple[SBFunction, SBFunction], Cyc] = {}

    def wrapped(phi: SBFunction, psi: SBFunction) -> Cyc:
        key = (phi, psi)
        if key not in cache:
            cache[key] = oracle(phi, psi)
        return cache[key]

    return wrapped


@dataclass
class IndependenceReport:
    passed: bool
    trials: int
    seed: int
    values: list[Cyc] = field(default_factory=list)
    offending: tuple | None = None

    def __str__(self) -> str:
        if self.passed:
            return f"independence: ok ({self.trials} decompositions, seed {self.seed}, value {self.values[0] if self.values else 0})"
        return f"independence: FAILED ({self.offending})"


def independence_check(u: Distribution, phi: SBFunction, n1: int, trials: int, seed: int) -> IndependenceReport:
    """Evaluate the reconstruction sum on ``trials`` random decompositions of phi."""
    K = Kernel(u, (n1, u.dim - n1))
    oracle = _memoized(oracle_from_kernel(K))
    rng = random.Random(seed)
    reference = reconstruction_sum(oracle, tensor_decompose(phi, n1)) if phi.terms else Cyc.rational(u.p, 0)
    values = [reference]
    for t in range(trials):
        raw = random_redecomposition(phi, rng)
        if not same_function(phi.p, phi.dim, raw, phi.terms):
            return IndependenceReport(False, t + 1, seed, values, ("decomposition mismatch", raw))
        decomposition = [(c, *product_split(b, n1)) for c, b in raw]
        value = reconstruction_sum(oracle, decomposition) if decomposition else Cyc.rational(u.p, 0)
        values.append(value)
        if value != reference:
            return IndependenceReport(False, t + 1, seed, values, (reference, value, raw))
    return IndependenceReport(True, trials, seed, values)
