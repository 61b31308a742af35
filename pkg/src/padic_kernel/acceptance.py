"""The ten acceptance criteria as runnable checks.

Each check returns a :class:`CriterionResult`; ``verify-all`` and
``tests/test_acceptance.py`` both go through :func:`run`.  Randomness is drawn
from ``random.Random(seed)`` so every run is reproducible from the reported seed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from . import oracles
from .distribution import Distribution, density_is_zero, dist_equal_on_basis, modulated_pair
from .geometry import Polydisc, split
from .kernel import (
    Kernel,
    check_defining_identity,
    converse_roundtrip,
    independence_check,
    kernel_apply,
    kernel_roundtrip,
)
from .padic import LambdaGroup, PAdicPoint
from .sampling import default_seed, random_nonzero_sb, random_point, random_raw_terms, random_sb, telescoping_zero
from .schwartz import (
    canonicalize,
    convolve,
    eval_at,
    fourier,
    indicator,
    integrate,
    local_constancy_radius,
    reflect,
    scale,
    support_radius,
)
from .wavefront import (
    MicrolocalQuery,
    NotSmoothWitness,
    SmoothCertificate,
    check_wf_inclusion,
    is_smooth_at,
    replay_certificate,
    replay_witness,
    wf_closed_form,
)


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float
    limit: float

    @property
    def in_time(self) -> bool:
        return self.seconds < self.limit

    @property
    def passed(self) -> bool:
        return self.ok and self.in_time

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        timing = f"{self.seconds:.2f}s / {self.limit:.0f}s"
        if not self.in_time:
            timing += " (over time limit)"
        return f"[{status}] {self.number:2d}. {self.name}: {self.detail} [{timing}]"


class _Fail(Exception):
    pass


def _require(cond: bool, message: str):
    if not cond:
        raise _Fail(message)


# -- 1 -----------------------------------------------------------------------


def _decomposition(seed: int, depth: int) -> str:
    rng = random.Random(seed)
    lists = 0
    points = 0
    for p, m in product((2, 3), (1, 2)):
        lo = -1
        pts = oracles.grid(p, m, lo, max(depth, 3))
        for _ in range(100):
            raw = random_raw_terms(rng, p, m)
            f = canonicalize(raw, p, m)
            _require(canonicalize(f.terms, p, m) == f, f"not idempotent: p={p} m={m} raw={raw}")
            _require(oracles.is_pairwise_disjoint(f.balls), f"overlapping balls: {f}")
            _require(all(b.alpha >= lo for b in f.balls), f"ball outside region: {f}")
            bad = oracles.first_mismatch(raw, f.terms, pts, p, lo)
            if bad is not None:
                raise _Fail(f"raw sum and canonical form differ at {oracles.point_of(p, lo, pts[bad])} for {raw}")
            lists += 1
            points += len(pts)
    return f"{lists} raw lists, {points} point evaluations"


# -- 2 -----------------------------------------------------------------------


def _haar(seed: int, depth: int) -> str:
    checked = 0
    for p, m in product((2, 3), (1, 2)):
        _require(integrate(indicator(Polydisc(p, 0, (0,) * m))) == 1, "vol(Z_p^m) != 1")
        for alpha in range(-1, 3):
            for center in product(range(p), repeat=m):
                ball = Polydisc(p, alpha, tuple(Fraction(c) for c in center))
                expected = Fraction(p) ** (-alpha * m)
                counted = oracles.partition_volume(ball, max(alpha, 2))
                got = integrate(indicator(ball))
                _require(counted == expected, f"partition count {counted} != p^(-alpha m) for {ball}")
                _require(got == expected, f"integrate gives {got} for {ball}")
                checked += 1
    return f"{checked} balls"


# -- 3 -----------------------------------------------------------------------


def _fourier(seed: int, depth: int) -> str:
    rng = random.Random(seed)
    freqs = 0
    for p in (2, 3):
        for _ in range(50):
            f = random_sb(rng, p, 1, cyclotomic=True)
            if f.is_zero():
                continue
            ahi = local_constancy_radius(f)
            sigma = support_radius(f)
            _require(ahi <= 2, f"alpha+ = {ahi} > 2")
            gamma = max(ahi, 3)
            pts = oracles.grid(p, 1, sigma, gamma)
            vals = oracles.raw_sum_on_grid(f.terms, pts, p, sigma)
            F = fourier(f)
            # F is constant on radius 1 - sigma; enumerate xi = p^-2 s for s mod p^(3 - sigma)
            for s in range(p ** (3 - sigma)):
                xi = PAdicPoint(p, (Fraction(s, p**2),))
                want = oracles.brute_fourier(vals, pts, p, sigma, gamma, (s,), -2)
                got = eval_at(F, xi)
                _require(got == want, f"f={f}: fourier at {xi} is {got}, character sum {want}")
                freqs += 1
            _require(fourier(F) == scale(Fraction(1, p), reflect(f)), f"double transform fails for {f}")
    return f"{freqs} frequency evaluations, double transform on every sample"


# -- 4 -----------------------------------------------------------------------


def _convolution(seed: int, depth: int) -> str:
    d = 3
    pairs = 0
    for p in (2, 3):
        balls = [b for a in range(0, 3) for b in split(Polydisc(p, 0, (0,)), a)]
        values = {b: oracles.indicator_values(b, d) for b in balls}
        for b1, b2 in product(balls, balls):
            h = convolve(indicator(b1), indicator(b2))
            for x in range(p**d):
                want = oracles.brute_convolution_at(values[b1], values[b2], p, 1, d, (x,))
                got = eval_at(h, PAdicPoint(p, (Fraction(x),)))
                _require(got == want, f"{b1} * {b2} at {x}: closed form {got}, residue sum {want}")
            pairs += 1
    rng = random.Random(seed)
    family = 0
    for p, m in ((2, 1), (3, 1), (2, 2), (3, 2)):
        for _ in range(10):
            f = random_nonzero_sb(rng, p, m)
            ahi = local_constancy_radius(f)
            for alpha in range(ahi, ahi + 3):
                mollifier = indicator(Polydisc(p, alpha, (0,) * m), Fraction(p) ** (alpha * m))
                _require(convolve(f, mollifier) == f, f"identity fails at alpha={alpha} >= alpha+ for {f}")
            below = indicator(Polydisc(p, ahi - 1, (0,) * m), Fraction(p) ** ((ahi - 1) * m))
            _require(convolve(f, below) != f, f"identity holds below alpha+ for {f}")
            family += 1
    return f"{pairs} ball pairs at depth {d}; mollifier identity on {family} functions"


# -- 5 -----------------------------------------------------------------------


def _three_kernels(rng: random.Random, p: int) -> list[tuple[str, Distribution]]:
    f = random_nonzero_sb(rng, p, 2, cyclotomic=True)
    ab = random_point(rng, p, 2, -1, 2)
    return [("T_f", Distribution.density(f)), (f"delta_{ab}", Distribution.dirac(ab)), ("u_diag", Distribution.diagonal(p, 1))]


def _kernel_existence(seed: int, depth: int) -> str:
    rng = random.Random(seed)
    checks = 0
    for p in (2, 3):
        for name, u in _three_kernels(rng, p):
            rep = check_defining_identity(Kernel(u, (1, 1)), -1, 2, -1)
            _require(rep.ok, f"p={p} {name}: {rep}")
            checks += rep.checked
    return f"{checks} basis pairs (alpha in [-1, 2] inside B(0, -1))"


# -- 6 -----------------------------------------------------------------------


def _kernel_converse(seed: int, depth: int) -> str:
    rng = random.Random(seed)
    d = depth or 2
    checks = 0
    for p in (2, 3):
        for name, u in _three_kernels(rng, p):
            K = Kernel(u, (1, 1))
            rep = kernel_roundtrip(K, d)
            _require(rep.ok, f"p={p} {name}: {rep}")
            conv = converse_roundtrip(lambda psi, K=K: kernel_apply(K, psi), p, 1, 1, d)
            _require(conv.ok, f"p={p} {name}: {conv}")
            checks += rep.checked + conv.checked
    trials = 0
    p = 3
    for name, u in _three_kernels(rng, p):
        phi = random_nonzero_sb(rng, p, 2, max_terms=3, alpha_lo=0)
        rep = independence_check(u, phi, 1, 200, seed)
        _require(rep.passed, f"{name}: {rep}")
        trials += rep.trials
    return f"{checks} round-trip checks to depth {d}; {trials} re-decompositions (seed {seed})"


# -- 7 -----------------------------------------------------------------------


def _diagonal(seed: int, depth: int) -> str:
    rng = random.Random(seed)
    d = max(depth, 3)
    checks = generic = 0
    for p in (2, 3):
        K = Kernel(Distribution.diagonal(p, 1), (1, 1))
        region = Polydisc(p, -1, (Fraction(0),))
        for i in range(20):
            psi = random_sb(rng, p, 1, cyclotomic=True)
            target = Distribution.density(psi)
            # the lazy slice <u, 1_C (x) psi> cross-checks the closed form on a subset
            for closed in (True, False) if i < 5 else (True,):
                cmp = dist_equal_on_basis(kernel_apply(K, psi, closed_form=closed), target, d, region)
                _require(cmp.equal, f"p={p} psi={psi} closed_form={closed}: {cmp}")
                checks += cmp.checked
                generic += not closed
    return f"20 psi per prime, {generic} also via the lazy slice; {checks} basis comparisons at depth {d}"


# -- 8 -----------------------------------------------------------------------


def _injectivity(seed: int, depth: int) -> str:
    rng = random.Random(seed)
    zeros = 0
    for i in range(100):
        p = (2, 3)[i % 2]
        m = 1 + (i // 2) % 2
        kind = i % 3
        if kind == 0:
            raw = telescoping_zero(rng, p, m)
        elif kind == 1:
            raw = random_raw_terms(rng, p, m, max_terms=3) + telescoping_zero(rng, p, m)
        else:
            raw = random_raw_terms(rng, p, m, max_terms=4)
        rng.shuffle(raw)
        expected = canonicalize(raw, p, m).is_zero()
        got = density_is_zero(raw)
        _require(got == expected, f"density_is_zero={got} but canonical emptiness={expected} for {raw}")
        zeros += expected
    return f"100 densities ({zeros} zero)"


# -- 9 -----------------------------------------------------------------------


def _wave_fronts(seed: int, depth: int) -> str:
    rng = random.Random(seed)
    floor = -4
    certs = replays = witnesses = diag_points = 0
    for p in (2, 3):
        full = LambdaGroup.full(p)
        # WF(T_f) is empty
        for _ in range(3):
            u = Distribution.density(random_nonzero_sb(rng, p, 1, cyclotomic=True))
            for x0 in (PAdicPoint(p, (Fraction(x),)) for x in range(p)):
                for xi0 in (PAdicPoint(p, (Fraction(1, p),)), PAdicPoint(p, (Fraction(1),)), PAdicPoint(p, (Fraction(p),))):
                    v = is_smooth_at(MicrolocalQuery(u, x0, xi0, full, 0, 1, floor))
                    _require(isinstance(v, SmoothCertificate), f"density not smooth at {x0}, {xi0}: {v}")
                    r = replay_certificate(u, v, full, floor)
                    _require(r.ok, f"certificate replay failed for {u} at {x0}, {xi0}: {r}")
                    certs += 1
                    replays += r.checked
        # delta witnesses have unit modulus at every probed lambda
        a = random_point(rng, p, 1, -1, 2)
        u = Distribution.dirac(a)
        for xi0 in (PAdicPoint(p, (Fraction(1),)), PAdicPoint(p, (Fraction(1, p),))):
            v = is_smooth_at(MicrolocalQuery(u, a, xi0, full, 0, 1, floor))
            _require(isinstance(v, NotSmoothWitness), f"delta_{a} smooth at {xi0}")
            _require(replay_witness(u, v, full).ok, f"witness replay failed: {v}")
            for lam in full.representatives(floor, 0):
                z = modulated_pair(u, v.phi, v.xi.scale(lam))
                _require(z * z.conj() == 1, f"|<delta, phi psi(lam xi)>| != 1 at lam={lam}: {z}")
                witnesses += 1
        # diagonal: verdicts match the conormal closed form on >= p^4 points
        u = Distribution.diagonal(p, 1)
        closed = wf_closed_form(u)
        count = 0
        for xs in product(range(p), repeat=2):
            x0 = PAdicPoint(p, tuple(Fraction(x) for x in xs))
            for ks in product(range(p), repeat=2):
                if not any(ks):
                    continue
                for sc in (Fraction(1), Fraction(1, p)):
                    xi0 = PAdicPoint(p, tuple(sc * k for k in ks))
                    v = is_smooth_at(MicrolocalQuery(u, x0, xi0, full, 0, 1, floor))
                    expect = closed.contains(x0, xi0)
                    _require(isinstance(v, NotSmoothWitness) == expect, f"u_diag at {x0}, {xi0}: {v.kind}, closed form {expect}")
                    if expect:
                        r = replay_witness(u, v, full, generic=(p == 2))
                    else:
                        r = replay_certificate(u, v, full, floor)
                    _require(r.ok, f"u_diag replay failed at {x0}, {xi0}: {r}")
                    count += 1
        _require(count >= p**4, f"diagonal grid has {count} < p^4 points")
        diag_points += count
    return (f"{certs} density certificates ({replays} replayed pairings), "
            f"{witnesses} unit-modulus delta values, {diag_points} diagonal grid points")


# -- 10 ----------------------------------------------------------------------


def inclusion_grid(p: int, extra: list[PAdicPoint]) -> list[tuple[PAdicPoint, PAdicPoint]]:
    xs = [PAdicPoint(p, (Fraction(x),)) for x in range(p**2)] + [x for x in extra if x.dim == 1]
    xis = [PAdicPoint(p, (Fraction(1),)), PAdicPoint(p, (Fraction(1, p),)), PAdicPoint(p, (Fraction(p),))]
    xis += [PAdicPoint(p, (Fraction(p - 1, p**2),)), PAdicPoint(p, (Fraction(2),)), PAdicPoint(p, (Fraction(1, p**2),))]
    grid = []
    for x in xs:
        for xi in xis:
            if (x, xi) not in grid:
                grid.append((x, xi))
    return grid


def _inclusion(seed: int, depth: int) -> str:
    rng = random.Random(seed)
    p = 3
    rows = 0
    singular = 0
    for lam in (LambdaGroup.full(p), LambdaGroup.power_class(p, 2)):
        for name, u in _three_kernels(rng, p):
            a, b = (None, None)
            if name.startswith("delta"):
                a, b = u.atoms[0][1].point.split(1)
            for i in range(10):
                psi = random_nonzero_sb(rng, p, 1, cyclotomic=True)
                if b is not None and i % 2 == 0:
                    psi = psi + indicator(Polydisc(p, 2, b.coords))
                grid = inclusion_grid(p, [a] if a is not None else [])
                _require(len(grid) >= 50, f"grid of {len(grid)} points")
                rep = check_wf_inclusion(u, (1, 1), psi, grid, lam)
                _require(rep.ok, f"{name}, psi={psi}, Lambda={lam}: violations {rep.violations[:3]}")
                _require(all(r["status"] != "inconclusive" for r in rep.rows), "inconclusive verdict on a closed-form atom")
                rows += len(rep.rows)
                singular += sum(r["left"] == "not_smooth" for r in rep.rows)
    return f"{rows} grid points, {singular} singular, 0 violations"


# -- registry ----------------------------------------------------------------

CRITERIA: list[tuple[int, str, float, Callable[[int, int], str]]] = [
    (1, "decomposition", 10.0, _decomposition),
    (2, "haar volumes", 1.0, _haar),
    (3, "fourier oracle", 30.0, _fourier),
    (4, "convolution", 30.0, _convolution),
    (5, "kernel existence", 60.0, _kernel_existence),
    (6, "kernel converse and uniqueness", 60.0, _kernel_converse),
    (7, "diagonal example", 10.0, _diagonal),
    (8, "injectivity", 5.0, _injectivity),
    (9, "wave fronts", 120.0, _wave_fronts),
    (10, "wave front inclusion", 120.0, _inclusion),
]


def run_one(number: int, seed: int | None = None, depth: int = 0) -> CriterionResult:
    seed = default_seed() if seed is None else seed
    for n, name, limit, fn in CRITERIA:
        if n == number:
            start = time.perf_counter()
            try:
                detail, ok = fn(seed, depth), True
            except _Fail as exc:
                detail, ok = str(exc), False
            return CriterionResult(n, name, ok, detail, time.perf_counter() - start, limit)
    raise ValueError(f"no acceptance criterion {number}")


def run(seed: int | None = None, depth: int = 0, only: list[int] | None = None) -> list[CriterionResult]:
    numbers = only or [n for n, *_ in CRITERIA]
    return [run_one(n, seed, depth) for n in numbers]
