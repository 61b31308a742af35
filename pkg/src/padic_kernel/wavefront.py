"""Lambda-microlocal smoothness and wave front sets.

A distribution u is smooth at (x0, xi0) when, near x0 and xi0, the modulated
pairings <u, phi psi(<., lam xi>)> vanish for every lam in Lambda of
sufficiently negative valuation.  For combinations of densities, Dirac
masses and the diagonal this is decided exactly; custom atoms only get a
bounded search, which never produces a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence, Union

from .distribution import DepthLimitExceeded, Distribution, modulated_pair, total_weights
from .geometry import Polydisc, split
from .kernel import Kernel, kernel_apply
from .padic import INF, LambdaGroup, PAdicPoint, ord
from .scalar import Cyc
from .schwartz import SBFunction, fourier, indicator, mul_pointwise, restrict_diagonal, support_radius

__all__ = [
    "InclusionReport",
    "InconclusiveBounded",
    "MicrolocalQuery",
    "NotSmoothWitness",
    "SmoothCertificate",
    "WFDescription",
    "check_wf_inclusion",
    "is_smooth_at",
    "replay_certificate",
    "replay_witness",
    "support",
    "wf_closed_form",
]


@dataclass(frozen=True)
class MicrolocalQuery:
    u: Distribution
    x0: PAdicPoint
    xi0: PAdicPoint
    lam: LambdaGroup
    nbhd_radius: int = 0
    probe_depth: int = 1
    ord_floor: int = -4

    def __post_init__(self):
        if self.xi0.is_zero():
            raise ValueError("the covector xi0 must be nonzero")
        if self.probe_depth < self.nbhd_radius:
            raise ValueError("probe_depth must be >= nbhd_radius")
        for pt in (self.x0, self.xi0):
            if pt.p != self.u.p or pt.dim != self.u.dim:
                raise ValueError(f"point {pt} does not live on Q_{self.u.p}^{self.u.dim}")
        if self.lam.p != self.u.p:
            raise ValueError("Lambda is defined over a different prime")


@dataclass(frozen=True)
class SmoothCertificate:
    """Pairings vanish for every phi in the radius-``probe_depth`` basis of U,
    every xi in Ucheck and every lam in Lambda with ord lam < N.

    ``proved`` marks that the closed-form argument covers all phi supported
    in U (each with its own N), not only the basis.
    """

    U: Polydisc
    Ucheck: Polydisc
    N: int
    proved: bool
    probe_depth: int

    kind = "smooth"


@dataclass(frozen=True)
class NotSmoothWitness:
    phi: SBFunction
    lam: Fraction
    xi: PAdicPoint
    value: Cyc
    U: Polydisc
    Ucheck: Polydisc

    kind = "not_smooth"


@dataclass(frozen=True)
class InconclusiveBounded:
    U: Polydisc
    Ucheck: Polydisc
    probe_depth: int
    ord_floor: int
    probes: int
    skipped: int
    note: str = ""

    kind = "inconclusive"


Verdict = Union[SmoothCertificate, NotSmoothWitness, InconclusiveBounded]


def support(f: SBFunction) -> list[Polydisc]:
    """supp f as the balls of the coarsest form."""
    return f.balls


def _split_halves(pt: PAdicPoint) -> tuple[PAdicPoint, PAdicPoint]:
    return pt.split(pt.dim // 2)


def _on_diagonal(x0: PAdicPoint) -> bool:
    a, b = _split_halves(x0)
    return a == b


def _covector_sum(xi0: PAdicPoint) -> PAdicPoint:
    a, b = _split_halves(xi0)
    return a + b


def _lambda_at_or_below(group: LambdaGroup, bound: int) -> Fraction:
    """A member of Lambda with valuation <= bound."""
    j = bound - (bound % group.ord_modulus)
    return next(group.representatives(j, j + 1))


def _neighbourhood(x0: PAdicPoint, radius: int) -> Polydisc:
    return Polydisc.at(x0, radius)


def _closed_form_n(
    dens: SBFunction, diag: Cyc, phi: SBFunction, xi0: PAdicPoint, x0_on_diag: bool
) -> int | None:
    """Largest N with <smooth part, phi psi(<., lam xi>)> = 0 whenever ord lam < N."""
    bounds = []
    h = mul_pointwise(dens, phi)
    if not h.is_zero():
        bounds.append(support_radius(fourier(h)) - ord(xi0))
    if not diag.is_zero() and x0_on_diag:
        g = restrict_diagonal(phi)
        s = _covector_sum(xi0)
        if not g.is_zero() and not s.is_zero():
            bounds.append(support_radius(fourier(g)) - ord(s))
    return min(bounds) if bounds else None


def is_smooth_at(q: MicrolocalQuery) -> Verdict:
    if q.u.has_custom():
        return _bounded_search(q)
    return _closed_form_verdict(q)


def _closed_form_verdict(q: MicrolocalQuery) -> Verdict:
    u, x0, xi0 = q.u, q.x0, q.xi0
    dens, diracs, diag, _ = total_weights(u)
    even = u.dim % 2 == 0
    has_diag = even and not diag.is_zero()
    on_diag = has_diag and _on_diagonal(x0)
    conormal = on_diag and _covector_sum(xi0).is_zero()

    # shrink U so that it meets no Dirac mass other than x0 and, off the
    # diagonal, misses the diagonal
    r = q.nbhd_radius
    for a in diracs:
        if a != x0:
            r = max(r, int(ord(a - x0)) + 1)
    if has_diag and not on_diag:
        first, second = _split_halves(x0)
        r = max(r, int(ord(first - second)) + 1)
    r_check = max(q.nbhd_radius, int(ord(xi0)) + 1)
    if on_diag and not conormal:
        r_check = max(r_check, int(ord(_covector_sum(xi0))) + 1)
    U = _neighbourhood(x0, r)
    Ucheck = _neighbourhood(xi0, r_check)

    if x0 in diracs or conormal:
        return _closed_form_witness(q, dens, diag if on_diag else Cyc.rational(u.p, 0), U, Ucheck)

    depth = max(q.probe_depth, r, r_check)
    bounds = []
    for ball in split(U, depth):
        n = _closed_form_n(dens, diag, indicator(ball), xi0, on_diag)
        if n is not None:
            bounds.append(n)
    N = min(bounds) if bounds else 0
    return SmoothCertificate(U, Ucheck, N, True, depth)


def _closed_form_witness(q: MicrolocalQuery, dens, diag, U: Polydisc, Ucheck: Polydisc) -> NotSmoothWitness:
    # the singular part (Dirac mass at x0 and/or conormal diagonal) is a
    # nonvanishing phase; push lam below where the smooth part is silent
    for r in (U.alpha, U.alpha + 1):
        phi = indicator(Polydisc.at(q.x0, r))
        n = _closed_form_n(dens, diag, phi, q.xi0, not diag.is_zero())
        bound = q.ord_floor if n is None else min(q.ord_floor, n - 1)
        lam = _lambda_at_or_below(q.lam, bound)
        value = modulated_pair(q.u, phi, q.xi0.scale(lam))
        if not value.is_zero():
            return NotSmoothWitness(phi, lam, q.xi0, value, U, Ucheck)
    raise AssertionError("closed-form singular point produced no witness")


def _bounded_search(q: MicrolocalQuery) -> Verdict:
    U = _neighbourhood(q.x0, q.nbhd_radius)
    Ucheck = _neighbourhood(q.xi0, max(q.nbhd_radius, int(ord(q.xi0)) + 1))
    depth = max(q.probe_depth, Ucheck.alpha)
    lams = sorted(q.lam.representatives(q.ord_floor, 0), key=lambda l: (ord(PAdicPoint(q.u.p, (l,))), l))
    if not lams:
        return InconclusiveBounded(U, Ucheck, depth, q.ord_floor, 0, 0, "no Lambda representatives in range")
    lowest = ord(PAdicPoint(q.u.p, (lams[0],)))
    probes = skipped = 0
    best: NotSmoothWitness | None = None
    best_ord = INF
    for ball in split(U, q.probe_depth):
        phi = indicator(ball)
        for xb in split(Ucheck, depth):
            xi = xb.center_point
            for lam in lams:
                probes += 1
                try:
                    value = modulated_pair(q.u, phi, xi.scale(lam))
                except DepthLimitExceeded:
                    skipped += 1
                    continue
                lam_ord = ord(PAdicPoint(q.u.p, (lam,)))
                if not value.is_zero() and lam_ord < best_ord:
                    best, best_ord = NotSmoothWitness(phi, lam, xi, value, U, Ucheck), lam_ord
    if best is not None and best_ord == lowest:
        return best
    note = "all probes vanish" if best is None else f"nonzero only at ord lambda >= {best_ord}"
    return InconclusiveBounded(U, Ucheck, depth, q.ord_floor, probes, skipped, note)


# -- replay ------------------------------------------------------------------


@dataclass
class Replay:
    ok: bool
    checked: int
    counterexample: tuple | None = None


def replay_certificate(
    u: Distribution, cert: SmoothCertificate, lam: LambdaGroup, ord_floor: int, generic: bool = False
) -> Replay:
    """Exhaustive check of a certificate over its bounded probe set."""
    lams = list(lam.representatives(ord_floor, cert.N))
    checked = 0
    for ball in split(cert.U, cert.probe_depth):
        phi = indicator(ball)
        for xb in split(cert.Ucheck, cert.probe_depth):
            xi = xb.center_point
            for l in lams:
                checked += 1
                value = modulated_pair(u, phi, xi.scale(l), generic=generic)
                if not value.is_zero():
                    return Replay(False, checked, (ball, l, xi, value))
    return Replay(True, checked)


def replay_witness(u: Distribution, w: NotSmoothWitness, lam: LambdaGroup, generic: bool = False) -> Replay:
    """Re-evaluate a witness and check its side conditions."""
    supp_ok = all(b.alpha >= w.U.alpha and b.ancestor(w.U.alpha) == w.U for b in w.phi.balls)
    value = modulated_pair(u, w.phi, w.xi.scale(w.lam), generic=generic)
    ok = supp_ok and lam.contains(w.lam) and w.xi in w.Ucheck and not value.is_zero() and value == w.value
    return Replay(ok, 1, None if ok else (supp_ok, value))


# -- closed-form wave front sets ---------------------------------------------


@dataclass(frozen=True)
class WFDescription:
    """WF(u) = union of {a} x (Q_p^m minus 0) over ``points``, plus the conormal
    bundle of the diagonal when ``conormal`` is set."""

    p: int
    dim: int
    points: tuple[PAdicPoint, ...] = ()
    conormal: bool = False

    def contains(self, x0: PAdicPoint, xi0: PAdicPoint) -> bool:
        if xi0.is_zero():
            return False
        if x0 in self.points:
            return True
        return self.conormal and _on_diagonal(x0) and _covector_sum(xi0).is_zero()

    def is_empty(self) -> bool:
        return not self.points and not self.conormal

    def __str__(self) -> str:
        parts = [f"{{{a}}} x (Q_{self.p}^{self.dim} \\ 0)" for a in self.points]
        if self.conormal:
            parts.append("{((x, x), (xi, -xi)) : xi != 0}")
        return " U ".join(parts) if parts else "empty"


def wf_closed_form(u: Distribution) -> WFDescription:
    if u.has_custom():
        raise ValueError("closed-form wave front sets need density, Dirac or diagonal atoms only")
    _, diracs, diag, _ = total_weights(u)
    points = tuple(sorted(diracs, key=lambda a: a.coords))
    return WFDescription(u.p, u.dim, points, u.dim % 2 == 0 and not diag.is_zero())


# -- kernel inclusion --------------------------------------------------------


@dataclass
class InclusionReport:
    rows: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _y_candidates(u: Distribution, n1: int, psi: SBFunction, y_depth: int) -> list[PAdicPoint]:
    ys: list[PAdicPoint] = []
    for ball in support(psi):
        ys.extend(b.center_point for b in split(ball, max(ball.alpha, y_depth)))
    if not u.has_custom():
        _, diracs, _, _ = total_weights(u)
        for a in diracs:
            y = a.split(n1)[1]
            if any(y in b for b in support(psi)) and y not in ys:
                ys.append(y)
    return ys


def check_wf_inclusion(
    u: Distribution,
    split_dims: tuple[int, int],
    psi: SBFunction,
    grid: Iterable[tuple[PAdicPoint, PAdicPoint]],
    lam: LambdaGroup,
    nbhd_radius: int = 0,
    probe_depth: int = 1,
    ord_floor: int = -4,
    y_depth: int = 1,
) -> InclusionReport:
    """Check WF(K psi) inside {(x, xi) : some y in supp psi has ((x, y), (xi, 0)) in WF(u)}."""
    n1, n2 = split_dims
    K = Kernel(u, split_dims)
    v = kernel_apply(K, psi)
    zero_y = PAdicPoint.zero(u.p, n2)
    ys = _y_candidates(u, n1, psi, y_depth)
    report = InclusionReport()
    for x0, xi0 in grid:
        left = is_smooth_at(MicrolocalQuery(v, x0, xi0, lam, nbhd_radius, probe_depth, ord_floor))
        row = {"x0": x0, "xi0": xi0, "left": left.kind, "y": None, "status": "ok"}
        if isinstance(left, NotSmoothWitness):
            for y in ys:
                q = MicrolocalQuery(u, x0.concat(y), xi0.concat(zero_y), lam, nbhd_radius, probe_depth, ord_floor)
                if isinstance(is_smooth_at(q), NotSmoothWitness):
                    row["y"] = y
                    break
            else:
                row["status"] = "violation"
                report.violations.append(row)
        elif isinstance(left, InconclusiveBounded):
            row["status"] = "inconclusive"
        report.rows.append(row)
    return report


def frequency_grid(p: int, dim: int, ord_lo: int, ord_hi: int) -> list[PAdicPoint]:
    """Nonzero points p^ord_lo * t with t ranging mod p^(ord_hi - ord_lo)."""
    scale = Fraction(p) ** ord_lo
    out = []
    for digits in product(range(p ** (ord_hi - ord_lo)), repeat=dim):
        if any(digits):
            out.append(PAdicPoint(p, tuple(scale * d for d in digits)))
    return out


def point_grid(p: int, dim: int, depth: int) -> list[PAdicPoint]:
    """Representatives of Z_p^dim modulo p^depth."""
    return [PAdicPoint(p, tuple(Fraction(d) for d in digits)) for digits in product(range(p**depth), repeat=dim)]


def lambda_orbit_check(q: MicrolocalQuery, samples: Sequence[Fraction]) -> bool:
    """The verdict kind is unchanged under xi0 -> lam xi0 for lam in Lambda."""
    base = is_smooth_at(q).kind
    for lam in samples:
        if not q.lam.contains(lam):
            raise ValueError(f"{lam} is not in Lambda")
        moved = MicrolocalQuery(q.u, q.x0, q.xi0.scale(lam), q.lam, q.nbhd_radius, q.probe_depth, q.ord_floor)
        if is_smooth_at(moved).kind != base:
            return False
    return True
