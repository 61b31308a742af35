from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_kernel.distribution import Custom, Distribution, custom_from_closed_form, modulated_pair
from padic_kernel.geometry import Polydisc
from padic_kernel.io import load
from padic_kernel.padic import LambdaGroup, PAdicPoint
from padic_kernel.schwartz import SBFunction, eval_at, indicator, scale
from padic_kernel.wavefront import (
    InconclusiveBounded,
    MicrolocalQuery,
    NotSmoothWitness,
    SmoothCertificate,
    check_wf_inclusion,
    frequency_grid,
    is_smooth_at,
    lambda_orbit_check,
    point_grid,
    replay_certificate,
    replay_witness,
    support,
    wf_closed_form,
)

from strategies import points, sb_functions, small_primes

DATA = Path(__file__).resolve().parent.parent / "data"


def pt(p, *coords):
    return PAdicPoint.of(p, *coords)


def one(p, alpha=0, *center):
    return indicator(Polydisc.of(p, alpha, *(center or (0,))))


def test_density_is_smooth_everywhere():
    p = 3
    f = one(p, 1, 1) - scale(Fraction(1, 3), one(p, -1, 0))
    u = Distribution.density(f)
    for x0 in (pt(p, 0), pt(p, 1), pt(p, Fraction(1, 3))):
        for xi0 in (pt(p, 1), pt(p, Fraction(1, 9))):
            v = is_smooth_at(MicrolocalQuery(u, x0, xi0, LambdaGroup.full(p), 1, 2))
            assert isinstance(v, SmoothCertificate) and v.proved
            assert replay_certificate(u, v, LambdaGroup.full(p), -4).ok


def test_dirac_witness_and_certificate():
    p = 3
    u = Distribution.dirac(pt(p, 0))
    v = is_smooth_at(MicrolocalQuery(u, pt(p, 0), pt(p, 1), LambdaGroup.full(p), 1, 2))
    assert isinstance(v, NotSmoothWitness)
    assert eval_phi_at_zero(v.phi) == 1
    # |phi(0) psi(0)| = 1 at every lambda
    for lam in LambdaGroup.full(p).representatives(-4, 0):
        assert modulated_pair(u, v.phi, v.xi.scale(lam)).to_complex() == pytest.approx(1)
    assert replay_witness(u, v, LambdaGroup.full(p)).ok
    away = is_smooth_at(MicrolocalQuery(u, pt(p, 1), pt(p, 1), LambdaGroup.full(p), 1, 1))
    assert isinstance(away, SmoothCertificate)
    assert replay_certificate(u, away, LambdaGroup.full(p), -4).ok


def eval_phi_at_zero(phi: SBFunction):
    return eval_at(phi, PAdicPoint.zero(phi.p, phi.dim))


def test_diagonal_conormal_rule():
    p = 3
    u = Distribution.diagonal(p, 1)
    full = LambdaGroup.full(p)
    on = is_smooth_at(MicrolocalQuery(u, pt(p, 1, 1), pt(p, 1, -1), full, 1, 1))
    assert isinstance(on, NotSmoothWitness) and replay_witness(u, on, full).ok
    off_freq = is_smooth_at(MicrolocalQuery(u, pt(p, 1, 1), pt(p, 1, 1), full, 1, 1))
    assert isinstance(off_freq, SmoothCertificate) and replay_certificate(u, off_freq, full, -4).ok
    off_point = is_smooth_at(MicrolocalQuery(u, pt(p, 0, 1), pt(p, 1, -1), full, 1, 1))
    assert isinstance(off_point, SmoothCertificate) and replay_certificate(u, off_point, full, -4).ok


def test_wf_closed_form_examples():
    p = 3
    assert wf_closed_form(Distribution.density(one(p))).is_empty()
    wf = wf_closed_form(Distribution.dirac(pt(p, 2)))
    assert wf.contains(pt(p, 2), pt(p, Fraction(1, 3)))
    assert not wf.contains(pt(p, 2), pt(p, 0))
    assert not wf.contains(pt(p, 1), pt(p, 1))
    diag = wf_closed_form(Distribution.diagonal(p, 1))
    assert diag.contains(pt(p, 1, 1), pt(p, 2, -2))
    assert not diag.contains(pt(p, 1, 1), pt(p, 2, 2))
    assert not diag.contains(pt(p, 0, 1), pt(p, 2, -2))
    with pytest.raises(ValueError):
        wf_closed_form(Distribution.custom(p, 1, custom_from_closed_form(Distribution.dirac(pt(p, 0)), 3)))


def test_closed_form_matches_verdicts_on_grid():
    p = 3
    full = LambdaGroup.full(p)
    for u in (Distribution.dirac(pt(p, 1)), Distribution.density(one(p, 1, 2)), Distribution.dirac(pt(p, 0)) + Distribution.density(one(p))):
        wf = wf_closed_form(u)
        for x0 in point_grid(p, 1, 1):
            for xi0 in frequency_grid(p, 1, -1, 1):
                v = is_smooth_at(MicrolocalQuery(u, x0, xi0, full, 1, 1))
                assert isinstance(v, NotSmoothWitness) == wf.contains(x0, xi0)


def test_support_examples():
    assert support(SBFunction.zero(2, 1)) == []
    assert support(one(3)) == [Polydisc.of(3, 0, 0)]
    f = one(2, 1, 0) - one(2, 1, 1)
    assert support(f) == [Polydisc.of(2, 1, 0), Polydisc.of(2, 1, 1)]


def test_query_validation():
    p = 3
    u = Distribution.dirac(pt(p, 0))
    with pytest.raises(ValueError):
        MicrolocalQuery(u, pt(p, 0), pt(p, 0), LambdaGroup.full(p))
    with pytest.raises(ValueError):
        MicrolocalQuery(u, pt(p, 0), pt(p, 1), LambdaGroup.full(p), 2, 1)
    with pytest.raises(ValueError):
        MicrolocalQuery(u, pt(p, 0), pt(p, 1), LambdaGroup.full(2))


def test_lambda_monotonicity():
    p = 3
    u = Distribution.dirac(pt(p, 0))
    small, big = LambdaGroup.power_class(p, 2), LambdaGroup.full(p)
    assert small.is_subgroup_of(big)
    w = is_smooth_at(MicrolocalQuery(u, pt(p, 0), pt(p, 1), small, 1, 1))
    assert isinstance(w, NotSmoothWitness)
    # the same witness is valid for the larger group
    assert replay_witness(u, w, big).ok
    assert isinstance(is_smooth_at(MicrolocalQuery(u, pt(p, 0), pt(p, 1), big, 1, 1)), NotSmoothWitness)


def test_custom_atoms_get_bounded_verdicts():
    p = 3
    full = LambdaGroup.full(p)
    wrapped = Distribution.custom(p, 1, custom_from_closed_form(Distribution.dirac(pt(p, 0)), 3))
    v = is_smooth_at(MicrolocalQuery(wrapped, pt(p, 0), pt(p, 1), full, 1, 1, -2))
    assert isinstance(v, NotSmoothWitness) and replay_witness(wrapped, v, full).ok
    smooth = Distribution.custom(p, 1, custom_from_closed_form(Distribution.density(one(p)), 3))
    v = is_smooth_at(MicrolocalQuery(smooth, pt(p, 0), pt(p, 1), full, 1, 1, -2))
    # bounded search never issues a certificate
    assert isinstance(v, InconclusiveBounded) and v.probes > 0
    table = Custom.from_table(p, [(Polydisc.of(p, 2, 0), 1)], 2)
    v = is_smooth_at(MicrolocalQuery(Distribution.custom(p, 1, table), pt(p, 0), pt(p, 1), full, 1, 2, -2))
    # probes finer than the table's depth are skipped, not guessed
    assert isinstance(v, InconclusiveBounded) and v.skipped > 0


def test_inclusion_examples():
    p = 3
    full = LambdaGroup.full(p)
    grid = [(x, xi) for x in point_grid(p, 1, 1) for xi in frequency_grid(p, 1, -1, 1)]
    psi = one(p, 1, 1) + one(p, 0)
    cases = [
        Distribution.dirac(pt(p, 2, 1)),
        Distribution.density(indicator(Polydisc.of(p, 0, 0, 0))),
        Distribution.diagonal(p, 1),
    ]
    for u in cases:
        report = check_wf_inclusion(u, (1, 1), psi, grid, full, 1, 1)
        assert report.ok and len(report.rows) == len(grid)
    delta_rows = check_wf_inclusion(cases[0], (1, 1), psi, grid, full, 1, 1).rows
    hits = [r for r in delta_rows if r["left"] == "not_smooth"]
    assert hits and all(r["x0"] == pt(p, 2) and r["y"] == pt(p, 1) for r in hits)


@pytest.mark.parametrize("kernel_file", ["delta_kernel_p3.json", "diagonal_kernel_p3.json"])
def test_inclusion_on_shipped_grids(kernel_file):
    kernel = load(DATA / kernel_file).payload
    psi = load(DATA / "psi_p3.json").payload
    grid = load(DATA / "grid1_p3.json").payload
    report = check_wf_inclusion(kernel.u, kernel.split, psi, grid.points, grid.lam, 1, 1)
    assert report.ok and len(report.rows) == 54


def test_shipped_queries():
    q = load(DATA / "query_delta_p3.json").payload
    assert isinstance(is_smooth_at(q), NotSmoothWitness)
    q = load(DATA / "query_diag_p3.json").payload
    v = is_smooth_at(q)
    assert isinstance(v, NotSmoothWitness) and replay_witness(q.u, v, q.lam).ok


# -- properties ----------------------------------------------------------------


@settings(max_examples=25)
@given(st.data())
def test_verdicts_replay(data):
    p = data.draw(small_primes)
    kind = data.draw(st.sampled_from(["density", "dirac"]))
    if kind == "density":
        u = Distribution.density(data.draw(sb_functions(p, 1, max_terms=2, alpha_lo=0)))
    else:
        u = Distribution.dirac(data.draw(points(p, 1, 0, 2)))
    x0 = data.draw(points(p, 1, 0, 2))
    xi0 = data.draw(points(p, 1, -1, 1).filter(lambda x: not x.is_zero()))
    lam = data.draw(st.sampled_from([LambdaGroup.full(p), LambdaGroup.power_class(p, 2)]))
    v = is_smooth_at(MicrolocalQuery(u, x0, xi0, lam, 1, 2))
    if isinstance(v, NotSmoothWitness):
        assert replay_witness(u, v, lam).ok
        assert replay_witness(u, v, lam, generic=True).ok
    else:
        assert isinstance(v, SmoothCertificate)
        assert replay_certificate(u, v, lam, -3).ok


@settings(max_examples=25)
@given(st.data())
def test_verdict_invariant_under_lambda_scaling(data):
    p = data.draw(st.just(3))
    kind = data.draw(st.sampled_from(["density", "dirac", "diagonal"]))
    dim = 2 if kind == "diagonal" else 1
    if kind == "density":
        u = Distribution.density(data.draw(sb_functions(p, 1, max_terms=2, alpha_lo=0)))
    elif kind == "dirac":
        u = Distribution.dirac(data.draw(points(p, 1, 0, 2)))
    else:
        u = Distribution.diagonal(p, 1)
    lam = data.draw(st.sampled_from([LambdaGroup.full(p), LambdaGroup.power_class(p, 2)]))
    x0 = data.draw(points(p, dim, 0, 1))
    xi0 = data.draw(points(p, dim, -1, 1).filter(lambda x: not x.is_zero()))
    samples = list(lam.representatives(-2, 3))[:6]
    assert lambda_orbit_check(MicrolocalQuery(u, x0, xi0, lam, 1, 1), samples)
