import math

import numpy as np
import pytest

from thermoprobe.dephasing import DephasingEvaluator
from thermoprobe.errors import DomainError, InformationFreeError
from thermoprobe.metrology import qfi_temperature
from thermoprobe.spectral import CutoffKind, SpectralDensity
from thermoprobe.thermo import ProbeConfig, absorbed_heat
from thermoprobe.timeopt import (
    ShortTimeCoeffs,
    optimize_rate,
    short_time_coeffs,
    sweep,
)

SD_OHMIC = SpectralDensity(1.0, 1.0, CutoffKind.EXPONENTIAL)


def test_grid_certificate():
    # returned rate dominates a fresh 200-point log scan
    p = ProbeConfig(coupling=1.0)
    ev = DephasingEvaluator(SD_OHMIC, 1.0)
    res = optimize_rate(p, ev)
    for t in np.logspace(-4, 3, 200):
        assert res.rate >= qfi_temperature(p, ev, float(t)).rate * (1.0 - 1e-12)
    assert res.bracket[0] <= res.t_opt <= res.bracket[1]
    assert res.qsnr_at_opt == pytest.approx(res.rate * res.t_opt, rel=1e-14)


def test_local_maximum_property():
    p = ProbeConfig(coupling=2.0)
    for s in (0.5, 3.0):
        ev = DephasingEvaluator(SpectralDensity(s, 1.0, CutoffKind.EXPONENTIAL), 1.0)
        res = optimize_rate(p, ev)
        for shift in (1.0 - 1e-3, 1.0 + 1e-3):
            assert res.rate >= qfi_temperature(p, ev, res.t_opt * shift).rate


def test_inverse_coupling_law():
    ev = DephasingEvaluator(SD_OHMIC, 1.0)
    r20 = optimize_rate(ProbeConfig(coupling=20.0), ev)
    r40 = optimize_rate(ProbeConfig(coupling=40.0), ev)
    assert r40.t_opt * 40.0 == pytest.approx(r20.t_opt * 20.0, rel=0.02)


def test_large_coupling_invariants():
    # t_opt*lam, rate/lam and Q(t_opt) each constant within 5% across lam
    ev = DephasingEvaluator(SD_OHMIC, 1.0)
    results = {lam: optimize_rate(ProbeConfig(coupling=lam), ev) for lam in (20.0, 40.0, 80.0)}
    tls = [r.t_opt * lam for lam, r in results.items()]
    rls = [r.rate / lam for lam, r in results.items()]
    qs = [r.heat_at_opt for r in results.values()]
    for seq in (tls, rls, qs):
        assert max(seq) / min(seq) < 1.05


def test_heat_at_opt_consistent():
    p = ProbeConfig(coupling=1.0)
    ev = DephasingEvaluator(SD_OHMIC, 1.0)
    res = optimize_rate(p, ev)
    assert res.heat_at_opt == pytest.approx(
        absorbed_heat(p, SD_OHMIC, res.t_opt).heat, rel=1e-14
    )


def test_boundary_flag():
    # clamp the bracket below the true optimum: max sits on the edge
    p = ProbeConfig(coupling=1.0)
    ev = DephasingEvaluator(SD_OHMIC, 1.0)
    free = optimize_rate(p, ev)
    clamped = optimize_rate(p, ev, bracket=(1e-4, free.t_opt / 10.0))
    assert clamped.boundary
    assert not free.boundary


def test_flat_objective_raises():
    # overdamped regime: coupling so large the probe dephases before t_lo
    p = ProbeConfig(coupling=1e6)
    ev = DephasingEvaluator(SD_OHMIC, 1.0)
    with pytest.raises(InformationFreeError):
        optimize_rate(p, ev, bracket=(10.0, 1e3))


def test_requires_positive_temperature():
    with pytest.raises(DomainError):
        optimize_rate(ProbeConfig(coupling=1.0), DephasingEvaluator(SD_OHMIC, 0.0))


def test_heat_coefficient_ohmic():
    c = short_time_coeffs(ProbeConfig(coupling=1.0), SD_OHMIC, 1.0)
    assert c.q2 == pytest.approx(2.0, rel=1e-14)  # s(s+1)Gamma(s) at s=1


def test_heat_series_matches_closed_form():
    for s in (0.5, 1.0, 3.0):
        sd = SpectralDensity(s, 1.0, CutoffKind.EXPONENTIAL)
        p = ProbeConfig(coupling=1.0)
        c = short_time_coeffs(p, sd, 1.0)
        t = 1e-3
        series = c.q2 * t * t + c.q4 * t**4
        full = absorbed_heat(p, sd, t).heat
        assert full / series == pytest.approx(1.0, abs=1e-4)


def test_qfi_series_matches_full():
    for s, lam in [(0.5, 1.0), (1.0, 1.0), (1.0, 40.0), (3.0, 2.0)]:
        sd = SpectralDensity(s, 1.0, CutoffKind.EXPONENTIAL)
        p = ProbeConfig(coupling=lam)
        ev = DephasingEvaluator(sd, 1.0)
        c = short_time_coeffs(p, sd, 1.0)
        t = 1e-3
        series = c.f2 * t * t + c.f4 * t**4
        full = qfi_temperature(p, ev, t).qfi
        assert full / series == pytest.approx(1.0, abs=1e-4)


def test_coefficients_against_finite_differences():
    # 4th-order extraction: at tau = 1e-3 the quadratic/quartic pair
    # reproduces the full functions, so fit both coefficients numerically
    sd = SpectralDensity(1.5, 1.0, CutoffKind.EXPONENTIAL)
    p = ProbeConfig(coupling=1.0)
    ev = DephasingEvaluator(sd, 1.0)
    c = short_time_coeffs(p, sd, 1.0)
    t1, t2 = 1e-3, 2e-3
    f1 = qfi_temperature(p, ev, t1).qfi
    f2 = qfi_temperature(p, ev, t2).qfi
    # solve [t1^2 t1^4; t2^2 t2^4] [a, b] = [f1, f2]
    mat = np.array([[t1**2, t1**4], [t2**2, t2**4]])
    a, b = np.linalg.solve(mat, [f1, f2])
    assert a == pytest.approx(c.f2, rel=1e-3)
    assert b == pytest.approx(c.f4, rel=1e-3)
    q1 = absorbed_heat(p, sd, t1).heat
    q2 = absorbed_heat(p, sd, t2).heat
    a, b = np.linalg.solve(mat, [q1, q2])
    assert a == pytest.approx(c.q2, rel=1e-3)
    assert b == pytest.approx(c.q4, rel=1e-3)


def test_t_opt_approx_tracks_inverse_coupling():
    # the quartic-truncation optimum scales exactly as 1/lam and sits a fixed
    # ~13% below the true optimum (the truncation solves 3*expm1(x) = 2x e^x
    # with x = 2/3 instead of x ~ 0.874); the ratio is a stable constant
    ev = DephasingEvaluator(SD_OHMIC, 1.0)
    for lam in (20.0, 40.0, 80.0):
        p = ProbeConfig(coupling=lam)
        res = optimize_rate(p, ev)
        c = short_time_coeffs(p, SD_OHMIC, 1.0)
        assert c.f4 < 0.0 and c.t_opt_approx is not None
        assert c.t_opt_approx / res.t_opt == pytest.approx(0.8733, abs=0.005)
        # the *rate* at the approximate time is within 2% of optimal
        assert qfi_temperature(p, ev, c.t_opt_approx).rate >= 0.98 * res.rate


def test_t_opt_approx_undefined_when_quartic_positive():
    # weak coupling, high temperature: f4 > 0, no finite short-time optimum
    found = None
    for T in (10.0, 30.0, 100.0):
        c = short_time_coeffs(ProbeConfig(coupling=0.01), SD_OHMIC, T)
        if c.f4 >= 0.0:
            found = c
            break
    if found is not None:
        assert found.t_opt_approx is None


def test_short_time_requires_exponential():
    with pytest.raises(DomainError):
        short_time_coeffs(
            ProbeConfig(coupling=1.0), SpectralDensity(1.0, 1.0, CutoffKind.HARD), 1.0
        )


def test_sweep_deterministic_and_ordered():
    sds = [SpectralDensity(s, 1.0, CutoffKind.EXPONENTIAL) for s in (0.5, 3.0)]
    probes = [ProbeConfig(coupling=c) for c in (1.0, 20.0)]
    rows = sweep(sds, [1.0], probes)
    rows2 = sweep(sds, [1.0], probes)
    assert rows == rows2  # bitwise deterministic
    assert [(r.s, r.coupling) for r in rows] == [
        (0.5, 1.0),
        (0.5, 20.0),
        (3.0, 1.0),
        (3.0, 20.0),
    ]
    assert all(r.error == "" for r in rows)


def test_sweep_error_markers_keep_going():
    # s inside the closed-form pole band is fine (quadrature), but a bogus
    # bracket errors per-row without aborting the sweep
    sds = [SpectralDensity(1.0, 1.0, CutoffKind.EXPONENTIAL)]
    rows = sweep(sds, [1.0], [ProbeConfig(coupling=1e6), ProbeConfig(coupling=1.0)], bracket=(10.0, 1e3))
    assert rows[0].error != "" and math.isnan(rows[0].t_opt)
    assert rows[1].error == "" and rows[1].rate > 0.0
