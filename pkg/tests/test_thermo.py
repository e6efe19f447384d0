import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from thermoprobe.errors import DomainError
from thermoprobe.spectral import CutoffKind, SpectralDensity
from thermoprobe.thermo import (
    HeatMethod,
    ProbeConfig,
    absorbed_heat,
    q_asymptotic,
    q_kernel,
)


def sd(s=1.0, omega_c=1.0, cutoff=CutoffKind.EXPONENTIAL):
    return SpectralDensity(s, omega_c, cutoff)


def test_zero_time():
    for cutoff in CutoffKind:
        assert q_kernel(sd(cutoff=cutoff), 0.0) == 0.0


def test_ohmic_exponential_unit_time():
    # s=1, t*w_c=1: kernel = w_c * (1 - cos(arctan 1)/sqrt(2)) = w_c / 2
    assert q_kernel(sd(), 1.0) == pytest.approx(0.5, rel=1e-12)
    assert q_kernel(sd(omega_c=3.0), 1.0 / 3.0) == pytest.approx(1.5, rel=1e-12)


def test_ohmic_exponential_long_time():
    assert q_kernel(sd(), 1e6) == pytest.approx(1.0, rel=1e-6)


def test_closed_vs_quadrature_all_cutoffs():
    for cutoff in CutoffKind:
        for s in (0.5, 1.0, 1.5, 3.0):
            for t in np.logspace(-3, 2, 7):
                c = q_kernel(sd(s=s, cutoff=cutoff), t, HeatMethod.CLOSED_FORM)
                q = q_kernel(sd(s=s, cutoff=cutoff), t, HeatMethod.QUADRATURE)
                assert abs(c - q) <= 1e-8 * abs(q), (cutoff, s, t)


def test_kernel_nonnegative():
    rng = np.random.default_rng(2)
    for _ in range(60):
        d = sd(s=float(rng.uniform(0.3, 4.0)), cutoff=rng.choice(list(CutoffKind)))
        assert q_kernel(d, float(rng.uniform(0.0, 200.0))) >= 0.0


def test_absorbed_heat_scaling():
    # Q = 2 * (2 j lam)^2 * kernel
    t = 1.0
    kernel = q_kernel(sd(), t)
    res = absorbed_heat(ProbeConfig(coupling=1.0), sd(), t)
    assert res.kernel == kernel
    assert res.heat == pytest.approx(2.0 * kernel, rel=1e-14)
    assert res.heat == pytest.approx(1.0, rel=1e-12)  # = w_c for these inputs
    res_j = absorbed_heat(ProbeConfig(coupling=1.0, spin=1.5), sd(), t)
    assert res_j.heat == pytest.approx(2.0 * 9.0 * kernel, rel=1e-14)


def test_heat_independent_of_theta():
    t = 0.7
    a = absorbed_heat(ProbeConfig(coupling=2.0, theta=0.0), sd(s=0.5), t)
    b = absorbed_heat(ProbeConfig(coupling=2.0, theta=math.pi / 2), sd(s=0.5), t)
    assert a.heat == b.heat  # bit-identical: theta never enters


def test_asymptotics():
    assert q_asymptotic(sd(s=1.0)) == pytest.approx(1.0, rel=1e-14)
    assert q_asymptotic(sd(s=2.0, cutoff=CutoffKind.HARD)) == pytest.approx(0.5)
    assert q_asymptotic(sd(s=1.0, omega_c=2.0)) == pytest.approx(2.0)
    # direct-integral oracle for the hard case
    got = q_kernel(sd(s=2.0, cutoff=CutoffKind.HARD), 1e4, HeatMethod.QUADRATURE)
    assert got == pytest.approx(0.5, rel=1e-3)


def test_kernel_approaches_asymptote():
    # the residual scales as cos(s pi/2) / t~^s, so s = 1, 3 converge fast
    for cutoff in (CutoffKind.EXPONENTIAL, CutoffKind.GAUSSIAN):
        for s in (1.0, 3.0):
            d = sd(s=s, cutoff=cutoff)
            lim = q_asymptotic(d)
            assert q_kernel(d, 1e3) == pytest.approx(lim, rel=1e-4)


def test_sub_ohmic_algebraic_tail():
    # s = 1/2 exponential: kernel - lim = -Gamma(1/2) cos(arctan(t~)/2) / (1+t~^2)^(1/4),
    # an explicit t~^(-1/2) tail; check the law rather than a fixed tolerance
    d = sd(s=0.5)
    lim = q_asymptotic(d)
    for tt in (1e2, 1e3, 1e4):
        resid = lim - q_kernel(d, tt)
        expect = (
            math.gamma(0.5)
            * math.cos(0.5 * math.atan(tt))
            / (1.0 + tt * tt) ** 0.25
        )
        assert resid == pytest.approx(expect, rel=1e-6)


def test_exponential_asymptote_minimized_near_gamma_minimum():
    res = minimize_scalar(
        lambda s: q_asymptotic(sd(s=s)), bracket=(1.0, 1.5, 2.0), method="brent"
    )
    assert res.x == pytest.approx(1.4616, abs=2e-4)


def test_super_ohmic_overshoot():
    # s=3 exponential: kernel exceeds its asymptote at intermediate times
    d = sd(s=3.0)
    lim = q_asymptotic(d)
    grid = np.logspace(-2, 2, 200)
    assert max(q_kernel(d, t) for t in grid) > lim


def test_hard_cutoff_oscillation_decay():
    # s=1 hard cutoff: kernel = w_c (1 - sin(t~)/t~); excursion decays as 1/t~
    d = sd(s=1.0, cutoff=CutoffKind.HARD)
    lim = q_asymptotic(d)
    for tt in (10.0, 100.0, 1000.0):
        t_peak = tt + (1.5 * math.pi - math.fmod(tt, 2.0 * math.pi))  # near a trough
        excursion = abs(q_kernel(d, t_peak) - lim)
        assert excursion == pytest.approx(abs(math.sin(t_peak)) / t_peak, rel=1e-8)
        assert excursion < 1.2 / tt


def test_probe_validation():
    with pytest.raises(DomainError):
        ProbeConfig(coupling=0.0)
    with pytest.raises(DomainError):
        ProbeConfig(coupling=1.0, theta=4.0)
    with pytest.raises(DomainError):
        ProbeConfig(coupling=1.0, spin=0.7)
    assert ProbeConfig(coupling=1.0, spin=1.5).dimension == 4


def test_negative_time_rejected():
    with pytest.raises(DomainError):
        q_kernel(sd(), -0.5)
