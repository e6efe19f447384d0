"""Time-optimal probing: maximize the QSNR rate over the shot duration.

With a fixed total experiment time the relevant figure of merit is
QSNR(t)/t; the maximizer t_opt is the optimal duration of a single shot.
The objective can be multimodal (hard-cutoff kernels oscillate), so a
200-point logarithmic scan brackets the best candidate before golden-section
refinement.  The short-time (quadratic + quartic) expansions of heat,
dephasing exponent and QFI give a closed-form approximation to t_opt that
becomes exact in the strong-coupling limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dephasing import DephasingEvaluator
from .errors import DomainError, InformationFreeError
from .metrology import qfi_temperature
from .special import gamma, hurwitz_zeta
from .spectral import CutoffKind, SpectralDensity
from .thermo import HeatMethod, ProbeConfig, absorbed_heat

DEFAULT_BRACKET_TILDE = (1e-4, 1e3)
GRID_POINTS = 200
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_REFINE_REL_WIDTH = 1e-10
_RATE_FLOOR = 1e-300
_TIE_REL = 1e-12


@dataclass(frozen=True)
class TimeOptResult:
    """Optimal shot duration and the associated rate, QSNR and heat."""

    t_opt: float
    rate: float
    qsnr_at_opt: float
    heat_at_opt: float
    bracket: tuple[float, float]
    boundary: bool = False


@dataclass(frozen=True)
class ShortTimeCoeffs:
    """Quadratic/quartic expansion coefficients, in cutoff-frequency units.

    ``q2``/``q4`` expand the probe heat as Q/w_c = lam^2 (q2 tau^2 + q4 tau^4)
    with tau = t w_c; ``d2``/``d4`` expand the scaled dephasing exponent
    (coherence decays as exp(-lam^2 [d2 tau^2 + d4 tau^4])); ``f2``/``f4``
    expand the QFI.  ``t_opt_approx`` (seconds, i.e. 1/w_c units restored) is
    defined only when f4 < 0.
    """

    q2: float
    q4: float
    d2: float
    d4: float
    f2: float
    f4: float
    t_opt_approx: Optional[float]


def _golden_max(f, lo: float, hi: float):
    """Golden-section maximization in log-time; returns (t_best, f_best)."""
    a, b = math.log(lo), math.log(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(math.exp(c)), f(math.exp(d))
    while (b - a) > _REFINE_REL_WIDTH:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(math.exp(d))
    t_best = math.exp(c if fc > fd else d)
    return t_best, max(fc, fd)


def optimize_rate(
    probe: ProbeConfig,
    ev: DephasingEvaluator,
    bracket: Optional[tuple[float, float]] = None,
    grid_points: int = GRID_POINTS,
    heat_method: HeatMethod = HeatMethod.CLOSED_FORM,
) -> TimeOptResult:
    """Maximize QSNR(t)/t over the bracket (defaults to t*w_c in [1e-4, 1e3]).

    A logarithmic scan locates the best grid cell (global over the bracket),
    golden-section refines it, and the result is certified against the scan.
    Maxima on the bracket edge are reported with ``boundary=True`` rather
    than extrapolated; ties within 1e-12 relative rate resolve to the
    smaller time (equal rate at lower per-shot heat).
    """
    if ev.temperature <= 0.0:
        raise DomainError("optimize_rate: requires T > 0")
    omega_c = ev.sd.omega_c
    if bracket is None:
        bracket = (DEFAULT_BRACKET_TILDE[0] / omega_c, DEFAULT_BRACKET_TILDE[1] / omega_c)
    lo, hi = bracket
    if not (0.0 < lo < hi):
        raise DomainError(f"optimize_rate: invalid bracket {bracket}")

    def rate(t):
        return qfi_temperature(probe, ev, t).rate

    grid = np.logspace(math.log10(lo), math.log10(hi), grid_points)
    rates = np.array([rate(float(t)) for t in grid])
    best = float(np.max(rates))
    if not (best > _RATE_FLOOR):
        raise InformationFreeError(
            f"optimize_rate: rate below {_RATE_FLOOR} everywhere on the bracket"
        )
    # smallest index within the tie tolerance of the maximum
    idx = int(np.flatnonzero(rates >= best * (1.0 - _TIE_REL))[0])
    boundary = idx == 0 or idx == grid_points - 1
    cell_lo = float(grid[max(idx - 1, 0)])
    cell_hi = float(grid[min(idx + 1, grid_points - 1)])
    t_ref, r_ref = _golden_max(rate, cell_lo, cell_hi)
    # certify against the scan; golden can only have improved on the cell
    if r_ref < best or (abs(r_ref - best) <= _TIE_REL * best and float(grid[idx]) < t_ref):
        t_ref, r_ref = float(grid[idx]), best
    heat = absorbed_heat(probe, ev.sd, t_ref, heat_method).heat
    return TimeOptResult(
        t_opt=t_ref,
        rate=r_ref,
        qsnr_at_opt=r_ref * t_ref,
        heat_at_opt=heat,
        bracket=(lo, hi),
        boundary=boundary,
    )


def short_time_coeffs(
    probe: ProbeConfig, sd: SpectralDensity, temperature: float
) -> ShortTimeCoeffs:
    """Short-time expansion coefficients for the exponential cutoff.

    All Gamma/zeta factors are arranged so the expressions stay finite for
    every s > 0 (the individually singular factors at s = 1 cancel).
    """
    if sd.cutoff is not CutoffKind.EXPONENTIAL:
        raise DomainError("short_time_coeffs: exponential cutoff only")
    if temperature <= 0.0:
        raise DomainError("short_time_coeffs: requires T > 0")
    s = sd.s
    tau = temperature / sd.omega_c
    lam = probe.coupling_eff

    q2 = s * (s + 1.0) * gamma(s)
    q4 = -(s**4 + 6.0 * s**3 + 11.0 * s**2 + 6.0 * s) * gamma(s) / 12.0

    z1 = hurwitz_zeta(s + 1.0, 1.0 + tau)
    z2 = hurwitz_zeta(s + 2.0, 1.0 + tau)
    z3 = hurwitz_zeta(s + 3.0, 1.0 + tau)
    z4 = hurwitz_zeta(s + 4.0, 1.0 + tau)
    d2 = 2.0 * gamma(s + 1.0) * (1.0 + 2.0 * tau ** (s + 1.0) * z1)
    d4 = -gamma(s + 3.0) / 6.0 * (1.0 + 2.0 * tau ** (s + 3.0) * z3)
    dd2 = 4.0 * gamma(s + 2.0) * tau**s * (z1 - tau * z2)
    dd4 = -gamma(s + 4.0) / 3.0 * tau ** (s + 2.0) * (z3 - tau * z4)

    f2 = lam**2 * dd2**2 / (2.0 * d2)
    f4 = -(
        lam**4 * d2**2 * dd2**2 + lam**2 * (d4 * dd2**2 - 2.0 * d2 * dd2 * dd4)
    ) / (2.0 * d2**2)
    if f4 < 0.0:
        t_opt_approx = math.sqrt(-f2 / (3.0 * f4)) / sd.omega_c
    else:
        t_opt_approx = None
    return ShortTimeCoeffs(q2=q2, q4=q4, d2=d2, d4=d4, f2=f2, f4=f4, t_opt_approx=t_opt_approx)


@dataclass(frozen=True)
class SweepRow:
    """One grid tuple of a time-optimization sweep, nondimensionalized."""

    s: float
    cutoff: str
    temperature: float  # T / w_c
    coupling: float
    spin: float
    t_opt: float  # t_opt * w_c
    rate: float  # max rate / w_c
    heat: float  # Q(t_opt) / w_c
    boundary: bool = False
    error: str = ""


def evaluate_sweep_row(task) -> SweepRow:
    """Evaluate one sweep tuple; errors become row markers, not exceptions."""
    sd, temperature, probe, bracket = task
    base = dict(
        s=sd.s,
        cutoff=sd.cutoff.value,
        temperature=temperature / sd.omega_c,
        coupling=probe.coupling,
        spin=probe.spin,
    )
    try:
        ev = DephasingEvaluator(sd, temperature)
        res = optimize_rate(probe, ev, bracket=bracket)
    except Exception as exc:  # row-level marker; the sweep must continue
        return SweepRow(
            **base, t_opt=math.nan, rate=math.nan, heat=math.nan, error=str(exc)
        )
    return SweepRow(
        **base,
        t_opt=res.t_opt * sd.omega_c,
        rate=res.rate / sd.omega_c,
        heat=res.heat_at_opt / sd.omega_c,
        boundary=res.boundary,
    )


def sweep_tasks(
    sds: list[SpectralDensity],
    temperatures: list[float],
    probes: list[ProbeConfig],
    bracket: Optional[tuple[float, float]] = None,
):
    """Deterministic (lexicographic) task list for a sweep."""
    return [
        (sd, temperature, probe, bracket)
        for sd in sds
        for temperature in temperatures
        for probe in probes
    ]


def sweep(
    sds: list[SpectralDensity],
    temperatures: list[float],
    probes: list[ProbeConfig],
    bracket: Optional[tuple[float, float]] = None,
) -> list[SweepRow]:
    """Run the full grid in order; one row per (sd, T, probe) tuple."""
    return [evaluate_sweep_row(task) for task in sweep_tasks(sds, temperatures, probes, bracket)]
