"""Temperature estimation metrics for the dephasing probe.

The temperature QFI of a two-level probe prepared in
cos(theta/2)|0> + sin(theta/2)|1> is

    F(t) = [sin(theta) 4 lam^2 dDelta/dT]^2 / (exp(8 lam^2 Delta) - 1),

with lam the effective coupling (2 j lam for a collective spin-j probe in a
superposition of extremal projections).  It is attained by projecting onto
the sigma_x eigenstates; the classical Fisher information of that two-outcome
measurement is implemented independently so the attainability is a testable
identity rather than an assumption.  The quantum signal-to-noise ratio is
QSNR = T^2 * F, and QSNR/t is the figure of merit for repeated shots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dephasing import (
    DephasingEvaluator,
    DephasingMethod,
    closed_form_applicable,
    delta_closed_exp,
    delta_dT,
    delta_kernel,
)
from .errors import DomainError
from .special import gamma, hurwitz_zeta
from .spectral import CutoffKind, SpectralDensity
from .thermo import ProbeConfig

# exponent above which exp(8 lam^2 Delta) overflows double precision; deep in
# that regime the probe is fully dephased and carries no information
OVERFLOW_EXPONENT = 700.0


@dataclass(frozen=True)
class QfiPoint:
    """QFI sample: time, QFI (1/T^2 units), QSNR = T^2 QFI, rate = QSNR/t."""

    t: float
    qfi: float
    qsnr: float
    rate: float
    underflow: bool = False


def _dephased_exponent(probe: ProbeConfig, ev: DephasingEvaluator, t: float) -> float:
    lam = probe.coupling_eff
    return 8.0 * lam * lam * delta_kernel(ev, t)


def qfi_temperature(probe: ProbeConfig, ev: DephasingEvaluator, t: float) -> QfiPoint:
    """Temperature QFI of the probe state at time t."""
    if t < 0.0:
        raise DomainError(f"qfi_temperature: t must be >= 0, got {t}")
    if ev.temperature <= 0.0:
        raise DomainError("qfi_temperature: requires T > 0")
    temp = ev.temperature
    if t == 0.0:
        return QfiPoint(t=0.0, qfi=0.0, qsnr=0.0, rate=0.0)
    exponent = _dephased_exponent(probe, ev, t)
    if exponent > OVERFLOW_EXPONENT:
        return QfiPoint(t=t, qfi=0.0, qsnr=0.0, rate=0.0, underflow=True)
    lam = probe.coupling_eff
    signal = math.sin(probe.theta) * 4.0 * lam * lam * delta_dT(ev, t)
    qfi = signal * signal / math.expm1(exponent)
    qsnr = temp * temp * qfi
    return QfiPoint(t=t, qfi=qfi, qsnr=qsnr, rate=qsnr / t)


def x_outcome_probabilities(
    probe: ProbeConfig, ev: DephasingEvaluator, t: float
) -> tuple[float, float]:
    """Outcome probabilities of the sigma_x measurement on the probe."""
    lam = probe.coupling_eff
    coherence = math.exp(-4.0 * lam * lam * delta_kernel(ev, t))
    return 0.5 * (1.0 + coherence), 0.5 * (1.0 - coherence)


def classical_fisher_x(probe: ProbeConfig, ev: DephasingEvaluator, t: float) -> float:
    """Fisher information of the sigma_x measurement (balanced probe only)."""
    if abs(probe.theta - 0.5 * math.pi) > 1e-12:
        raise DomainError("classical_fisher_x: defined for theta = pi/2")
    if t < 0.0:
        raise DomainError(f"classical_fisher_x: t must be >= 0, got {t}")
    if ev.temperature <= 0.0:
        raise DomainError("classical_fisher_x: requires T > 0")
    if t == 0.0:
        return 0.0
    exponent = _dephased_exponent(probe, ev, t)
    if exponent > OVERFLOW_EXPONENT:
        return 0.0
    lam = probe.coupling_eff
    signal = 4.0 * lam * lam * delta_dT(ev, t)
    return signal * signal * math.exp(-exponent) / -math.expm1(-exponent)


def low_T_qfi(
    probe: ProbeConfig, sd: SpectralDensity, temperature: float, t: float
) -> float:
    """Leading low-temperature QFI for the exponential cutoff, balanced probe.

    Scales as T^(2s); the denominator keeps the full zero-temperature
    dephasing exponent, so the expression remains usable at any t.  The
    probe angle is taken at its optimum (theta = pi/2).
    """
    if sd.cutoff is not CutoffKind.EXPONENTIAL:
        raise DomainError("low_T_qfi: derived for the exponential cutoff only")
    if temperature < 0.0:
        raise DomainError("low_T_qfi: temperature must be >= 0")
    if t < 0.0:
        raise DomainError("low_T_qfi: t must be >= 0")
    if temperature == 0.0 or t == 0.0:
        return 0.0
    s = sd.s
    lam = probe.coupling_eff
    if closed_form_applicable(sd):
        delta0 = delta_closed_exp(s, sd.omega_c, 0.0, t)
    else:
        delta0 = delta_kernel(
            DephasingEvaluator(sd, 0.0, DephasingMethod.QUADRATURE), t
        )
    exponent = 8.0 * lam * lam * delta0
    if exponent > OVERFLOW_EXPONENT:
        return 0.0
    zeta_val = hurwitz_zeta(s + 1.0, 1.0)
    num = (
        16.0
        * lam**4
        * s**2
        * (s + 1.0) ** 2
        * t**4
        * sd.omega_c**2
        * zeta_val**2
        * gamma(s) ** 2
        * (temperature / sd.omega_c) ** (2.0 * s)
    )
    return num / math.expm1(exponent)
