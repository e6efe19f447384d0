"""Heat absorbed by the sample during the probe-sample interaction.

The coupling-free heat kernel is

    Q_kernel(t) = int_0^inf J(w) (1 - cos w t) / w dw            [frequency]

and the probe heat is Q(t) = 2 * lam_eff^2 * Q_kernel(t) with the effective
qubit coupling lam_eff = 2 j lam of a collective spin-j probe prepared in a
superposition of extremal projections.  Temperature never enters: neither
function takes it, which makes temperature independence a property of the
signatures rather than a numerical accident.  Closed forms exist for all
three cutoff families; quadrature of the defining integral is kept as the
independent route.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .special import gamma, hyp1f1_deficit, hyp1f2_deficit, one_minus_repow
from .spectral import CutoffKind, SpectralDensity, integrate_damped_oscillation

_QUAD_ABS = 1e-280
_QUAD_REL = 1e-10


@dataclass(frozen=True)
class ProbeConfig:
    """Probe parameters: dimensionless coupling, initial-state angle, spin j.

    The initial state is cos(theta/2)|0> + sin(theta/2)|1> for a two-level
    probe; a spin-j probe in a superposition of extremal projections maps to
    a two-level one with coupling 2*j*coupling.
    """

    coupling: float
    theta: float = math.pi / 2.0
    spin: float = 0.5

    def __post_init__(self):
        if not (self.coupling > 0.0 and math.isfinite(self.coupling)):
            raise DomainError(f"ProbeConfig: coupling must be > 0, got {self.coupling}")
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f"ProbeConfig: theta must lie in [0, pi], got {self.theta}")
        two_j = 2.0 * self.spin
        if not (two_j >= 1.0 and abs(two_j - round(two_j)) < 1e-12):
            raise DomainError(
                f"ProbeConfig: spin must be a positive half-integer, got {self.spin}"
            )

    @property
    def coupling_eff(self) -> float:
        """Effective two-level coupling 2 j lam."""
        return 2.0 * self.spin * self.coupling

    @property
    def dimension(self) -> int:
        """Hilbert-space dimension 2j + 1."""
        return int(round(2.0 * self.spin)) + 1


@dataclass(frozen=True)
class HeatResult:
    """Coupling-free kernel and the probe heat 2 lam_eff^2 * kernel."""

    kernel: float
    heat: float


class HeatMethod(enum.Enum):
    QUADRATURE = "quadrature"
    CLOSED_FORM = "closed-form"


def _q_closed(sd: SpectralDensity, tt: float) -> float:
    s = sd.s
    if sd.cutoff is CutoffKind.EXPONENTIAL:
        return sd.omega_c * gamma(s) * one_minus_repow(-s, tt)
    z = -0.25 * tt * tt
    if sd.cutoff is CutoffKind.GAUSSIAN:
        return 0.5 * sd.omega_c * gamma(0.5 * s) * hyp1f1_deficit(0.5 * s, 0.5, z)
    return sd.omega_c / s * hyp1f2_deficit(0.5 * s, 0.5, 0.5 * s + 1.0, z)


def q_kernel(
    sd: SpectralDensity, t: float, method: HeatMethod = HeatMethod.CLOSED_FORM
) -> float:
    """Coupling-free heat kernel at time t; non-negative, zero at t = 0."""
    if t < 0.0:
        raise DomainError(f"q_kernel: t must be >= 0, got {t}")
    if t == 0.0:
        return 0.0
    tt = t * sd.omega_c
    if method is HeatMethod.CLOSED_FORM:
        return _q_closed(sd, tt)

    def g(x):
        return x ** (sd.s - 1.0) * sd.cutoff_factor(x)

    return sd.omega_c * integrate_damped_oscillation(
        g, tt, sd.tail_x, _QUAD_ABS, _QUAD_REL
    )


def absorbed_heat(
    probe: ProbeConfig,
    sd: SpectralDensity,
    t: float,
    method: HeatMethod = HeatMethod.CLOSED_FORM,
) -> HeatResult:
    """Probe heat Q(t) = 2 lam_eff^2 * kernel; independent of theta and T."""
    kernel = q_kernel(sd, t, method)
    lam = probe.coupling_eff
    return HeatResult(kernel=kernel, heat=2.0 * lam * lam * kernel)


def q_asymptotic(sd: SpectralDensity) -> float:
    """Long-time limit of the heat kernel for each cutoff family."""
    if sd.cutoff is CutoffKind.EXPONENTIAL:
        return sd.omega_c * gamma(sd.s)
    if sd.cutoff is CutoffKind.GAUSSIAN:
        return 0.5 * sd.omega_c * gamma(0.5 * sd.s)
    return sd.omega_c / sd.s
