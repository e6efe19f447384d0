"""Temperature-dependent dephasing kernel of a pure-dephasing spin probe.

The kernel is

    Delta_T(t) = int_0^inf J(w) (1 - cos w t) / w^2 * coth(w / 2T) dw,

a dimensionless, coupling-free decoherence exponent (a two-level probe with
coupling lam loses coherence as exp(-4 lam^2 Delta_T)).  Two evaluation
routes are provided: adaptive quadrature of the defining integral (any
cutoff), and a closed form for the exponential cutoff built from the Gamma
and Hurwitz zeta functions.  The quadrature route is the ground truth; the
closed form is dispatched only on its validity domain (exponential cutoff,
Ohmicity away from the removable singularities at s = 1 and s = 2).

Temperatures are in frequency units (k_B = hbar = 1); T = 0 is a valid
input and means coth -> 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, PoleError
from .special import (
    gamma,
    one_minus_repow,
    zeta_imag_offset,
    zeta_symmetric_defect,
)
from .spectral import (
    CutoffKind,
    SpectralDensity,
    integrate_damped_oscillation,
)

# half-width of the Ohmicity band around s = 1 and s = 2 inside which the
# closed form is refused (Gamma(s-1) / zeta(s-1, .) poles are removable but
# not implemented as limits)
POLE_BAND = 1e-3

# x / T beyond which the Bose occupation factor is numerically zero;
# equivalent to short-circuiting coth(w/2T) to 1 for w/2T > 35
_BOSE_CUT = 70.0

_QUAD_ABS = 1e-280
_QUAD_REL = 1e-10


class DephasingMethod(enum.Enum):
    QUADRATURE = "quadrature"
    CLOSED_FORM_EXP = "closed-form-exp"
    AUTO = "auto"


def closed_form_applicable(sd: SpectralDensity) -> bool:
    """True where the exponential-cutoff closed form is trustworthy."""
    return (
        sd.cutoff is CutoffKind.EXPONENTIAL
        and abs(sd.s - 1.0) > POLE_BAND
        and abs(sd.s - 2.0) > POLE_BAND
    )


@dataclass(frozen=True)
class DephasingEvaluator:
    """Spectral density and temperature bound to an evaluation route."""

    sd: SpectralDensity
    temperature: float
    method: DephasingMethod = DephasingMethod.AUTO

    def __post_init__(self):
        if not (self.temperature >= 0.0 and math.isfinite(self.temperature)):
            raise DomainError(
                f"DephasingEvaluator: temperature must be >= 0, got {self.temperature}"
            )
        if self.method is DephasingMethod.CLOSED_FORM_EXP and not closed_form_applicable(
            self.sd
        ):
            raise DomainError(
                "closed form requires an exponential cutoff with s away from "
                f"{{1, 2}} (band {POLE_BAND}); got cutoff={self.sd.cutoff.value}, "
                f"s={self.sd.s}"
            )

    @property
    def resolved_method(self) -> DephasingMethod:
        if self.method is DephasingMethod.AUTO:
            if closed_form_applicable(self.sd):
                return DephasingMethod.CLOSED_FORM_EXP
            return DephasingMethod.QUADRATURE
        return self.method


# ---------------------------------------------------------------------------
# closed form, exponential cutoff
# ---------------------------------------------------------------------------


def _check_closed_form_args(s: float, omega_c: float, t: float):
    if t < 0.0:
        raise DomainError(f"dephasing: t must be >= 0, got {t}")
    if omega_c <= 0.0:
        raise DomainError("dephasing: omega_c must be positive")
    if s <= 0.0:
        raise DomainError("dephasing: s must be positive")
    if abs(s - 1.0) <= POLE_BAND or abs(s - 2.0) <= POLE_BAND:
        raise PoleError(
            f"dephasing closed form: s={s} within {POLE_BAND} of a removable "
            "singularity (s = 1 or 2); use the quadrature route"
        )


def delta_closed_exp(s: float, omega_c: float, temperature: float, t: float) -> float:
    """Closed-form Delta_T(t) for the exponential cutoff.

    The zero-temperature part is Gamma(s-1) * (1 - Re[(1 + i t w_c)^(1-s)]);
    the thermal part resums the Bose factor into a symmetric Hurwitz-zeta
    combination at argument s-1.
    """
    _check_closed_form_args(s, omega_c, t)
    if temperature < 0.0:
        raise DomainError("dephasing: temperature must be >= 0")
    tt = t * omega_c
    vacuum = gamma(s - 1.0) * one_minus_repow(1.0 - s, tt)
    if temperature == 0.0 or t == 0.0:
        return vacuum
    ttemp = temperature / omega_c
    defect = zeta_symmetric_defect(s - 1.0, 1.0 + ttemp, tt * ttemp)
    return vacuum + gamma(s - 1.0) * ttemp ** (s - 1.0) * defect


def delta_dT_closed_exp(s: float, omega_c: float, temperature: float, t: float) -> float:
    """Temperature derivative of the exponential-cutoff closed form.

    Differentiates the thermal Hurwitz-zeta combination term by term using
    d zeta(s, a)/da = -s zeta(s+1, a); the vacuum part carries no T.
    """
    _check_closed_form_args(s, omega_c, t)
    if temperature <= 0.0:
        raise DomainError("dephasing: temperature derivative requires T > 0")
    if t == 0.0:
        return 0.0
    sigma = s - 1.0
    ttemp = temperature / omega_c
    tt = t * omega_c
    b = 1.0 + ttemp
    eps = tt * ttemp
    defect = zeta_symmetric_defect(sigma, b, eps)
    ddefect = -sigma * (
        zeta_symmetric_defect(sigma + 1.0, b, eps)
        + 2.0 * tt * zeta_imag_offset(sigma + 1.0, b, eps)
    )
    d_thermal = gamma(s - 1.0) * (
        sigma * ttemp ** (sigma - 1.0) * defect + ttemp**sigma * ddefect
    )
    return d_thermal / omega_c


# ---------------------------------------------------------------------------
# quadrature route, any cutoff
# ---------------------------------------------------------------------------


def _delta_quad(sd: SpectralDensity, temperature: float, t: float) -> float:
    s = sd.s
    tt = t * sd.omega_c
    upper = sd.tail_x

    def g_vacuum(x):
        return x ** (s - 2.0) * sd.cutoff_factor(x)

    total = integrate_damped_oscillation(g_vacuum, tt, upper, _QUAD_ABS, _QUAD_REL)
    if temperature > 0.0:
        ttemp = temperature / sd.omega_c
        upper_th = min(_BOSE_CUT * ttemp, upper)

        def g_thermal(x):
            return 2.0 * x ** (s - 2.0) * sd.cutoff_factor(x) / math.expm1(x / ttemp)

        total += integrate_damped_oscillation(
            g_thermal, tt, upper_th, _QUAD_ABS, _QUAD_REL
        )
    return total


def _delta_dT_quad(sd: SpectralDensity, temperature: float, t: float) -> float:
    s = sd.s
    tt = t * sd.omega_c
    ttemp = temperature / sd.omega_c
    upper = min(_BOSE_CUT * ttemp, sd.tail_x)

    def g(x):
        y = 0.5 * x / ttemp
        sh = math.sinh(y)
        return x ** (s - 2.0) * sd.cutoff_factor(x) * y / (ttemp * sh * sh)

    return (
        integrate_damped_oscillation(g, tt, upper, _QUAD_ABS, _QUAD_REL) / sd.omega_c
    )


# ---------------------------------------------------------------------------
# public dispatch
# ---------------------------------------------------------------------------


def delta_kernel(ev: DephasingEvaluator, t: float) -> float:
    """Dephasing exponent Delta_T(t); non-negative, zero at t = 0."""
    if t < 0.0:
        raise DomainError(f"delta_kernel: t must be >= 0, got {t}")
    if t == 0.0:
        return 0.0
    if ev.resolved_method is DephasingMethod.CLOSED_FORM_EXP:
        return delta_closed_exp(ev.sd.s, ev.sd.omega_c, ev.temperature, t)
    return _delta_quad(ev.sd, ev.temperature, t)


def delta_dT(ev: DephasingEvaluator, t: float) -> float:
    """Temperature derivative of Delta_T(t); strictly positive for t > 0."""
    if t < 0.0:
        raise DomainError(f"delta_dT: t must be >= 0, got {t}")
    if ev.temperature <= 0.0:
        raise DomainError("delta_dT: undefined at T = 0")
    if t == 0.0:
        return 0.0
    if ev.resolved_method is DephasingMethod.CLOSED_FORM_EXP:
        return delta_dT_closed_exp(ev.sd.s, ev.sd.omega_c, ev.temperature, t)
    return _delta_dT_quad(ev.sd, ev.temperature, t)
