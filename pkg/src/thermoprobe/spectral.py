"""Ohmic-like spectral densities and the shared quadrature engine.

The spectral density is J(w) = w * (w/w_c)^(s-1) * C(w, w_c) with an
exponential, Gaussian or hard (step) cutoff C.  All integral kernels in the
package funnel through the two integrators defined here: a generic adaptive
routine for semi-infinite integrands and an oscillation-aware routine for
kernels of the form g(w) * (1 - cos(w t)), which switches to cosine-weighted
(Clenshaw-Curtis moment) quadrature once the integration window spans many
oscillation periods.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import DomainError, QuadratureError

DEFAULT_ABS_TOL = 1e-12
DEFAULT_REL_TOL = 1e-10

# number of radians of cos(w t) across the window above which the plain
# adaptive scheme is abandoned for weighted quadrature
_OSC_THRESHOLD = 50.0

# dimensionless truncation points x = w/w_c beyond which the cutoff factor
# makes any kernel contribution negligible at double precision
_TAIL_X = {"exponential": 70.0, "gaussian": 9.0, "hard": 1.0}


class CutoffKind(enum.Enum):
    EXPONENTIAL = "exponential"
    GAUSSIAN = "gaussian"
    HARD = "hard"


@dataclass(frozen=True)
class SpectralDensity:
    """Bath spectral density parameters: Ohmicity s, cutoff frequency, family."""

    s: float
    omega_c: float
    cutoff: CutoffKind = CutoffKind.EXPONENTIAL

    def __post_init__(self):
        if not (self.s > 0.0 and math.isfinite(self.s)):
            raise DomainError(f"SpectralDensity: s must be positive, got {self.s}")
        if not (self.omega_c > 0.0 and math.isfinite(self.omega_c)):
            raise DomainError(
                f"SpectralDensity: omega_c must be positive, got {self.omega_c}"
            )

    def cutoff_factor(self, x: float) -> float:
        """Cutoff function at dimensionless frequency x = w/w_c."""
        if self.cutoff is CutoffKind.EXPONENTIAL:
            return math.exp(-x)
        if self.cutoff is CutoffKind.GAUSSIAN:
            return math.exp(-x * x)
        return 1.0 if x <= 1.0 else 0.0

    @property
    def tail_x(self) -> float:
        """Dimensionless frequency beyond which the cutoff kills the integrand."""
        return _TAIL_X[self.cutoff.value]


def eval_j(sd: SpectralDensity, omega: float) -> float:
    """Spectral density J(w) = w (w/w_c)^(s-1) C(w, w_c); zero at w = 0."""
    if omega < 0.0:
        raise DomainError(f"eval_j: omega must be >= 0, got {omega}")
    if omega == 0.0:
        return 0.0
    x = omega / sd.omega_c
    return sd.omega_c * x**sd.s * sd.cutoff_factor(x)


def _checked_quad(f, lo, hi, abs_tol, rel_tol, weight=None, wvar=None):
    """scipy.integrate.quad with NaN guarding and explicit failure reporting."""

    def guarded(x):
        v = f(x)
        if v != v:
            raise DomainError(f"quadrature: integrand returned NaN at x={x!r}")
        return v

    kwargs = dict(epsabs=abs_tol, epsrel=rel_tol, limit=400, full_output=1)
    if weight is not None:
        kwargs["weight"] = weight
        kwargs["wvar"] = wvar
        if hi == np.inf:
            kwargs["limlst"] = 200
        kwargs.pop("epsrel")  # weighted rules are driven by epsabs
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        out = quad(guarded, lo, hi, **kwargs)
    value, err = out[0], out[1]
    if len(out) > 3:  # (value, err, infodict, message [, explain])
        tol = max(abs_tol, rel_tol * abs(value))
        if err > tol * 10.0:
            raise QuadratureError(
                f"quadrature did not converge on [{lo}, {hi}]: "
                f"achieved error {err:.3e} > tolerance {tol:.3e}",
                value=value,
                achieved_error=err,
            )
    return value, err


def integrate_kernel(
    sd: SpectralDensity,
    f,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
) -> float:
    """Integrate f over (0, inf), truncated exactly at w_c for a hard cutoff.

    ``f`` must be continuous on the open interval with at worst an integrable
    power-law endpoint at zero.  Raises :class:`QuadratureError` when the
    requested tolerance cannot be certified.
    """
    if abs_tol <= 0.0 or rel_tol <= 0.0:
        raise DomainError("integrate_kernel: tolerances must be positive")
    upper = sd.omega_c if sd.cutoff is CutoffKind.HARD else np.inf
    value, _ = _checked_quad(f, 0.0, upper, abs_tol, rel_tol)
    return value


def integrate_damped_oscillation(
    g,
    t: float,
    upper: float,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
) -> float:
    """Integral of g(x) * (1 - cos(x t)) over (0, upper), oscillation-safe.

    For t*upper below the oscillation threshold a single adaptive pass is
    used.  Beyond it the window is split at half a period: the head keeps the
    regularizing (1 - cos) factor, while on the remainder the DC part and the
    cosine part are integrated separately, the latter with a cosine-weighted
    rule whose cost does not grow with the period count.
    """
    if t < 0.0:
        raise DomainError("integrate_damped_oscillation: t must be >= 0")
    if t == 0.0:
        return 0.0

    def full(x):
        h = math.sin(0.5 * t * x)
        return g(x) * 2.0 * h * h

    if t * upper <= _OSC_THRESHOLD:
        value, _ = _checked_quad(full, 0.0, upper, abs_tol, rel_tol)
        return value

    x0 = min(upper, 0.5 * math.pi / t)
    head, _ = _checked_quad(full, 0.0, x0, abs_tol, rel_tol)
    dc, _ = _checked_quad(g, x0, upper, abs_tol, rel_tol)
    cos_tol = max(abs_tol, 0.1 * rel_tol * abs(dc), 1e-280)
    osc, _ = _checked_quad(g, x0, upper, cos_tol, rel_tol, weight="cos", wvar=t)
    return head + dc - osc
