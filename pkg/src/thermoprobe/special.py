"""Special functions backing the closed-form kernels.

Provides the Gamma function, the Hurwitz zeta function for complex second
argument (with analytic continuation to s < 1), and the hypergeometric
functions 1F1 and 1F2, together with a few numerically stabilized
combinations that the dephasing and heat closed forms are built from.

Hurwitz zeta is evaluated by Euler-Maclaurin summation: the second argument
is shifted by an integer until its modulus is at least ``_EM_SHIFT``, after
which the Bernoulli correction series (up to B_20) is applied.  The
hypergeometric functions use direct Taylor summation for small arguments and
delegate to mpmath (elevated working precision) where float64 summation
would lose digits to alternating-series cancellation.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath as mp
import scipy.special as sc

from .errors import DomainError, PoleError

_EM_SHIFT = 10.0

# B_{2k} / (2k)! for k = 1..10
_EM_COEFFS = tuple(
    float(b / math.factorial(2 * k))
    for k, b in enumerate(
        (
            Fraction(1, 6),
            Fraction(-1, 30),
            Fraction(1, 42),
            Fraction(-1, 30),
            Fraction(5, 66),
            Fraction(-691, 2730),
            Fraction(7, 6),
            Fraction(-3617, 510),
            Fraction(43867, 798),
            Fraction(-174611, 330),
        ),
        start=1,
    )
)

_SERIES_CUTOFF = 8.0  # |z| beyond which Taylor summation of 1F1/1F2 loses digits
_SERIES_MAX_TERMS = 800


def _is_nonpositive_integer(x):
    return x <= 0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function on the real line, rejecting the poles explicitly."""
    if not math.isfinite(x):
        raise DomainError(f"gamma: non-finite argument {x!r}")
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma: pole at non-positive integer x={x}")
    return float(sc.gamma(x))


def _em_shift_count(a: complex) -> int:
    """Smallest n >= 0 with |a + n| >= _EM_SHIFT."""
    if abs(a) >= _EM_SHIFT:
        return 0
    im2 = a.imag * a.imag
    if im2 >= _EM_SHIFT * _EM_SHIFT:
        return 0
    return max(0, math.ceil(math.sqrt(_EM_SHIFT * _EM_SHIFT - im2) - a.real))


def _em_tail(s: float, z: complex) -> complex:
    """Euler-Maclaurin tail for zeta(s, z) once |z| is large enough."""
    w = z ** (-s)
    total = z ** (1.0 - s) / (s - 1.0) + 0.5 * w
    poch = s
    zpow = w / z
    z2 = z * z
    for k, coeff in enumerate(_EM_COEFFS, start=1):
        total += coeff * poch * zpow
        poch *= (s + 2.0 * k - 1.0) * (s + 2.0 * k)
        zpow /= z2
    return total


def hurwitz_zeta(s: float, a):
    """Hurwitz zeta sum_{n>=0} (n+a)^(-s), continued analytically for s < 1.

    ``a`` may be real or complex with Re(a) > 0.  Returns a float for real
    input, complex otherwise.
    """
    if s == 1.0:
        raise PoleError("hurwitz_zeta: pole at s = 1")
    ac = complex(a)
    if not (math.isfinite(s) and math.isfinite(ac.real) and math.isfinite(ac.imag)):
        raise DomainError("hurwitz_zeta: non-finite argument")
    if ac.real <= 0.0:
        raise DomainError(f"hurwitz_zeta: requires Re(a) > 0, got {a!r}")
    n_shift = _em_shift_count(ac)
    partial = 0.0 + 0.0j
    for n in range(n_shift):
        partial += (ac + n) ** (-s)
    result = partial + _em_tail(s, ac + n_shift)
    if result != result:  # NaN propagated from overflow corner
        raise DomainError(f"hurwitz_zeta: evaluation failed at s={s}, a={a!r}")
    if isinstance(a, complex):
        return result
    return result.real


def one_minus_repow(p: float, x: float) -> float:
    """1 - Re[(1 + i*x)^p], computed without cancellation at small x.

    Equals 1 - (1+x^2)^(p/2) * cos(p*arctan x); the naive form loses about
    -log10(x^2) digits for x -> 0, this one is uniformly accurate.
    """
    phi = math.atan(x)
    half = math.sin(0.5 * p * phi)
    return 2.0 * half * half - math.cos(p * phi) * math.expm1(
        0.5 * p * math.log1p(x * x)
    )


def zeta_symmetric_defect(s: float, b: float, eps: float) -> float:
    """2*zeta(s,b) - zeta(s,b+i*eps) - zeta(s,b-i*eps), evaluated stably.

    For small eps the three terms cancel to O(eps^2); pairing the terms
    through :func:`one_minus_repow` keeps full relative precision.
    """
    if s == 1.0:
        raise PoleError("zeta_symmetric_defect: pole at s = 1")
    if b <= 0.0:
        raise DomainError("zeta_symmetric_defect: requires b > 0")
    # the shift must place the *real* tail argument N+b in the asymptotic
    # region; |b + i eps| alone can be large while b stays small
    n_shift = max(0, math.ceil(_EM_SHIFT - b))
    total = 0.0
    for n in range(n_shift):
        base = n + b
        total += 2.0 * base ** (-s) * one_minus_repow(-s, eps / base)
    base = n_shift + b
    x = eps / base
    total += 2.0 * (base ** (1.0 - s) / (s - 1.0)) * one_minus_repow(1.0 - s, x)
    total += base ** (-s) * one_minus_repow(-s, x)
    poch = s
    power = -s - 1.0
    for k, coeff in enumerate(_EM_COEFFS, start=1):
        total += 2.0 * coeff * poch * base**power * one_minus_repow(power, x)
        poch *= (s + 2.0 * k - 1.0) * (s + 2.0 * k)
        power -= 2.0
    return total


def zeta_imag_offset(s: float, b: float, eps: float) -> float:
    """Im zeta(s, b + i*eps) for real s != 1 and b > 0."""
    if s == 1.0:
        raise PoleError("zeta_imag_offset: pole at s = 1")
    if b <= 0.0:
        raise DomainError("zeta_imag_offset: requires b > 0")
    a = complex(b, eps)
    n_shift = _em_shift_count(a)
    total = 0.0
    for n in range(n_shift):
        total += ((a + n) ** (-s)).imag
    return total + _em_tail(s, a + n_shift).imag


def _check_series_params(name, bs):
    for b in bs:
        if _is_nonpositive_integer(b):
            raise PoleError(f"{name}: lower parameter at non-positive integer {b}")


def _taylor_1f1(a: float, b: float, z: float) -> float:
    term = 1.0
    total = 1.0
    for k in range(_SERIES_MAX_TERMS):
        term *= (a + k) / (b + k) * z / (k + 1.0)
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    raise DomainError(f"hyp1f1: series did not converge for z={z}")


def _taylor_1f2(a: float, b1: float, b2: float, z: float) -> float:
    term = 1.0
    total = 1.0
    for k in range(_SERIES_MAX_TERMS):
        term *= (a + k) / ((b1 + k) * (b2 + k)) * z / (k + 1.0)
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    raise DomainError(f"hyp1f2: series did not converge for z={z}")


def hyp1f1(a: float, b: float, z: float) -> float:
    """Confluent hypergeometric 1F1(a; b; z) on the real line."""
    _check_series_params("hyp1f1", (b,))
    if not all(math.isfinite(v) for v in (a, b, z)):
        raise DomainError("hyp1f1: non-finite argument")
    if z == 0.0:
        return 1.0
    if abs(z) <= _SERIES_CUTOFF:
        return _taylor_1f1(a, b, z)
    with mp.workdps(30):
        return float(mp.hyp1f1(a, b, z))


def hyp1f2(a: float, b1: float, b2: float, z: float) -> float:
    """Generalized hypergeometric 1F2(a; b1, b2; z) on the real line."""
    _check_series_params("hyp1f2", (b1, b2))
    if not all(math.isfinite(v) for v in (a, b1, b2, z)):
        raise DomainError("hyp1f2: non-finite argument")
    if z == 0.0:
        return 1.0
    if abs(z) <= _SERIES_CUTOFF:
        return _taylor_1f2(a, b1, b2, z)
    with mp.workdps(30):
        return float(mp.hyp1f2(a, b1, b2, z))


def hyp1f1_deficit(a: float, b: float, z: float) -> float:
    """1 - 1F1(a; b; z), summed from the k = 1 term for small |z|.

    Avoids the small-z cancellation of computing 1F1 first and subtracting.
    """
    _check_series_params("hyp1f1", (b,))
    if z == 0.0:
        return 0.0
    if abs(z) > _SERIES_CUTOFF:
        return 1.0 - hyp1f1(a, b, z)
    term = a / b * z
    total = term
    for k in range(1, _SERIES_MAX_TERMS):
        term *= (a + k) / (b + k) * z / (k + 1.0)
        total += term
        if abs(term) <= 1e-17 * max(abs(total), 1e-300):
            break
    return -total


def hyp1f2_deficit(a: float, b1: float, b2: float, z: float) -> float:
    """1 - 1F2(a; b1, b2; z), stable for small |z|."""
    _check_series_params("hyp1f2", (b1, b2))
    if z == 0.0:
        return 0.0
    if abs(z) > _SERIES_CUTOFF:
        return 1.0 - hyp1f2(a, b1, b2, z)
    term = a / (b1 * b2) * z
    total = term
    for k in range(1, _SERIES_MAX_TERMS):
        term *= (a + k) / ((b1 + k) * (b2 + k)) * z / (k + 1.0)
        total += term
        if abs(term) <= 1e-17 * max(abs(total), 1e-300):
            break
    return -total
