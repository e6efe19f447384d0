"""Optimal (channel) QFI for collective dephasing of a spin-j probe.

A spin-j probe dephasing collectively is described by the Hadamard-product
channel rho -> E o rho with the Gaussian-kernel matrix E_ij = exp(-D (i-j)^2)
built from the instantaneous dephasing value D.  Diagonalizing E yields a
Kraus representation of diagonal operators; the ancilla-assisted optimal QFI
for D is then

    4 * min_{h = h^dag} || sum_k (Kdot_k - i sum_j h_kj K_j)^dag (...) ||

minimized over the Hermitian gauge h that parameterizes equivalent Kraus
representations.  Because every operator here is diagonal, the matrix whose
operator norm is taken is diagonal too, so the objective is the maximum of
d convex quadratics in the gauge parameters: the minimization is convex and
is solved with a sequential quadratic epigraph formulation plus seeded
random restarts.

The comparison helper pits the cat-state protocol (superposition of extremal
spin projections, exactly a rescaled two-level probe) against this optimal
bound along the full time-optimization.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .dephasing import DephasingEvaluator, delta_dT, delta_kernel
from .errors import DegenerateSpectrumError, DomainError, OptimizerError
from .metrology import OVERFLOW_EXPONENT
from .thermo import ProbeConfig

EIGENVALUE_DROP = 1e-13
GAP_TOL = 1e-10
_PERTURB_DELTA = 1e-9
_RESTARTS = 5
_DEFAULT_SEED = 1234

# dephasing window for the time comparison: beyond the upper edge the probe
# is fully dephased (QFI ~ e^(-2 delta)); below the lower edge the rate is
# still in its linear rise from zero
_DELTA_SATURATED = 20.0
_DELTA_FLOOR = 1e-8


@dataclass(frozen=True)
class DephasingMatrix:
    """Gaussian-kernel dephasing matrix and its parameter derivative."""

    d: int
    delta: float
    d_delta: float
    entries: np.ndarray
    derivative: np.ndarray


@dataclass(frozen=True)
class KrausSet:
    """Diagonal Kraus operators, their derivatives and the E-eigenvalues.

    ``vectors[k]`` is the diagonal of K_k (already scaled by sqrt(kappa_k));
    ``derivatives[k]`` the diagonal of Kdot_k.  Eigenvalues are sorted in
    descending order and entries below the drop threshold are removed.
    """

    vectors: np.ndarray
    derivatives: np.ndarray
    eigenvalues: np.ndarray

    @property
    def rank(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def operators(self) -> list[np.ndarray]:
        return [np.diag(v) for v in self.vectors]

    @property
    def derivative_operators(self) -> list[np.ndarray]:
        return [np.diag(v) for v in self.derivatives]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Channel action sum_k K_k rho K_k^dag."""
        out = np.zeros_like(rho, dtype=complex)
        for v in self.vectors:
            out += np.outer(v, np.conj(v)) * rho
        return out


def build_dephasing_matrix(d: int, delta: float, d_delta: float = 1.0) -> DephasingMatrix:
    """E_ij = exp(-delta (i-j)^2) together with dE/ddelta."""
    if d < 2:
        raise DomainError(f"build_dephasing_matrix: d must be >= 2, got {d}")
    if delta < 0.0:
        raise DomainError(f"build_dephasing_matrix: delta must be >= 0, got {delta}")
    idx = np.arange(d)
    sq = (idx[:, None] - idx[None, :]) ** 2
    entries = np.exp(-delta * sq)
    derivative = -sq * entries
    np.fill_diagonal(derivative, 0.0)
    return DephasingMatrix(
        d=d, delta=delta, d_delta=d_delta, entries=entries, derivative=derivative
    )


def kraus_from_matrix(
    E: DephasingMatrix, gap_tol: float = GAP_TOL, allow_perturbation: bool = True
) -> KrausSet:
    """Diagonal Kraus set from the spectral decomposition of E.

    Derivatives come from first-order perturbation theory, so eigenvalue
    gaps below ``gap_tol`` are refused; with ``allow_perturbation`` the
    dephasing value is nudged by 1e-9 once (with a warning) before giving up.
    """
    kappa, vecs = np.linalg.eigh(E.entries)
    order = np.argsort(kappa)[::-1]
    kappa = kappa[order]
    vecs = vecs[:, order]
    keep = np.flatnonzero(kappa > EIGENVALUE_DROP)
    if keep.size == 0:
        raise DegenerateSpectrumError("kraus_from_matrix: no eigenvalue above threshold")
    keep_set = set(int(j) for j in keep)
    # retained pairs need an absolute gap; against a dropped (near-zero) mode
    # the perturbative denominator is ~kappa_j itself, which only degenerates
    # when kappa_j sits right at the drop threshold
    gaps_ok = all(
        (abs(kappa[j] - kappa[i]) > gap_tol)
        if i in keep_set
        else (kappa[i] <= 0.5 * kappa[j])
        for j in keep
        for i in range(len(kappa))
        if i != j
    )
    if not gaps_ok:
        if allow_perturbation and E.delta > 0.0:
            warnings.warn(
                "kraus_from_matrix: near-degenerate spectrum, perturbing the "
                f"dephasing value by {_PERTURB_DELTA}",
                RuntimeWarning,
                stacklevel=2,
            )
            nudged = build_dephasing_matrix(E.d, E.delta + _PERTURB_DELTA, E.d_delta)
            return kraus_from_matrix(nudged, gap_tol, allow_perturbation=False)
        raise DegenerateSpectrumError(
            f"kraus_from_matrix: eigenvalue gap below {gap_tol} at delta={E.delta}"
        )
    kdot = np.array([vecs[:, j] @ E.derivative @ vecs[:, j] for j in range(len(kappa))])
    vectors = []
    derivatives = []
    for j in keep:
        kj = vecs[:, j]
        vec_dot = np.zeros(E.d)
        for i in range(len(kappa)):
            if i == j:
                continue
            vec_dot += (vecs[:, i] @ E.derivative @ kj) / (kappa[j] - kappa[i]) * vecs[:, i]
        root = math.sqrt(kappa[j])
        vectors.append(root * kj)
        derivatives.append(kdot[j] / (2.0 * root) * kj + root * vec_dot)
    return KrausSet(
        vectors=np.array(vectors),
        derivatives=np.array(derivatives),
        eigenvalues=kappa[keep],
    )


# ---------------------------------------------------------------------------
# gauge minimization
# ---------------------------------------------------------------------------


def _unpack_hermitian(theta: np.ndarray, r: int) -> np.ndarray:
    H = np.zeros((r, r), dtype=complex)
    H[np.diag_indices(r)] = theta[:r]
    pos = r
    for k in range(r):
        for j in range(k + 1, r):
            H[k, j] = theta[pos] + 1j * theta[pos + 1]
            H[j, k] = theta[pos] - 1j * theta[pos + 1]
            pos += 2
    return H


def _column_loads(theta, W, U, r):
    """Per-column quadratic loads m_n = ||W[:,n] - i H U[:,n]||^2 and A."""
    H = _unpack_hermitian(theta, r)
    A = W - 1j * (H @ U)
    return np.einsum("kn,kn->n", np.conj(A), A).real, A


def _load_gradient(A, U, n, r):
    """Gradient of m_n with respect to the packed Hermitian parameters."""
    a = A[:, n]
    u = U[:, n]
    grad = np.empty(r * r)
    prod = np.conj(a) * u  # conj(a_k) u_k
    grad[:r] = 2.0 * prod.imag
    pos = r
    for k in range(r):
        for j in range(k + 1, r):
            ck = np.conj(a[k]) * u[j]
            cj = np.conj(a[j]) * u[k]
            grad[pos] = 2.0 * (ck + cj).imag
            grad[pos + 1] = 2.0 * (ck - cj).real
            pos += 2
    return grad


def minimize_kraus_variance(
    vectors: np.ndarray,
    derivatives: np.ndarray,
    restarts: int = _RESTARTS,
    seed: int = _DEFAULT_SEED,
) -> float:
    """min over Hermitian h of || sum_k A_k^dag A_k ||, A_k = Kdot_k - i (hK)_k.

    Diagonal Kraus structure makes the norm the max of per-level convex
    quadratics in h; the epigraph form is solved with SLSQP from the zero
    gauge and from seeded random restarts, keeping the best.
    """
    # rows index operators, columns index the probe level; normalize the
    # derivative scale so SLSQP tolerances are meaningful for any magnitude
    W = np.asarray(derivatives, dtype=complex)
    U = np.asarray(vectors, dtype=complex)
    norm = float(np.linalg.norm(W))
    if norm == 0.0:
        return 0.0
    W = W / norm
    r, d = W.shape
    n_params = r * r

    def objective_tau(x):
        return x[0]

    def constraints(x):
        m, _ = _column_loads(x[1:], W, U, r)
        return x[0] - m

    def constraints_jac(x):
        m, A = _column_loads(x[1:], W, U, r)
        jac = np.zeros((d, n_params + 1))
        jac[:, 0] = 1.0
        for n in range(d):
            jac[n, 1:] = -_load_gradient(A, U, n, r)
        return jac

    rng = np.random.default_rng(seed)
    starts = [np.zeros(n_params)]
    for _ in range(restarts):
        starts.append(rng.normal(scale=0.5, size=n_params))

    tau_jac = np.zeros(n_params + 1)
    tau_jac[0] = 1.0
    best = math.inf
    converged = False
    for theta0 in starts:
        m0, _ = _column_loads(theta0, W, U, r)
        x0 = np.concatenate(([float(np.max(m0))], theta0))
        res = minimize(
            objective_tau,
            x0,
            jac=lambda x: tau_jac,
            constraints=[
                {"type": "ineq", "fun": constraints, "jac": constraints_jac}
            ],
            method="SLSQP",
            options={"maxiter": 400, "ftol": 1e-14},
        )
        value = float(np.max(_column_loads(res.x[1:], W, U, r)[0]))
        if value < best:
            best = value
        if res.success:
            converged = True
    if math.isinf(best):
        raise OptimizerError("minimize_kraus_variance: no start produced a value")
    if not converged:
        warnings.warn(
            f"minimize_kraus_variance: optimizer reported non-convergence, "
            f"best value {best * norm * norm:.6e}",
            RuntimeWarning,
            stacklevel=2,
        )
    return best * norm * norm


def channel_qfi(
    E: DephasingMatrix, restarts: int = _RESTARTS, seed: int = _DEFAULT_SEED
) -> float:
    """Ancilla-assisted optimal QFI for the parameter behind the dephasing.

    Returns 4 * d_delta^2 * min_h ||...||; the d_delta factor converts from
    the raw dephasing value to the physical parameter via the chain rule.
    """
    kraus = kraus_from_matrix(E)
    base = minimize_kraus_variance(kraus.vectors, kraus.derivatives, restarts, seed)
    return 4.0 * E.d_delta**2 * base


def channel_qfi_from_kraus(
    kraus: KrausSet,
    d_delta: float = 1.0,
    restarts: int = _RESTARTS,
    seed: int = _DEFAULT_SEED,
) -> float:
    """Same as :func:`channel_qfi` but from an explicit Kraus set."""
    base = minimize_kraus_variance(kraus.vectors, kraus.derivatives, restarts, seed)
    return 4.0 * d_delta**2 * base


# ---------------------------------------------------------------------------
# cat-state benchmark
# ---------------------------------------------------------------------------


def cat_state_qfi(j: float, lam: float, delta_T: float, d_delta_T: float) -> float:
    """QFI of the extremal-superposition (cat) probe via the two-level mapping.

    The spin-j cat state behaves as a two-level probe with coupling 2*j*lam.
    Diverges for a noiseless channel (delta_T = 0) with nonzero sensitivity.
    """
    if delta_T < 0.0:
        raise DomainError("cat_state_qfi: delta_T must be >= 0")
    lam_eff = 2.0 * j * lam
    exponent = 8.0 * lam_eff**2 * delta_T
    signal = 4.0 * lam_eff**2 * d_delta_T
    if exponent > OVERFLOW_EXPONENT:
        return 0.0
    if exponent == 0.0:
        return 0.0 if signal == 0.0 else math.inf
    return signal * signal / math.expm1(exponent)


@dataclass(frozen=True)
class CatOptimalComparison:
    """Time-optimal rates of the cat protocol and of the channel bound."""

    cat_rate: float
    optimal_rate: float
    t_opt_cat: float
    t_opt_optimal: float


def compare_timeopt_cat_vs_optimal(
    j: float,
    lam: float,
    ev: DephasingEvaluator,
    bracket: Optional[tuple[float, float]] = None,
    grid_points: int = 48,
    restarts: int = _RESTARTS,
    seed: int = _DEFAULT_SEED,
) -> CatOptimalComparison:
    """Maximize T^2 QFI / t over t for the cat probe and for the channel bound.

    Both paths share the dephasing evaluator: the channel path evaluates the
    gauge-minimized QFI at dephasing value 4 lam^2 Delta_T(t) in dimension
    2j + 1, the cat path uses the closed two-level formula.
    """
    from .timeopt import optimize_rate  # local import to avoid a cycle

    if ev.temperature <= 0.0:
        raise DomainError("compare_timeopt_cat_vs_optimal: requires T > 0")
    probe = ProbeConfig(coupling=lam, theta=math.pi / 2.0, spin=j)
    cat = optimize_rate(probe, ev, bracket=bracket)

    d = probe.dimension
    omega_c = ev.sd.omega_c
    temp = ev.temperature
    if bracket is None:
        bracket = (1e-4 / omega_c, 1e3 / omega_c)

    def optimal_rate_at(t):
        delta = 4.0 * lam * lam * delta_kernel(ev, t)
        # outside this window the rate is numerically zero and the spectrum
        # of E is too clustered (fully coherent or fully dephased) to handle
        if not (_DELTA_FLOOR < delta < _DELTA_SATURATED):
            return 0.0
        d_delta = 4.0 * lam * lam * delta_dT(ev, t)
        qfi = channel_qfi(
            build_dephasing_matrix(d, delta, d_delta), restarts=restarts, seed=seed
        )
        return temp * temp * qfi / t

    grid = np.logspace(math.log10(bracket[0]), math.log10(bracket[1]), grid_points)
    rates = [optimal_rate_at(float(t)) for t in grid]
    idx = int(np.argmax(rates))
    lo = float(grid[max(idx - 1, 0)])
    hi = float(grid[min(idx + 1, grid_points - 1)])
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    c = b - golden * (b - a)
    e = a + golden * (b - a)
    fc, fe = optimal_rate_at(math.exp(c)), optimal_rate_at(math.exp(e))
    while (b - a) > 1e-6:
        if fc > fe:
            b, e, fe = e, c, fc
            c = b - golden * (b - a)
            fc = optimal_rate_at(math.exp(c))
        else:
            a, c, fc = c, e, fe
            e = a + golden * (b - a)
            fe = optimal_rate_at(math.exp(e))
    t_best = math.exp(c if fc > fe else e)
    best = max(fc, fe, rates[idx])
    if rates[idx] >= best:
        t_best = float(grid[idx])
        best = rates[idx]
    return CatOptimalComparison(
        cat_rate=cat.rate,
        optimal_rate=best,
        t_opt_cat=cat.t_opt,
        t_opt_optimal=t_best,
    )
