"""Accuracy versus invasiveness of pure-dephasing quantum thermometry.

Library + CLI for the sensitivity (quantum Fisher information / QSNR) and
sample heating of a spin probe dephasing in a bosonic environment, with
time-optimal protocol search and channel-level optimality bounds for
collective spin probes.
"""

__version__ = "0.1.0"

from .channel import (
    CatOptimalComparison,
    DephasingMatrix,
    KrausSet,
    build_dephasing_matrix,
    cat_state_qfi,
    channel_qfi,
    compare_timeopt_cat_vs_optimal,
    kraus_from_matrix,
)
from .dephasing import (
    DephasingEvaluator,
    DephasingMethod,
    delta_closed_exp,
    delta_dT,
    delta_kernel,
)
from .errors import (
    DegenerateSpectrumError,
    DomainError,
    InformationFreeError,
    OptimizerError,
    PoleError,
    QuadratureError,
)
from .metrology import (
    QfiPoint,
    classical_fisher_x,
    low_T_qfi,
    qfi_temperature,
    x_outcome_probabilities,
)
from .special import gamma, hurwitz_zeta, hyp1f1, hyp1f2
from .spectral import CutoffKind, SpectralDensity, eval_j, integrate_kernel
from .thermo import (
    HeatMethod,
    HeatResult,
    ProbeConfig,
    absorbed_heat,
    q_asymptotic,
    q_kernel,
)
from .timeopt import (
    ShortTimeCoeffs,
    SweepRow,
    TimeOptResult,
    optimize_rate,
    short_time_coeffs,
    sweep,
)

__all__ = [
    "__version__",
    "CutoffKind",
    "SpectralDensity",
    "eval_j",
    "integrate_kernel",
    "DephasingEvaluator",
    "DephasingMethod",
    "delta_kernel",
    "delta_dT",
    "delta_closed_exp",
    "ProbeConfig",
    "HeatResult",
    "HeatMethod",
    "q_kernel",
    "absorbed_heat",
    "q_asymptotic",
    "QfiPoint",
    "qfi_temperature",
    "classical_fisher_x",
    "x_outcome_probabilities",
    "low_T_qfi",
    "TimeOptResult",
    "ShortTimeCoeffs",
    "SweepRow",
    "optimize_rate",
    "short_time_coeffs",
    "sweep",
    "DephasingMatrix",
    "KrausSet",
    "CatOptimalComparison",
    "build_dephasing_matrix",
    "kraus_from_matrix",
    "channel_qfi",
    "cat_state_qfi",
    "compare_timeopt_cat_vs_optimal",
    "gamma",
    "hurwitz_zeta",
    "hyp1f1",
    "hyp1f2",
    "PoleError",
    "DomainError",
    "QuadratureError",
    "DegenerateSpectrumError",
    "InformationFreeError",
    "OptimizerError",
]
