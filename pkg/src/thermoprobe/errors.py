"""Shared exception types."""


class PoleError(ValueError):
    """A function was evaluated at (or too close to) a pole."""


class DomainError(ValueError):
    """Input lies outside the supported parameter domain."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, value=None, achieved_error=None):
        super().__init__(message)
        self.value = value
        self.achieved_error = achieved_error


class DegenerateSpectrumError(RuntimeError):
    """Eigenvalue gap below tolerance; perturbative derivatives undefined."""


class InformationFreeError(RuntimeError):
    """Objective is flat at numerical zero; no informative optimum exists."""


class OptimizerError(RuntimeError):
    """Numerical minimization did not converge."""

    def __init__(self, message, best_value=None, gradient_norm=None):
        super().__init__(message)
        self.best_value = best_value
        self.gradient_norm = gradient_norm
