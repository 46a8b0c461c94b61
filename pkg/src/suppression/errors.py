"""Exception hierarchy shared by every module."""


class SuppressionError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SuppressionError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UsageError(SuppressionError, ValueError):
    """An operation was called with an invalid configuration."""


class DivergentIntegral(SuppressionError):
    """Symbolic refusal: the requested integral does not converge.

    The deciding :class:`~suppression.quadrature.ConvergenceVerdict` is kept
    on ``verdict``.
    """

    def __init__(self, verdict, operation=""):
        self.verdict = verdict
        self.operation = operation
        where = f"{operation}: " if operation else ""
        super().__init__(
            f"{where}divergent ({verdict.deciding_inequality} fails, "
            f"margin {verdict.margin:.6g})"
        )


class ConvergenceFailure(SuppressionError):
    """A numerical procedure did not reach its tolerance."""


class ClassifierDisagreement(ConvergenceFailure):
    """The classifier predicted convergence but quadrature did not converge."""


class BandSensitivityError(ConvergenceFailure):
    """The diagonal exclusion band changed the result beyond tolerance."""


class IllDefinedGaussianMode(SuppressionError):
    """``1 - Omega(k)`` is not positive somewhere, so ln Z does not exist."""

    def __init__(self, k, complement):
        self.k = k
        self.complement = complement
        super().__init__(
            f"log_partition: ill-defined Gaussian mode at k={k:.6g} "
            f"(1 - Omega = {complement:.6g} must be > 0)"
        )
