"""Exception types shared across the package."""


class BiharmonicsError(Exception):
    """Base class for all package errors."""


class DomainError(BiharmonicsError, ValueError):
    """Input outside the declared domain (dimension mismatch, r outside the
    warp interval, non-unit sphere point beyond the renormalization band)."""


class EvaluationError(BiharmonicsError, ArithmeticError):
    """Numeric evaluation failed: singularity hit, non-finite jet
    coefficient, or overflow inside an elementary function."""


class ConstructionError(BiharmonicsError, ValueError):
    """A domain object violates its construction invariants
    (e.g. a warp function that is not positive on its domain)."""


class QuadratureError(BiharmonicsError, ArithmeticError):
    """Adaptive quadrature failed to converge at the maximum subdivision
    depth.  Carries the best estimate and the achieved error bound."""

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class FitError(BiharmonicsError, ValueError):
    """A least-squares comparison was ill-conditioned (rank-deficient
    design matrix) or had too few samples to be meaningful."""


class SamplingError(BiharmonicsError, RuntimeError):
    """Too many sample points had to be excluded from a residual sweep."""
