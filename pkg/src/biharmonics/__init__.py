"""Biharmonic functions, bi-eigenfunctions, and buckling eigenfunctions on
spheres and warped-product model spaces, verified by high-order derivative
residuals computed in truncated-Taylor (jet) arithmetic."""

from .errors import (BiharmonicsError, ConstructionError, DomainError,
                     EvaluationError, FitError, QuadratureError,
                     SamplingError)
from .jets import (Jet1, Jet2, ScalarField, directional_derivatives,
                   euclidean_bilaplacian, euclidean_laplacian)

__all__ = [
    "BiharmonicsError", "ConstructionError", "DomainError",
    "EvaluationError", "FitError", "QuadratureError", "SamplingError",
    "Jet1", "Jet2", "ScalarField", "directional_derivatives",
    "euclidean_laplacian", "euclidean_bilaplacian",
]

__version__ = "0.1.0"
