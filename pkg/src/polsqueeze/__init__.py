"""Exact quantum evolution and Stokes-parameter squeezing of three coupled modes
in a periodically poled crystal with two undepleted classical pumps."""

from .errors import DegenerateInputError, DomainError, RangeError
from .propagator import (
    CouplingRatios,
    PropagatorMatrix,
    lambda_matrix,
    lambda_oracle,
    stable_trig_kernels,
    symplectic_residual,
)

__all__ = [
    "CouplingRatios",
    "DegenerateInputError",
    "DomainError",
    "PropagatorMatrix",
    "RangeError",
    "lambda_matrix",
    "lambda_oracle",
    "stable_trig_kernels",
    "symplectic_residual",
]
