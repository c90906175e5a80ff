"""Toeplitz matrices built from scaled kernels and permutation displacements.

Constructions, closed-form predictions and independent oracle computations
(exhaustive enumeration, quadrature, a dense Jacobi eigensolver), tied
together by a machine-readable discrepancy report.
"""

from .errors import (
    ConvergenceError,
    DimensionError,
    DomainError,
    SizeGuardError,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DimensionError",
    "DomainError",
    "SizeGuardError",
]
