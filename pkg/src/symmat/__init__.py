"""Symmetric-matrix kernel."""

from .matrix import EigenDecomp, SymMat, eigenvalues, jacobi_eigenvalues
from .pucci import (
    Sign,
    pucci_extremal,
    pucci_from_eigenvalues,
    pucci_truncated,
    sorted_eigenvalues,
    validate_ellipticity,
)

__all__ = [
    "SymMat",
    "EigenDecomp",
    "eigenvalues",
    "jacobi_eigenvalues",
    "Sign",
    "pucci_extremal",
    "pucci_truncated",
    "pucci_from_eigenvalues",
    "sorted_eigenvalues",
    "validate_ellipticity",
]
