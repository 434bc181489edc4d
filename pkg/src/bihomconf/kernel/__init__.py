"""Polynomial arithmetic and exact linear algebra."""
from .poly import (D, ONE, PARAM_BASE, ZERO, Poly, X, monomials, param, shift_partial,
                   skew_substitute, substitute)
from .linalg import (LinearSystem, hermite_rows, hnf_membership, pm_det, pm_identity,
                     pm_inverse, pm_mul, rref_kernel, solve_affine)

__all__ = [
    "D", "ONE", "PARAM_BASE", "ZERO", "Poly", "X", "monomials", "param", "shift_partial",
    "skew_substitute", "substitute", "LinearSystem", "hermite_rows", "hnf_membership",
    "pm_det", "pm_identity", "pm_inverse", "pm_mul", "rref_kernel", "solve_affine",
]
