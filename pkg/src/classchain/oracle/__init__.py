"""Brute-force enumeration of small classical groups."""

from .groups import (
    BudgetExceeded,
    IntegrityError,
    MatrixGroup,
    build_group,
    build_orthogonal,
    build_symplectic,
    build_unitary,
    class_statistics,
    isometry_statistics,
)

__all__ = [
    "BudgetExceeded",
    "IntegrityError",
    "MatrixGroup",
    "build_group",
    "build_orthogonal",
    "build_symplectic",
    "build_unitary",
    "class_statistics",
    "isometry_statistics",
]
