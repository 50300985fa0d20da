"""
This file contains the linear algebra exceptions.
"""

from __future__ import annotations

from typing import Any


class ConstructionError(Exception):
    """Exception raised when a sparse matrix cannot be built from its input."""


class DimensionMismatch(Exception):
    """Exception raised when operand sizes do not agree."""

    def __init__(self, expected: int, got: int, *args: Any) -> None:
        super().__init__(*args)
        self.expected: int = expected
        self.got: int = got

    def __str__(self) -> str:
        return f"Dimension mismatch: expected length {self.expected}, got {self.got}"


class IndexSetError(Exception):
    """Exception raised upon an unsorted, duplicated or out-of-range index set."""


class SingularMatrixError(Exception):
    """Exception raised when a dense factorization meets an exactly zero pivot."""

    def __init__(self, pivot: int, *args: Any) -> None:
        super().__init__(*args)
        self.pivot: int = pivot

    def __str__(self) -> str:
        return f"Matrix is singular: zero pivot at index {self.pivot}"


class MatrixMarketError(Exception):
    """Exception raised when a Matrix Market file cannot be read or written."""
