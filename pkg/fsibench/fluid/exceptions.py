"""
This file contains the fluid preconditioner exceptions.
"""

from __future__ import annotations

from typing import Any


class HfError(Exception):
    """Exception raised when the diagonal velocity approximation is not positive."""

    def __init__(self, row: int, variant: str, *args: Any) -> None:
        super().__init__(*args)
        self.row: int = row
        self.variant: str = variant

    def __str__(self) -> str:
        quantity = "diagonal entry" if self.variant == "simple" else "absolute row sum"
        return f"Nonpositive {quantity} in row {self.row} ({self.variant.upper()})"


class SingularSchurError(Exception):
    """Exception raised when the approximate Schur complement is singular."""


class InnerSolveError(Exception):
    """Exception raised when an inner solver fails to build or to apply."""

    def __init__(self, stage: str, *args: Any) -> None:
        super().__init__(*args)
        self.stage: str = stage

    def __str__(self) -> str:
        detail = f": {self.args[0]}" if self.args else ""
        return f"Inner solve {self.stage!r} failed{detail}"
