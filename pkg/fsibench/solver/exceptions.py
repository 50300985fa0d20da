"""
This file contains the outer solver exceptions.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .stats import SolveStats


class GmresBreakdown(Exception):
    """Exception raised when the Arnoldi Hessenberg matrix becomes singular."""

    def __init__(self, iteration: int, *args: Any) -> None:
        super().__init__(*args)
        self.iteration: int = iteration

    def __str__(self) -> str:
        return f"GMRES breakdown at iteration {self.iteration}"


class ForcingError(Exception):
    """Exception raised for invalid forcing term inputs."""


class NewtonFailure(Exception):
    """Exception raised when a time step's Newton iteration does not converge."""

    def __init__(self, step: int, stats: SolveStats, *args: Any) -> None:
        super().__init__(*args)
        self.step: int = step
        self.stats: SolveStats = stats

    def __str__(self) -> str:
        detail = f": {self.args[0]}" if self.args else ""
        return f"Newton failed in time step {self.step}{detail}"
