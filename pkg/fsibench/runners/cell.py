"""
Runner for one cell of a benchmark sweep.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Any

from .generic import GenericRunner

if TYPE_CHECKING:
    from collections.abc import Callable

    from fsibench.solver import SolveStats


class CellRunner(GenericRunner):
    """Solve one (flow rate, subdomain count, preconditioner, seed) cell.

    A failing cell leaves its error on the runner so the sweep can record a failed
    row and move on.
    """

    def __init__(self, label: str, solve: Callable[[], SolveStats], **callbacks: Any):
        super().__init__(solve, **callbacks)
        self.label = label

    @property
    def name(self) -> str:
        return f"{self.__class__.__name__}[{self.label}]"

    @property
    def stats(self) -> SolveStats | None:
        stats: SolveStats | None = self.result_value
        return stats

    @property
    def message(self) -> str:
        """One-line description of the failure, empty on success."""

        if self.error is None:
            return ""
        exc_type, value, _ = self.error
        return f"{exc_type.__name__}: {value}"
