"""
This file contains the benchmark harness exceptions and the mapping of failures to
command-line exit codes.
"""

from __future__ import annotations

from functools import wraps
from typing import TYPE_CHECKING, Any

from fsibench.facsi import FacsiStageError
from fsibench.fem import AssemblyError, CouplingError, MeshError
from fsibench.fluid import HfError, InnerSolveError, SingularSchurError
from fsibench.linalg import SingularMatrixError
from fsibench.partition import PartitionError
from fsibench.schwarz import CoarseSpaceError, SubdomainSolveError
from fsibench.solver import GmresBreakdown, NewtonFailure
from fsibench.utils.log import logger

if TYPE_CHECKING:
    from collections.abc import Callable

log = logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_ACCEPTANCE = 3


class ConfigError(Exception):
    """Exception raised for an unreadable or invalid benchmark config."""

    def __init__(self, line: int | None, *args: Any) -> None:
        super().__init__(*args)
        self.line: int | None = line

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line is not None else ""
        detail = self.args[0] if self.args else "invalid config"
        return f"{where}{detail}"


class SweepFailure(Exception):
    """Exception raised after a sweep in which some cells failed."""

    def __init__(self, failed: int, total: int) -> None:
        super().__init__()
        self.failed: int = failed
        self.total: int = total

    def __str__(self) -> str:
        return f"{self.failed} of {self.total} sweep cells failed"


class AcceptanceFailure(Exception):
    """Exception raised when one or more acceptance checks fail."""

    def __init__(self, failed: list[str], *args: Any) -> None:
        super().__init__(*args)
        self.failed: list[str] = failed

    def __str__(self) -> str:
        names = ", ".join(self.failed)
        return f"{len(self.failed)} acceptance check(s) failed: {names}"


SOLVER_ERRORS: tuple[type[Exception], ...] = (
    SweepFailure,
    NewtonFailure,
    GmresBreakdown,
    FacsiStageError,
    InnerSolveError,
    HfError,
    SingularSchurError,
    SubdomainSolveError,
    CoarseSpaceError,
    SingularMatrixError,
    PartitionError,
    AssemblyError,
    CouplingError,
    MeshError,
)


def exit_code(func: Callable[..., Any]) -> Callable[..., int]:
    """Decorates command functions to turn exceptions into exit codes."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> int:
        """Run the command and log any failure it raises."""

        try:
            func(*args, **kwargs)
        except ConfigError as exc:
            log.error("Config error: %s", exc)
            return EXIT_CONFIG
        except OSError as exc:
            log.error("Cannot access %s: %s", exc.filename, exc.strerror)
            return EXIT_CONFIG
        except AcceptanceFailure as exc:
            log.error("%s", exc)
            return EXIT_ACCEPTANCE
        except SOLVER_ERRORS as exc:
            log.error("Solver failure: %s", exc)
            return EXIT_SOLVER
        return EXIT_OK

    return wrapper
