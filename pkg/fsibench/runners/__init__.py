from .cell import CellRunner
from .check import CheckOutcome, CheckRunner
from .generic import GenericRunner, RunnerError, RunnerKilledException, RunnerStatus

__all__ = [
    "CellRunner",
    "CheckOutcome",
    "CheckRunner",
    "GenericRunner",
    "RunnerError",
    "RunnerKilledException",
    "RunnerStatus",
]
