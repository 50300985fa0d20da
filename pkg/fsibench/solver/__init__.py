"""
Import the outer solvers.
"""
from .exceptions import ForcingError, GmresBreakdown, NewtonFailure
from .forcing import ForcingConfig, forcing_term
from .gmres import GmresConfig, GmresResult, Operator, gmres
from .integrators import (
    BDF_COEFFICIENTS,
    BdfHistory,
    NewmarkScheme,
    NewmarkState,
    bdf_coefficients,
    energy,
)
from .models import DecayProblem, OscillatorProblem
from .newton import NewtonConfig, NewtonResult, as_operator, newton_solve
from .schedules import SCHEDULES, RampPlateau, RampPlateauPulse, make_schedule
from .stats import (
    CSV_HEADER,
    NewtonStepStats,
    SolveStats,
    TimestepStats,
    averages_from_csv,
)
from .timeloop import TimeProblem, time_loop

__all__ = [
    "ForcingError",
    "GmresBreakdown",
    "NewtonFailure",
    "ForcingConfig",
    "forcing_term",
    "GmresConfig",
    "GmresResult",
    "Operator",
    "gmres",
    "BDF_COEFFICIENTS",
    "BdfHistory",
    "NewmarkScheme",
    "NewmarkState",
    "bdf_coefficients",
    "energy",
    "DecayProblem",
    "OscillatorProblem",
    "NewtonConfig",
    "NewtonResult",
    "as_operator",
    "newton_solve",
    "SCHEDULES",
    "RampPlateau",
    "RampPlateauPulse",
    "make_schedule",
    "CSV_HEADER",
    "NewtonStepStats",
    "SolveStats",
    "TimestepStats",
    "averages_from_csv",
    "TimeProblem",
    "time_loop",
]
