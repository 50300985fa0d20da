"""
The time loop binding assembly, preconditioner setup and Newton solves.
"""
from __future__ import annotations

from collections.abc import Callable
from typing import TYPE_CHECKING, Any, Protocol

import numpy as np

from fsibench.utils.log import logger

from .exceptions import NewtonFailure
from .newton import NewtonConfig, newton_solve
from .stats import SolveStats, TimestepStats

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from .gmres import Operator

log = logger(__name__)


class TimeProblem(Protocol):
    """A time-dependent problem solved by one nonlinear solve per step.

    ``begin_step`` prepares the time-discrete history of step ``n``, ``end_step``
    commits the converged state and returns the monitored quantities.
    """

    dt: float

    def initial_state(self) -> NDArray[np.float64]:
        ...

    def begin_step(self, step: int, time: float, flow_rate: float) -> None:
        ...

    def residual(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        ...

    def jacobian(self, x: NDArray[np.float64]) -> Any:
        ...

    def preconditioner(self, J: Any, x: NDArray[np.float64]) -> Operator | None:
        ...

    def end_step(self, x: NDArray[np.float64]) -> dict[str, float]:
        ...


def time_loop(
    problem: TimeProblem,
    schedule: Callable[[float], float] | None,
    n_steps: int,
    cfg: NewtonConfig | None = None,
) -> SolveStats:
    """Advance ``n_steps`` steps of size ``problem.dt``.

    :param schedule: inflow rate as a function of time, zero if ``None``
    :raises NewtonFailure: with the step index and the statistics gathered so far
    """

    if n_steps < 1:
        raise ValueError(f"Need at least one time step, got {n_steps}")
    stats = SolveStats()
    x = problem.initial_state()
    for step in range(1, n_steps + 1):
        t = step * problem.dt
        flow_rate = 0.0 if schedule is None else float(schedule(t))
        problem.begin_step(step, t, flow_rate)
        result = newton_solve(
            problem.residual, problem.jacobian, problem.preconditioner, x, cfg
        )
        record = TimestepStats(step, t, result.steps, result.converged)
        stats.add(record)
        if not result.converged:
            raise NewtonFailure(
                step, stats, f"{result.iterations} Newton steps did not converge"
            )
        x = result.state
        record.monitors = problem.end_step(x)
        log.info(
            "Time step %d (t=%.4f s): %d Newton, %.2f GMRES per Newton",
            step,
            t,
            record.newton_iters,
            record.avg_gmres,
        )
    return stats
