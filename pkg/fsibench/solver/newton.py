"""
Inexact Newton with adaptive forcing terms.

Each step assembles the Jacobian, builds a fresh preconditioner (setup phase) and runs
GMRES to the forcing tolerance (solve phase). A step that does not reduce the residual
norm enough is halved until it does (inexact Newton backtracking).
"""
from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np
import scipy.sparse as sp

from fsibench.utils.log import logger

from .forcing import ForcingConfig, forcing_term
from .gmres import GmresConfig, gmres
from .stats import NewtonStepStats

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from .gmres import Operator

log = logger(__name__)

ResidualFn = Callable[["NDArray[np.float64]"], "NDArray[np.float64]"]
JacobianFn = Callable[["NDArray[np.float64]"], Any]
PrecondFactory = Callable[[Any, "NDArray[np.float64]"], "Operator | None"]


@dataclass(frozen=True)
class NewtonConfig:
    """
    :param tol_rel: tolerance on the relative residual and on the relative update
    :param max_newton: Newton steps allowed per solve
    :param abs_floor: states with a smaller norm measure the update absolutely
    :param gmres_max_iter: Arnoldi steps per linear solve
    :param gmres_restart: GMRES cycle length, ``None`` for no restart
    :param max_backtracks: step halvings tried before a step is taken as is
    :param sufficient_decrease: ``t`` in the acceptance test
        ``||r(x + s dx)|| <= (1 - t (1 - eta) s) ||r(x)||``
    """

    tol_rel: float = 1e-8
    max_newton: int = 15
    abs_floor: float = 1e-12
    forcing: ForcingConfig = field(default_factory=ForcingConfig)
    gmres_max_iter: int = 500
    gmres_restart: int | None = None
    max_backtracks: int = 6
    sufficient_decrease: float = 1e-4

    def __post_init__(self) -> None:
        if not self.tol_rel > 0.0:
            raise ValueError(f"Newton tolerance must be positive, got {self.tol_rel}")
        if self.max_newton < 1:
            raise ValueError(f"Newton needs max_newton >= 1, got {self.max_newton}")
        if self.max_backtracks < 0:
            raise ValueError(
                f"Backtracking count must be nonnegative, got {self.max_backtracks}"
            )


@dataclass(frozen=True, eq=False)
class NewtonResult:
    state: NDArray[np.float64]
    converged: bool
    steps: list[NewtonStepStats]
    residual_norms: list[float]

    @property
    def iterations(self) -> int:
        return len(self.steps)


def as_operator(J: Any) -> Operator:
    """Matrix-vector product of a Jacobian given as a matrix, a block system or a
    callable."""

    if sp.issparse(J) or isinstance(J, np.ndarray):
        return lambda x: np.asarray(J @ x, dtype=float).ravel()
    if hasattr(J, "matvec"):
        matvec: Operator = J.matvec
        return matvec
    if callable(J):
        return J  # type: ignore[no-any-return]
    raise TypeError(f"Cannot apply a Jacobian of type {type(J).__name__}")


def _update_small(
    dx: NDArray[np.float64], x: NDArray[np.float64], cfg: NewtonConfig
) -> bool:
    x_norm = float(np.linalg.norm(x))
    scale = x_norm if x_norm > cfg.abs_floor else 1.0
    return float(np.linalg.norm(dx)) <= cfg.tol_rel * scale


def backtrack(
    residual_fn: ResidualFn,
    x: NDArray[np.float64],
    dx: NDArray[np.float64],
    norm0: float,
    eta: float,
    cfg: NewtonConfig,
) -> tuple[float, NDArray[np.float64], NDArray[np.float64]]:
    """Shorten ``dx`` until the residual norm decreases sufficiently.

    :return: the step length and the residual and state it reaches; after
        ``max_backtracks`` failed halvings the shortest step tried is returned
    """

    length = 1.0
    trial = x + dx
    r = residual_fn(trial)
    for _ in range(cfg.max_backtracks):
        bound = (1.0 - cfg.sufficient_decrease * (1.0 - eta) * length) * norm0
        if float(np.linalg.norm(r)) <= bound:
            break
        length *= 0.5
        trial = x + length * dx
        r = residual_fn(trial)
    return length, trial, r


def newton_solve(
    residual_fn: ResidualFn,
    jacobian_fn: JacobianFn,
    precond_factory: PrecondFactory | None,
    state0: ArrayLike,
    cfg: NewtonConfig | None = None,
) -> NewtonResult:
    """Solve ``residual_fn(x) = 0`` from ``state0``.

    Stops once ``||r_k|| / ||r_0|| <= tol_rel`` or ``||dx_k|| / ||x_k|| <= tol_rel``,
    where ``dx_k`` is the step actually taken.
    GMRES runs that miss their tolerance are flagged in the step statistics and the
    iteration continues with the returned iterate. Exceeding ``max_newton`` returns a
    non-converged result.
    """

    config = NewtonConfig() if cfg is None else cfg
    x = np.array(state0, dtype=float)
    r = residual_fn(x)
    r0 = float(np.linalg.norm(r))
    norms = [r0]
    steps: list[NewtonStepStats] = []
    if r0 == 0.0:
        return NewtonResult(x, True, steps, norms)

    eta_prev: float | None = None
    converged = False
    for k in range(config.max_newton):
        prev = norms[-2] if k > 0 else r0
        eta = forcing_term(prev, norms[-1], config.forcing, k, eta_prev)

        start = time.perf_counter()
        J = jacobian_fn(x)
        precond = None if precond_factory is None else precond_factory(J, x)
        setup_s = time.perf_counter() - start

        start = time.perf_counter()
        gmres_cfg = GmresConfig(
            tol=eta, max_iter=config.gmres_max_iter, restart=config.gmres_restart
        )
        linear = gmres(as_operator(J), precond, -r, gmres_cfg)
        solve_s = time.perf_counter() - start

        length, x, r = backtrack(residual_fn, x, linear.x, norms[-1], eta, config)
        dx = length * linear.x
        norm = float(np.linalg.norm(r))
        if length < 1.0:
            log.info("Newton %d: step shortened to %.4g", k + 1, length)
        norms.append(norm)
        steps.append(
            NewtonStepStats(
                newton_idx=k + 1,
                eta=eta,
                gmres_iters=linear.iters,
                rel_residual=norm / r0,
                setup_s=setup_s,
                solve_s=solve_s,
                gmres_converged=linear.converged,
                residual_history=tuple(linear.residual_history),
            )
        )
        log.info(
            "Newton %d: residual %.3e (rel %.3e), eta %.1e, %d GMRES iterations",
            k + 1,
            norm,
            norm / r0,
            eta,
            linear.iters,
        )
        if not linear.converged:
            log.warning("Newton %d continues with an inexact GMRES iterate", k + 1)
        eta_prev = eta
        if norm == 0.0 or norm / r0 <= config.tol_rel or _update_small(dx, x, config):
            converged = True
            break

    if not converged:
        log.warning(
            "Newton did not converge in %d steps (rel residual %.3e)",
            config.max_newton,
            norms[-1] / r0,
        )
    return NewtonResult(x, converged, steps, norms)
