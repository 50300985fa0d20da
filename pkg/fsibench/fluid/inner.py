"""
Inner solvers shared by the block preconditioners.

An inner solver approximates ``K^-1`` applied to a vector: an exact dense
factorization, a one- or two-level Schwarz preconditioner, or either of those wrapped
in a preconditioned GMRES loop.
"""
from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from fsibench.linalg import SingularMatrixError, dense_lu_factor
from fsibench.schwarz import CoarseSpaceError, SubdomainSolveError, build_schwarz
from fsibench.solver.exceptions import GmresBreakdown
from fsibench.solver.gmres import GmresConfig, gmres
from fsibench.utils.log import logger

from .exceptions import InnerSolveError

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from fsibench.linalg import SparseMatrix
    from fsibench.partition import Decomposition

log = logger(__name__)

InnerSolver = Callable[["NDArray[np.float64]"], "NDArray[np.float64]"]

INNER_KINDS: tuple[str, ...] = ("exact", "schwarz")


@dataclass(frozen=True, eq=False)
class InnerSolverConfig:
    """How to approximate one diagonal block.

    :param kind: ``exact`` (dense LU) or ``schwarz``
    :param decomp: decomposition of the block's DoFs, required for ``schwarz``
    :param levels: Schwarz levels
    :param coarse_kind: coarse space of the two-level method
    :param nullspace: nullspace vectors of the block's operator; constants if unset
    :param krylov: iterate to ``krylov_tol`` with GMRES instead of applying once
    """

    kind: str = "exact"
    decomp: Decomposition | None = None
    levels: int = 2
    coarse_kind: str = "rgdsw"
    nullspace: NDArray[np.float64] | None = None
    krylov: bool = False
    krylov_tol: float = 1e-10
    krylov_max_iter: int = 500

    def __post_init__(self) -> None:
        if self.kind not in INNER_KINDS:
            raise ValueError(f"Unknown inner solver {self.kind!r}")
        if self.kind == "schwarz" and self.decomp is None:
            raise ValueError("A Schwarz inner solver needs a decomposition")


def krylov_solver(
    K: SparseMatrix, precond: InnerSolver, cfg: InnerSolverConfig, stage: str
) -> InnerSolver:
    """Iterate GMRES on ``K`` with ``precond`` to the configured tolerance.

    A solve that misses the tolerance returns its last iterate and logs a warning
    naming the stage.
    """

    gmres_cfg = GmresConfig(tol=cfg.krylov_tol, max_iter=cfg.krylov_max_iter)

    def solve(r: NDArray[np.float64]) -> NDArray[np.float64]:
        try:
            result = gmres(lambda x: K @ x, precond, r, gmres_cfg)
        except GmresBreakdown as exc:
            raise InnerSolveError(stage, str(exc)) from exc
        if not result.converged:
            log.warning(
                "Inner solve %s stopped at relative residual %.3e after %d iterations",
                stage,
                result.relative_residual,
                result.iters,
            )
        return result.x

    return solve


def build_inner_solver(
    K: SparseMatrix, cfg: InnerSolverConfig, stage: str
) -> InnerSolver:
    """Set up the approximation of ``K^-1``.

    :param stage: name reported in errors, such as ``F`` or ``S_SIMPLE``
    :raises InnerSolveError: if a factorization fails
    """

    try:
        if cfg.kind == "exact":
            precond: InnerSolver = dense_lu_factor(K).solve
        else:
            assert cfg.decomp is not None
            precond = build_schwarz(
                K,
                cfg.decomp,
                levels=cfg.levels,
                coarse_kind=cfg.coarse_kind,
                nullspace=cfg.nullspace,
            )
    except (SingularMatrixError, SubdomainSolveError, CoarseSpaceError) as exc:
        raise InnerSolveError(stage, str(exc)) from exc
    if cfg.krylov:
        return krylov_solver(K, precond, cfg, stage)
    return precond
