"""
Right-preconditioned GMRES.

Arnoldi uses modified Gram-Schmidt with one reorthogonalization pass and Givens
rotations for the least-squares update. Convergence is decided on the true residual
``||b - A x|| <= tol ||b||`` of each cycle's iterate; a cycle that only converged in
the rotated estimate is followed by a restart.
"""
from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

from fsibench.linalg import DimensionMismatch
from fsibench.utils.log import logger

from .exceptions import GmresBreakdown

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

log = logger(__name__)

Operator = Callable[["NDArray[np.float64]"], "NDArray[np.float64]"]


@dataclass(frozen=True)
class GmresConfig:
    """
    :param tol: relative residual target
    :param max_iter: total Arnoldi steps over all cycles
    :param restart: cycle length; ``None`` runs a single cycle
    """

    tol: float = 1e-8
    max_iter: int = 500
    restart: int | None = None

    def __post_init__(self) -> None:
        if not self.tol > 0.0:
            raise ValueError(f"GMRES tolerance must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"GMRES needs max_iter >= 1, got {self.max_iter}")
        if self.restart is not None and self.restart < 1:
            raise ValueError(f"GMRES restart must be positive, got {self.restart}")


@dataclass(frozen=True, eq=False)
class GmresResult:
    """
    :param residual_history: relative residual estimates, starting with the initial
        residual; each restart cycle continues from its own Givens estimates, so the
        record can rise across cycles
    :param relative_residual: true relative residual of ``x``
    """

    x: NDArray[np.float64]
    iters: int
    residual_history: list[float] = field(default_factory=list)
    converged: bool = True
    relative_residual: float = 0.0


def gmres(
    apply_A: Operator,
    apply_M: Operator | None,
    b: ArrayLike,
    cfg: GmresConfig | None = None,
    x0: ArrayLike | None = None,
) -> GmresResult:
    """Solve ``A M^-1 y = b`` and return ``x = M^-1 y``.

    :param apply_M: application of the preconditioner inverse, identity if ``None``
    :raises GmresBreakdown: if the Hessenberg matrix is singular before convergence
    """

    config = GmresConfig() if cfg is None else cfg
    rhs = np.asarray(b, dtype=float)
    n = rhs.size
    precond: Operator = (lambda v: v) if apply_M is None else apply_M
    b_norm = float(np.linalg.norm(rhs))
    if b_norm == 0.0:
        return GmresResult(np.zeros(n), 0, [0.0], True, 0.0)

    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    if x.shape != rhs.shape:
        raise DimensionMismatch(n, x.size)
    history: list[float] = []
    total = 0
    cycle = config.restart or config.max_iter
    while True:
        r = rhs - apply_A(x)
        if r.shape != rhs.shape:
            raise DimensionMismatch(n, r.size)
        beta = float(np.linalg.norm(r))
        true_rel = beta / b_norm
        if not history:
            history.append(true_rel)
        if true_rel <= config.tol or total >= config.max_iter:
            break

        m = min(cycle, config.max_iter - total)
        V = np.zeros((m + 1, n))
        H = np.zeros((m + 1, m))
        cs = np.zeros(m)
        sn = np.zeros(m)
        g = np.zeros(m + 1)
        V[0] = r / beta
        g[0] = beta
        k = 0
        for j in range(m):
            w = apply_A(precond(V[j]))
            for _ in range(2):
                # second pass reorthogonalizes
                for i in range(j + 1):
                    h = float(V[i] @ w)
                    H[i, j] += h
                    w = w - h * V[i]
            h_next = float(np.linalg.norm(w))
            H[j + 1, j] = h_next
            for i in range(j):
                upper = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
                H[i + 1, j] = -sn[i] * H[i, j] + cs[i] * H[i + 1, j]
                H[i, j] = upper
            denom = math.hypot(H[j, j], H[j + 1, j])
            if denom == 0.0:
                raise GmresBreakdown(total + j + 1)
            cs[j] = H[j, j] / denom
            sn[j] = H[j + 1, j] / denom
            H[j, j] = denom
            H[j + 1, j] = 0.0
            g[j + 1] = -sn[j] * g[j]
            g[j] = cs[j] * g[j]
            k = j + 1
            estimate = abs(g[j + 1]) / b_norm
            history.append(estimate)
            if estimate <= config.tol or h_next == 0.0:
                break
            V[j + 1] = w / h_next
        total += k
        y = scipy.linalg.solve_triangular(H[:k, :k], g[:k], check_finite=False)
        x = x + precond(V[:k].T @ y)

    converged = true_rel <= config.tol
    if not converged:
        log.warning(
            "GMRES stopped after %d iterations at relative residual %.3e (tol %.1e)",
            total,
            true_rel,
            config.tol,
        )
    return GmresResult(x, total, history, converged, true_rel)
