"""
SIMPLE and SIMPLEC block preconditioners.

Both approximate the saddle-point system ``[F Bt; B C]`` by the product

    [F 0; B S] [I H Bt / alpha; 0 I / alpha]

where ``H`` is a diagonal approximation of ``F^-1`` and ``S = C - B H Bt`` the
approximate Schur complement.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
import scipy.sparse as sp

from fsibench.linalg import DimensionMismatch, SparseMatrix, canonical, identity_rows
from fsibench.utils.log import logger

from .exceptions import HfError, InnerSolveError, SingularSchurError
from .inner import InnerSolverConfig, build_inner_solver
from .saddle import SaddleBlocks, has_pressure_nullspace

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from .inner import InnerSolver

log = logger(__name__)

VARIANTS: tuple[str, ...] = ("simple", "simplec")


def compute_hf(F: SparseMatrix, variant: str) -> NDArray[np.float64]:
    """Diagonal of ``H_F``: reciprocal diagonal (SIMPLE) or reciprocal absolute row
    sums (SIMPLEC).

    :raises HfError: naming the first row whose diagonal or row sum is not positive
    """

    if F.shape[0] != F.shape[1]:
        raise ValueError(f"F must be square, got shape {F.shape}")
    if variant == "simple":
        values = np.asarray(F.diagonal(), dtype=float)
    elif variant == "simplec":
        values = np.asarray(abs(F).sum(axis=1), dtype=float).ravel()
    else:
        raise ValueError(f"Unknown variant {variant!r}, expected one of {VARIANTS}")
    bad = np.flatnonzero(values <= 0.0)
    if bad.size:
        raise HfError(int(bad[0]), variant)
    hf: NDArray[np.float64] = 1.0 / values
    return hf


def schur_simple(blocks: SaddleBlocks, hf: NDArray[np.float64]) -> SparseMatrix:
    """``S = C - B diag(hf) Bt`` for the stored pressure block ``C``."""

    return canonical(blocks.C - blocks.B @ sp.diags(hf) @ blocks.Bt)


@dataclass(frozen=True, eq=False)
class SimplePreconditioner:
    """Factored SIMPLE/SIMPLEC approximation with its inner solvers."""

    variant: str
    alpha: float
    hf: NDArray[np.float64]
    schur_approx: SparseMatrix
    inner_F: InnerSolver
    inner_S: InnerSolver
    blocks: SaddleBlocks = field(repr=False)

    @property
    def n_u(self) -> int:
        return self.blocks.n_u

    @property
    def n_dofs(self) -> int:
        return self.blocks.n_u + self.blocks.n_p

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        """Apply to a flat ``(velocity, pressure)`` vector."""

        flat = np.asarray(r, dtype=float)
        if flat.shape != (self.n_dofs,):
            raise DimensionMismatch(self.n_dofs, flat.size)
        z_u, z_p = apply_simple(self, flat[: self.n_u], flat[self.n_u :])
        return np.concatenate([z_u, z_p])


def build_simple(
    blocks: SaddleBlocks,
    variant: str = "simplec",
    alpha: float = 1.0,
    inner_F: InnerSolverConfig | None = None,
    inner_S: InnerSolverConfig | None = None,
) -> SimplePreconditioner:
    """Assemble ``S_SIMPLE`` and set up both inner solvers.

    Without configurations the inner solves are exact. An enclosed-flow pressure
    constant is removed by pinning the first pressure DoF of ``S_SIMPLE``.

    :raises SingularSchurError: if ``S_SIMPLE`` is zero or singular
    """

    if blocks.Bt.shape != (blocks.n_u, blocks.n_p) or blocks.B.shape != (
        blocks.n_p,
        blocks.n_u,
    ):
        raise ValueError("Inconsistent saddle-point block shapes")
    if alpha <= 0.0:
        raise ValueError(f"Damping alpha must be positive, got {alpha}")
    start = time.perf_counter()
    hf = compute_hf(blocks.F, variant)
    S = schur_simple(blocks, hf)
    if S.count_nonzero() == 0:
        raise SingularSchurError(f"{variant.upper()} Schur approximation is zero")
    if has_pressure_nullspace(blocks):
        log.info("Pinning pressure DoF 0 of the %s Schur approximation", variant)
        S = identity_rows(S, np.array([0]))

    F_cfg = InnerSolverConfig() if inner_F is None else inner_F
    S_cfg = InnerSolverConfig() if inner_S is None else inner_S
    solve_F = build_inner_solver(blocks.F, F_cfg, "F")
    try:
        solve_S = build_inner_solver(S, S_cfg, "S_SIMPLE")
    except InnerSolveError as exc:
        if S_cfg.kind == "exact":
            raise SingularSchurError(str(exc)) from exc
        raise
    log.info(
        "%s setup (alpha=%g) in %.4f s",
        variant.upper(),
        alpha,
        time.perf_counter() - start,
    )
    return SimplePreconditioner(
        variant=variant,
        alpha=alpha,
        hf=hf,
        schur_approx=S,
        inner_F=solve_F,
        inner_S=solve_S,
        blocks=blocks,
    )


def apply_simple(
    M: SimplePreconditioner, r_u: ArrayLike, r_p: ArrayLike
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Invert the lower then the upper factor.

    ``y_u = F^-1 r_u``, ``y_p = S^-1 (r_p - B y_u)``, ``z_p = alpha y_p`` and
    ``z_u = y_u - H Bt z_p / alpha``.
    """

    ru = np.asarray(r_u, dtype=float)
    rp = np.asarray(r_p, dtype=float)
    if ru.shape != (M.n_u,):
        raise DimensionMismatch(M.n_u, ru.size)
    if rp.shape != (M.blocks.n_p,):
        raise DimensionMismatch(M.blocks.n_p, rp.size)
    y_u = M.inner_F(ru)
    y_p = M.inner_S(rp - M.blocks.B @ y_u)
    z_p = M.alpha * y_p
    z_u = y_u - M.hf * (M.blocks.Bt @ z_p) / M.alpha
    return z_u, z_p


def simple_product(M: SimplePreconditioner) -> NDArray[np.float64]:
    """Dense product of the two factors, for small oracle checks."""

    n_u, n_p = M.n_u, M.blocks.n_p
    F = M.blocks.F.toarray()
    B = M.blocks.B.toarray()
    HBt = M.hf[:, None] * M.blocks.Bt.toarray()
    lower = np.block([[F, np.zeros((n_u, n_p))], [B, M.schur_approx.toarray()]])
    upper = np.block(
        [[np.eye(n_u), HBt / M.alpha], [np.zeros((n_p, n_u)), np.eye(n_p) / M.alpha]]
    )
    product: NDArray[np.float64] = lower @ upper
    return product
