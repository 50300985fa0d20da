"""
The FaCSI preconditioner.

The coupled Jacobian without ``C4`` factors exactly as ``B_S B_G B_F``:

    B_S = diag(S, I, I, I)
    B_G = [I 0 0 0; C5 G 0 0; 0 0 I 0; 0 0 0 I]
    B_F = [I 0 0 0; 0 I 0 0; 0 D F C3; C2 0 C1 0]

(block rows solid, geometry, fluid, interface). The preconditioner applies
``B_F^-1 B_G^-1 B_S^-1`` with inner approximations of ``S^-1``, ``G^-1`` and
``F_II^-1``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from fsibench.fluid import (
    InnerSolveError,
    InnerSolverConfig,
    SaddleBlocks,
    build_inner_solver,
    build_monolithic_fluid,
    build_simple,
    krylov_solver,
)
from fsibench.linalg import BlockVector, DimensionMismatch
from fsibench.partition import restrict_to_dofs
from fsibench.schwarz import CoarseSpaceError, SubdomainSolveError
from fsibench.utils.log import logger

from .condensation import CondensedFluid, condense_fluid
from .exceptions import FacsiStageError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from fsibench.fem import BlockSystem
    from fsibench.fluid import InnerSolver
    from fsibench.linalg import SparseMatrix
    from fsibench.partition import Decomposition

log = logger(__name__)

INNER_FLUID: tuple[str, ...] = ("monolithic", "simple", "simplec", "exact")
INNER_BLOCK: tuple[str, ...] = ("schwarz", "exact")

_BUILD_ERRORS = (InnerSolveError, SubdomainSolveError, CoarseSpaceError, ValueError)


@dataclass(frozen=True, eq=False)
class FacsiConfig:
    """Inner solver choices of FaCSI.

    :param decomps: decompositions keyed ``solid``, ``geometry``, ``fluid`` (coupled
        velocity-pressure numbering), ``velocity`` and ``pressure``; needed by every
        Schwarz-based choice
    :param nullspaces: nullspace vectors keyed ``solid``, ``geometry`` and
        ``velocity`` over the full field; constants when missing
    """

    inner_fluid: str = "exact"
    inner_solid: str = "exact"
    inner_geometry: str = "exact"
    inner_krylov: bool = False
    levels: int = 2
    coarse_velocity: str = "gdsw"
    coarse_pressure: str = "rgdsw"
    coarse_solid: str = "gdsw"
    coarse_geometry: str = "gdsw"
    simple_alpha: float = 1.0
    decomps: dict[str, Decomposition] = field(default_factory=dict)
    nullspaces: dict[str, NDArray[np.float64]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.inner_fluid not in INNER_FLUID:
            raise ValueError(f"Unknown inner fluid solver {self.inner_fluid!r}")
        for name in (self.inner_solid, self.inner_geometry):
            if name not in INNER_BLOCK:
                raise ValueError(f"Unknown inner solver {name!r}")


@dataclass(frozen=True, eq=False)
class FacsiPreconditioner:
    system: BlockSystem
    inner_S: InnerSolver
    inner_G: InnerSolver
    inner_FII: InnerSolver
    fluid: CondensedFluid

    @property
    def n_dofs(self) -> int:
        return self.system.n_dofs

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        flat = np.asarray(r, dtype=float)
        if flat.shape != (self.n_dofs,):
            raise DimensionMismatch(self.n_dofs, flat.size)
        z = apply_facsi(self, BlockVector.from_array(self.system.layout, flat))
        return z.to_array()


def apply_bs_inv(r: BlockVector, inner_S: InnerSolver) -> BlockVector:
    """Replace the solid segment by ``S^-1 r_s``."""

    return r.replace(solid=inner_S(r["solid"]))


def apply_bg_inv(
    r: BlockVector, inner_G: InnerSolver, C5: SparseMatrix
) -> BlockVector:
    """Replace the geometry segment by ``G^-1 (r_g - C5 x_s)``."""

    return r.replace(geometry=inner_G(r["geometry"] - C5 @ r["solid"]))


def apply_bf_inv(
    r: BlockVector, inner_FII: InnerSolver, blocks: CondensedFluid
) -> BlockVector:
    """Invert the fluid factor by static condensation.

    Fluid rows lose ``D x_g``, the interface rows lose ``C2 x_s``; the interface
    velocities take the interface residual, the interior fluid DoFs come from
    ``inner_FII`` and the multiplier from the interface momentum rows.
    """

    split = blocks.split
    velocity = r["fluid_velocity"] - blocks.D @ r["geometry"]
    f = np.concatenate([velocity, r["fluid_pressure"]])
    x_gamma = r["interface"] - blocks.C2 @ r["solid"]

    x_f = np.zeros(split.n_u + split.n_p)
    x_f[split.gamma] = x_gamma
    x_f[split.interior] = inner_FII(f[split.interior] - blocks.F_IG @ x_gamma)
    lam = blocks.multiplier(f, x_f)
    return r.replace(
        fluid_velocity=x_f[: split.n_u],
        fluid_pressure=x_f[split.n_u :],
        interface=lam,
    )


def apply_facsi(M: FacsiPreconditioner, r: BlockVector) -> BlockVector:
    """``B_F^-1 B_G^-1 B_S^-1 r``.

    :raises FacsiStageError: naming the stage whose inner solve failed
    """

    stages = (
        ("B_S", lambda v: apply_bs_inv(v, M.inner_S)),
        ("B_G", lambda v: apply_bg_inv(v, M.inner_G, M.system["C5"])),
        ("B_F", lambda v: apply_bf_inv(v, M.inner_FII, M.fluid)),
    )
    z = r
    for stage, apply in stages:
        try:
            z = apply(z)
        except InnerSolveError as exc:
            raise FacsiStageError(stage, str(exc)) from exc
    return z


def _block_config(
    cfg: FacsiConfig, kind: str, name: str, coarse: str
) -> InnerSolverConfig:
    if kind == "exact":
        return InnerSolverConfig(krylov=cfg.inner_krylov)
    if name not in cfg.decomps:
        raise ValueError(f"A Schwarz {name} solver needs a {name} decomposition")
    return InnerSolverConfig(
        kind="schwarz",
        decomp=cfg.decomps[name],
        levels=cfg.levels,
        coarse_kind=coarse,
        nullspace=cfg.nullspaces.get(name),
        krylov=cfg.inner_krylov,
    )


def _fluid_solver(blocks: CondensedFluid, cfg: FacsiConfig) -> InnerSolver:
    split = blocks.split
    n_ui = split.n_interior_velocity
    interior_u = split.interior[:n_ui]
    velocity_modes = cfg.nullspaces.get("velocity")
    if velocity_modes is not None:
        velocity_modes = velocity_modes[interior_u]

    if cfg.inner_fluid == "exact":
        return build_inner_solver(
            blocks.F_II, InnerSolverConfig(krylov=cfg.inner_krylov), "F_II"
        )
    if cfg.inner_fluid == "monolithic":
        if "fluid" not in cfg.decomps:
            raise ValueError("A monolithic fluid solver needs a fluid decomposition")
        monolithic = build_monolithic_fluid(
            blocks.F_II,
            restrict_to_dofs(cfg.decomps["fluid"], split.interior),
            n_ui,
            levels=cfg.levels,
            coarse_velocity=cfg.coarse_velocity,
            coarse_pressure=cfg.coarse_pressure,
            velocity_nullspace=velocity_modes,
        )
        if not cfg.inner_krylov:
            return monolithic
        return krylov_solver(blocks.F_II, monolithic, InnerSolverConfig(), "F_II")

    for name in ("velocity", "pressure"):
        if name not in cfg.decomps:
            raise ValueError(
                f"A {cfg.inner_fluid} fluid solver needs a {name} decomposition"
            )
    inner_F = InnerSolverConfig(
        kind="schwarz",
        decomp=restrict_to_dofs(cfg.decomps["velocity"], interior_u),
        levels=cfg.levels,
        coarse_kind=cfg.coarse_pressure,
        nullspace=velocity_modes,
    )
    inner_S = InnerSolverConfig(
        kind="schwarz",
        decomp=cfg.decomps["pressure"],
        levels=cfg.levels,
        coarse_kind=cfg.coarse_pressure,
    )
    simple = build_simple(
        SaddleBlocks.from_matrix(blocks.F_II, n_ui),
        cfg.inner_fluid,
        cfg.simple_alpha,
        inner_F,
        inner_S,
    )
    if not cfg.inner_krylov:
        return simple
    return krylov_solver(blocks.F_II, simple, InnerSolverConfig(), "F_II")


def build_facsi(
    system: BlockSystem, cfg: FacsiConfig | None = None
) -> FacsiPreconditioner:
    """Build the inner solvers of all three stages.

    :raises FacsiStageError: naming the stage whose setup failed
    """

    config = FacsiConfig() if cfg is None else cfg
    start = time.perf_counter()
    try:
        inner_S = build_inner_solver(
            system["S"],
            _block_config(config, config.inner_solid, "solid", config.coarse_solid),
            "S",
        )
    except _BUILD_ERRORS as exc:
        raise FacsiStageError("B_S", str(exc)) from exc
    try:
        inner_G = build_inner_solver(
            system["G"],
            _block_config(
                config, config.inner_geometry, "geometry", config.coarse_geometry
            ),
            "G",
        )
    except _BUILD_ERRORS as exc:
        raise FacsiStageError("B_G", str(exc)) from exc
    try:
        fluid = condense_fluid(system)
        inner_FII = _fluid_solver(fluid, config)
    except _BUILD_ERRORS as exc:
        raise FacsiStageError("B_F", str(exc)) from exc
    log.info(
        "FaCSI setup (fluid %s, solid %s, geometry %s) in %.4f s",
        config.inner_fluid,
        config.inner_solid,
        config.inner_geometry,
        time.perf_counter() - start,
    )
    return FacsiPreconditioner(system, inner_S, inner_G, inner_FII, fluid)
