"""
The monolithic FSI Jacobian as named sparse blocks.

Unknowns are ordered solid displacement, mesh displacement, fluid velocity, fluid
pressure and interface multiplier. Block rows read

    solid:      S d_s                     + C4 lam
    geometry:   C5 d_s + G d_f
    fluid:               D d_f + F (u, p) + C3 lam
    interface:  C2 d_s         + C1 u
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from fsibench.linalg import (
    SEGMENT_NAMES,
    BlockVector,
    SparseMatrix,
    identity_rows,
    place_blocks,
    write_matrix_market,
    zero_rows,
    zeros,
)
from fsibench.utils.file import create_dir, write_text_file
from fsibench.utils.log import logger
from fsibench.utils.toml import create_toml

from .coupling import assemble_coupling
from .dofmap import build_dofmaps
from .fluid import assemble_fluid, inlet_values
from .geometry import assemble_geometry
from .solid import assemble_solid

if TYPE_CHECKING:
    from pathlib import Path

    from numpy.typing import NDArray

    from .dofmap import FsiDofMaps
    from .mesh import Mesh
    from .params import PhysicalParams

log = logger(__name__)

BLOCK_POSITIONS: dict[str, tuple[str, str]] = {
    "S": ("solid", "solid"),
    "C4": ("solid", "interface"),
    "C5": ("geometry", "solid"),
    "G": ("geometry", "geometry"),
    "D": ("fluid_velocity", "geometry"),
    "F_uu": ("fluid_velocity", "fluid_velocity"),
    "F_up": ("fluid_velocity", "fluid_pressure"),
    "C3": ("fluid_velocity", "interface"),
    "F_pu": ("fluid_pressure", "fluid_velocity"),
    "F_pp": ("fluid_pressure", "fluid_pressure"),
    "C2": ("interface", "solid"),
    "C1": ("interface", "fluid_velocity"),
}


@dataclass(frozen=True, eq=False)
class BlockSystem:
    """Named blocks of the coupled Jacobian with the Newton right-hand side.

    Blocks left out of ``blocks`` are zero. Fluid-only problems use empty solid,
    geometry and interface segments.
    """

    blocks: dict[str, SparseMatrix]
    layout: dict[str, int]
    rhs: BlockVector
    maps: FsiDofMaps | None = None
    dirichlet: dict[str, NDArray[np.int64]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        unknown = set(self.blocks) - set(BLOCK_POSITIONS)
        if unknown:
            raise ValueError(f"Unknown blocks {sorted(unknown)}")
        for name, block in self.blocks.items():
            row, col = BLOCK_POSITIONS[name]
            expected = (self.layout[row], self.layout[col])
            if block.shape != expected:
                raise ValueError(
                    f"Block {name} has shape {block.shape}, expected {expected}"
                )
        if self.rhs.layout != self.layout:
            raise ValueError(
                f"Right-hand side layout {self.rhs.layout} != {self.layout}"
            )

    def __getitem__(self, name: str) -> SparseMatrix:
        if name in self.blocks:
            return self.blocks[name]
        row, col = BLOCK_POSITIONS[name]
        return zeros(self.layout[row], self.layout[col])

    @property
    def n_dofs(self) -> int:
        return sum(self.layout.values())

    @property
    def offsets(self) -> dict[str, int]:
        """Start of each segment in the flat vector."""

        starts: dict[str, int] = {}
        position = 0
        for name in SEGMENT_NAMES:
            starts[name] = position
            position += self.layout[name]
        return starts

    def to_sparse(self, drop_c4: bool = False) -> SparseMatrix:
        """Place all blocks into one matrix (optionally without C4)."""

        starts = self.offsets
        placed = [
            (block, starts[BLOCK_POSITIONS[name][0]], starts[BLOCK_POSITIONS[name][1]])
            for name, block in self.blocks.items()
            if not (drop_c4 and name == "C4")
        ]
        return place_blocks(placed, self.n_dofs, self.n_dofs)

    def dense(self, drop_c4: bool = False) -> NDArray[np.float64]:
        dense: NDArray[np.float64] = self.to_sparse(drop_c4).toarray()
        return dense

    def matvec(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        """Apply the Jacobian block by block."""

        xs = BlockVector.from_array(self.layout, x)
        out = {name: np.zeros(n) for name, n in self.layout.items()}
        for name, block in self.blocks.items():
            row, col = BLOCK_POSITIONS[name]
            out[row] += block @ xs[col]
        return BlockVector.from_segments(**out).to_array()

    def fluid_matrix(self) -> SparseMatrix:
        """The velocity-pressure saddle-point matrix ``[F_uu F_up; F_pu F_pp]``."""

        n_u = self.layout["fluid_velocity"]
        n = n_u + self.layout["fluid_pressure"]
        return place_blocks(
            [
                (self["F_uu"], 0, 0),
                (self["F_up"], 0, n_u),
                (self["F_pu"], n_u, 0),
                (self["F_pp"], n_u, n_u),
            ],
            n,
            n,
        )

    @classmethod
    def from_fluid(
        cls,
        F_uu: SparseMatrix,
        F_up: SparseMatrix,
        F_pu: SparseMatrix,
        F_pp: SparseMatrix,
        rhs_u: NDArray[np.float64],
        rhs_p: NDArray[np.float64],
        maps: FsiDofMaps | None = None,
    ) -> BlockSystem:
        """A fluid-only system with empty solid, geometry and interface segments."""

        layout = {
            "solid": 0,
            "geometry": 0,
            "fluid_velocity": F_uu.shape[0],
            "fluid_pressure": F_pp.shape[0],
            "interface": 0,
        }
        rhs = BlockVector.zeros(layout).replace(
            fluid_velocity=rhs_u, fluid_pressure=rhs_p
        )
        blocks = {"F_uu": F_uu, "F_up": F_up, "F_pu": F_pu, "F_pp": F_pp}
        return cls(blocks=blocks, layout=layout, rhs=rhs, maps=maps)


@dataclass(frozen=True)
class FsiHistory:
    """Time-discrete data a Newton solve needs from previous steps.

    :param alpha0: leading BDF coefficient (1 for the first step, 3/2 afterwards)
    :param u_history: BDF combination of previous fluid velocities
    :param d_history: BDF combination of previous mesh displacements
    :param solid_predictor: Newmark displacement predictor
    :param interface_velocity: explicit part of the Newmark wall velocity on the
        interface slots
    :param flow_rate: inflow rate of the current step
    :param outlet_pressure: outlet pressure of the current step, internal units
    """

    alpha0: float
    u_history: NDArray[np.float64]
    d_history: NDArray[np.float64]
    solid_predictor: NDArray[np.float64]
    interface_velocity: NDArray[np.float64]
    flow_rate: float = 0.0
    outlet_pressure: float = 0.0
    lumen_height: float = 1.0
    beta: float = 0.25
    gamma: float = 0.5
    convection: bool = True
    shape_derivative: str = "ale_convection"

    @classmethod
    def at_rest(cls, maps: FsiDofMaps, **kwargs: float | bool | str) -> FsiHistory:
        """History of a system starting from rest."""

        return cls(
            alpha0=1.0,
            u_history=np.zeros(maps.u.n_dofs),
            d_history=np.zeros(maps.d_f.n_dofs),
            solid_predictor=np.zeros(maps.d_s.n_dofs),
            interface_velocity=np.zeros(maps.n_interface),
            **kwargs,  # type: ignore[arg-type]
        )


def fsi_residual(
    state: BlockVector, mesh: Mesh, params: PhysicalParams, history: FsiHistory
) -> BlockVector:
    """Nonlinear residual of the coupled problem."""

    return _assemble(state, mesh, params, history, jacobian=False)[1]


def assemble_fsi_system(
    state: BlockVector, mesh: Mesh, params: PhysicalParams, history: FsiHistory
) -> BlockSystem:
    """Assemble the coupled Jacobian at ``state`` with ``rhs = -residual``."""

    system, _ = _assemble(state, mesh, params, history, jacobian=True)
    assert system is not None
    return system


def _assemble(
    state: BlockVector,
    mesh: Mesh,
    params: PhysicalParams,
    history: FsiHistory,
    jacobian: bool,
) -> tuple[BlockSystem | None, BlockVector]:
    maps = build_dofmaps(mesh)
    d_s, d_f = state["solid"], state["geometry"]
    u, lam = state["fluid_velocity"], state["interface"]
    w = (history.alpha0 * d_f - history.d_history) / params.dt

    fluid = assemble_fluid(
        state,
        mesh,
        params,
        w,
        alpha0=history.alpha0,
        u_history=history.u_history,
        outlet_pressure=history.outlet_pressure,
        convection=history.convection,
    )
    solid = assemble_solid(
        state, mesh, params, predictor=history.solid_predictor, beta=history.beta
    )
    G = assemble_geometry(mesh)
    coupling = assemble_coupling(
        mesh,
        maps,
        dt=params.dt,
        beta=history.beta,
        gamma=history.gamma,
        shape_derivative=history.shape_derivative,
        state=state,
        params=params,
        alpha0=history.alpha0,
    )
    dir_s, dir_u = maps.d_s.dirichlet_dofs, maps.u.dirichlet_dofs
    g_u = inlet_values(mesh, history.flow_rate, history.lumen_height)

    r_s = solid.residual_s + coupling.C4 @ lam
    r_s[dir_s] = d_s[dir_s]
    r_u = fluid.residual_u + coupling.C3 @ lam
    r_u[dir_u] = u[dir_u] - g_u[dir_u]
    residual = BlockVector.from_segments(
        solid=r_s,
        geometry=G @ d_f + coupling.C5 @ d_s,
        fluid_velocity=r_u,
        fluid_pressure=fluid.residual_p,
        interface=coupling.C1 @ u + coupling.C2 @ d_s - history.interface_velocity,
    )
    if not jacobian:
        return None, residual

    blocks = {
        "S": identity_rows(solid.S, dir_s),
        "C4": zero_rows(coupling.C4, dir_s),
        "C5": coupling.C5,
        "G": G,
        "D": zero_rows(coupling.D, dir_u),
        "F_uu": identity_rows(fluid.F_uu, dir_u),
        "F_up": zero_rows(fluid.F_up, dir_u),
        "C3": zero_rows(coupling.C3, dir_u),
        "F_pu": fluid.F_pu,
        "F_pp": fluid.F_pp,
        "C2": coupling.C2,
        "C1": coupling.C1,
    }
    rhs = BlockVector.from_array(maps.layout, -residual.to_array())
    system = BlockSystem(
        blocks=blocks,
        layout=maps.layout,
        rhs=rhs,
        maps=maps,
        dirichlet={"solid": dir_s, "fluid_velocity": dir_u},
    )
    return system, residual


def fluid_residual(
    state: BlockVector, mesh: Mesh, params: PhysicalParams, history: FsiHistory
) -> BlockVector:
    """Residual of a fluid-only channel (no wall, no mesh motion)."""

    return _assemble_fluid_only(state, mesh, params, history, jacobian=False)[1]


def assemble_fluid_system(
    state: BlockVector, mesh: Mesh, params: PhysicalParams, history: FsiHistory
) -> BlockSystem:
    """Jacobian of a fluid-only channel as a fluid-only block system."""

    system, _ = _assemble_fluid_only(state, mesh, params, history, jacobian=True)
    assert system is not None
    return system


def _assemble_fluid_only(
    state: BlockVector,
    mesh: Mesh,
    params: PhysicalParams,
    history: FsiHistory,
    jacobian: bool,
) -> tuple[BlockSystem | None, BlockVector]:
    maps = build_dofmaps(mesh)
    u = state["fluid_velocity"]
    fluid = assemble_fluid(
        state,
        mesh,
        params,
        None,
        alpha0=history.alpha0,
        u_history=history.u_history,
        outlet_pressure=history.outlet_pressure,
        convection=history.convection,
    )
    dir_u = maps.u.dirichlet_dofs
    g_u = inlet_values(mesh, history.flow_rate, history.lumen_height)
    r_u = fluid.residual_u.copy()
    r_u[dir_u] = u[dir_u] - g_u[dir_u]
    residual = state.replace(fluid_velocity=r_u, fluid_pressure=fluid.residual_p)
    if not jacobian:
        return None, residual
    system = BlockSystem.from_fluid(
        identity_rows(fluid.F_uu, dir_u),
        zero_rows(fluid.F_up, dir_u),
        fluid.F_pu,
        fluid.F_pp,
        -r_u,
        -fluid.residual_p,
        maps=maps,
    )
    return system, residual


def export_system(system: BlockSystem, directory: Path) -> Path:
    """Write every block as Matrix Market plus a TOML manifest.

    :return: path of the manifest
    """

    create_dir(directory)
    manifest: dict[str, dict[str, object]] = {"blocks": {}, "segments": {}}
    for name in BLOCK_POSITIONS:
        block = system[name]
        filename = f"{name}.mtx"
        write_matrix_market(directory / filename, block, comment=f"block {name}")
        row, col = BLOCK_POSITIONS[name]
        manifest["blocks"][name] = {
            "file": filename,
            "rows": row,
            "cols": col,
            "shape": list(block.shape),
            "nnz": int(block.nnz),
        }
    for name, start in system.offsets.items():
        manifest["segments"][name] = [start, start + system.layout[name]]
    rhs_file = directory / "rhs.txt"
    write_text_file(
        rhs_file, "\n".join(repr(float(v)) for v in system.rhs.to_array()) + "\n"
    )
    manifest["rhs"] = {"file": rhs_file.name}
    path = directory / "manifest.toml"
    create_toml(path, manifest)
    log.info("Exported %d blocks to %s", len(BLOCK_POSITIONS), directory)
    return path
