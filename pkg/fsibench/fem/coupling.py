"""
Interface coupling blocks of the monolithic FSI Jacobian.

With ``E_s`` (solid DoFs x multiplier slots) and ``E_g`` (mesh DoFs x slots) the
Boolean pairing matrices, the blocks are

* ``C1``: restriction of the fluid velocity to the interface slots, ``C3 = C1^T``;
* ``C2 = -(gamma / (beta dt)) E_s^T``: the Newmark velocity of the wall, so the
  interface rows read ``C1 u + C2 d_s = v_hist``;
* ``C4 = -E_s``: the fluid load on the wall;
* ``C5 = -E_g E_s^T``: geometric adherence, ``d_f = d_s`` on the interface;
* ``D``: the shape derivative (zero, or the ALE convection sensitivity).
"""
from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from fsibench.linalg import (
    SparseMatrix,
    canonical,
    csr_from_triplets,
    zero_rows,
    zeros,
)

from .dofmap import build_dofmaps
from .exceptions import CouplingError
from .fluid import assemble_shape_derivative

if TYPE_CHECKING:
    from fsibench.linalg import BlockVector

    from .dofmap import FsiDofMaps
    from .mesh import Mesh
    from .params import PhysicalParams

SHAPE_DERIVATIVES: tuple[str, ...] = ("zero", "ale_convection")


class CouplingBlocks(NamedTuple):
    C1: SparseMatrix
    C2: SparseMatrix
    C3: SparseMatrix
    C4: SparseMatrix
    C5: SparseMatrix
    D: SparseMatrix


def _pairing(dofs: np.ndarray, n_rows: int) -> SparseMatrix:
    n = dofs.size
    return csr_from_triplets(
        None, n_rows, n, rows=dofs, cols=np.arange(n), values=np.ones(n)
    )


def assemble_coupling(
    mesh: Mesh,
    maps: FsiDofMaps | None = None,
    *,
    dt: float = 0.001,
    beta: float = 0.25,
    gamma: float = 0.5,
    shape_derivative: str = "zero",
    state: BlockVector | None = None,
    params: PhysicalParams | None = None,
    alpha0: float = 1.0,
) -> CouplingBlocks:
    """Assemble C1 to C5 and D.

    :param shape_derivative: ``"zero"`` or ``"ale_convection"``; the latter needs the
        current ``state`` and ``params``
    :raises CouplingError: if the fluid, solid and mesh interface DoF counts differ
    """

    maps = build_dofmaps(mesh) if maps is None else maps
    if shape_derivative not in SHAPE_DERIVATIVES:
        raise ValueError(f"Unknown shape derivative option {shape_derivative!r}")
    n_u, n_s, n_g = maps.u.n_dofs, maps.d_s.n_dofs, maps.d_f.n_dofs
    slots = maps.fluid_slots.size
    if not slots == maps.solid_slots.size == maps.geometry_slots.size:
        raise CouplingError(
            f"Interface DoF counts differ: fluid {slots}, solid "
            f"{maps.solid_slots.size}, mesh {maps.geometry_slots.size}"
        )

    C3 = _pairing(maps.fluid_slots, n_u)
    E_s = _pairing(maps.solid_slots, n_s)
    E_g = _pairing(maps.geometry_slots, n_g)
    C1 = canonical(C3.T)
    C2 = canonical(-(gamma / (beta * dt)) * E_s.T)
    C4 = canonical(-E_s)
    C5 = canonical(-(E_g @ E_s.T))

    if shape_derivative == "ale_convection":
        if state is None or params is None:
            raise ValueError("The ALE convection derivative needs a state and params")
        D = zero_rows(
            assemble_shape_derivative(state, mesh, params, alpha0),
            maps.u.dirichlet_dofs,
        )
    else:
        D = zeros(n_u, n_g)
    return CouplingBlocks(C1=C1, C2=C2, C3=C3, C4=C4, C5=C5, D=D)
