"""
Taylor-Hood (P2-P1) assembly of the incompressible Navier-Stokes equations in ALE form.

The fluid is assembled on the reference configuration; the mesh motion enters only
through the mesh velocity ``w`` in the convective term ``((u - w) . grad) u``. The
momentum residual is

    rho (alpha0 u - u_hist) / dt + rho ((u - w) . grad) u - div(sigma(u, p))

with ``sigma = mu (grad u + grad u^T) - p I`` and a prescribed outlet traction
``-p_out n``. The continuity residual is ``-div u`` tested with linear pressure
functions, so the velocity-pressure blocks are transposes of each other and the
pressure-pressure block vanishes.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from fsibench.linalg import SparseMatrix, canonical, zeros

from .dofmap import build_dofmaps
from .reference import edge_weights, element_geometry, outward_normal
from .scatter import gather, scatter_matrix, scatter_vector

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from fsibench.linalg import BlockVector

    from .dofmap import DofMap
    from .mesh import Mesh
    from .params import PhysicalParams

_EYE2 = np.eye(2)


class FluidBlocks(NamedTuple):
    """Linearized fluid operator and residual."""

    F_uu: SparseMatrix
    F_up: SparseMatrix
    F_pu: SparseMatrix
    F_pp: SparseMatrix
    residual_u: NDArray[np.float64]
    residual_p: NDArray[np.float64]


def _vector_block(scalar: NDArray[np.float64]) -> NDArray[np.float64]:
    """Expand ``K[e, a, b]`` to ``K[e, (a, c), (b, d)] = K[e, a, b] delta_cd``."""

    n_el, n_a, n_b = scalar.shape
    full = np.einsum("eab,cd->eacbd", scalar, _EYE2)
    return full.reshape(n_el, 2 * n_a, 2 * n_b)


def assemble_fluid(
    state: BlockVector,
    mesh: Mesh,
    params: PhysicalParams,
    w: NDArray[np.float64] | None = None,
    *,
    alpha0: float = 1.0,
    u_history: NDArray[np.float64] | None = None,
    outlet_pressure: float = 0.0,
    convection: bool = True,
) -> FluidBlocks:
    """Assemble the Newton-linearized fluid blocks and the fluid residual.

    :param state: current iterate; its ``fluid_velocity`` and ``fluid_pressure``
        segments are used
    :param w: mesh velocity, laid out like the fluid velocity (zero if omitted)
    :param alpha0: leading BDF coefficient
    :param u_history: BDF history combination, so that the discrete time derivative
        is ``(alpha0 u - u_history) / dt`` (zero if omitted)
    :param outlet_pressure: pressure applied on the outlet, internal stress units
    :param convection: drop the convective term for Stokes flow
    :raises AssemblyError: on an inverted fluid element
    """

    maps = build_dofmaps(mesh)
    u_map, p_map = maps.u, maps.p
    n_u, n_p = u_map.n_dofs, p_map.n_dofs
    u = np.asarray(state["fluid_velocity"], dtype=float)
    p = np.asarray(state["fluid_pressure"], dtype=float)
    w_vec = np.zeros(n_u) if w is None else np.asarray(w, dtype=float)
    u_hist = np.zeros(n_u) if u_history is None else np.asarray(u_history, dtype=float)
    if u_map.elements.size == 0:
        empty = zeros(n_u, n_u)
        return FluidBlocks(
            empty, zeros(n_u, n_p), zeros(n_p, n_u), zeros(n_p, n_p), u * 0.0, p * 0.0
        )

    geo = element_geometry(mesh, u_map.elements)
    N, Np, G, W = geo.values_p2, geo.values_p1, geo.grad_p2, geo.weights
    dofs_u, dofs_p = u_map.element_dofs, p_map.element_dofs
    rho, mu, dt = params.rho_f, params.mu_f, params.dt

    ue = gather(u, dofs_u, 2)
    uq = np.einsum("qa,eac->eqc", N, ue)
    gu = np.einsum("eac,eqad->eqcd", ue, G)
    pq = np.einsum("qb,eb->eq", Np, p[dofs_p])
    rel = uq - np.einsum("qa,eac->eqc", N, gather(w_vec, dofs_u, 2))
    dudt = (alpha0 * uq - np.einsum("qa,eac->eqc", N, gather(u_hist, dofs_u, 2))) / dt

    # Residuals
    res = rho * np.einsum("eq,eqc,qa->eac", W, dudt, N)
    res += mu * np.einsum("eq,eqcd,eqad->eac", W, gu + gu.transpose(0, 1, 3, 2), G)
    res -= np.einsum("eq,eq,eqac->eac", W, pq, G)
    if convection:
        res += rho * np.einsum("eq,eqd,eqcd,qa->eac", W, rel, gu, N)
    res_p = -np.einsum("eq,qb,eqcc->eb", W, Np, gu)

    # Jacobian
    mass = np.einsum("eq,qa,qb->eab", W, N, N)
    scalar = (rho * alpha0 / dt) * mass + mu * np.einsum("eq,eqak,eqbk->eab", W, G, G)
    K = _vector_block(scalar)
    K += mu * np.einsum("eq,eqbc,eqad->eacbd", W, G, G).reshape(K.shape)
    if convection:
        K += _vector_block(rho * np.einsum("eq,qa,eqk,eqbk->eab", W, N, rel, G))
        K += rho * np.einsum("eq,qa,qb,eqcd->eacbd", W, N, N, gu).reshape(K.shape)
    K_up = -np.einsum("eq,qb,eqac->eacb", W, Np, G).reshape(len(W), 12, 3)

    residual_u = scatter_vector(res.reshape(len(W), 12), dofs_u, n_u)
    residual_u += outlet_traction(mesh, u_map, outlet_pressure)
    F_up = scatter_matrix(K_up, dofs_u, dofs_p, n_u, n_p)
    return FluidBlocks(
        F_uu=scatter_matrix(K, dofs_u, dofs_u, n_u, n_u),
        F_up=F_up,
        F_pu=canonical(F_up.T),
        F_pp=zeros(n_p, n_p),
        residual_u=residual_u,
        residual_p=scatter_vector(res_p, dofs_p, n_p),
    )


def outlet_traction(
    mesh: Mesh, u_map: DofMap, outlet_pressure: float
) -> NDArray[np.float64]:
    """Load vector of the outlet traction ``-p_out n`` moved to the residual side."""

    load = np.zeros(u_map.n_dofs)
    if outlet_pressure == 0.0:
        return load
    for a, b in mesh.tagged_edges("outlet"):
        normal = outward_normal(mesh, a, b)
        mid = mesh.n_vertices + mesh.edge_index[(a, b)]
        for node, weight in zip((a, b, mid), edge_weights(mesh, a, b)):
            first = u_map.dof_of_node[node]
            load[first : first + 2] += outlet_pressure * weight * normal
    return load


def assemble_shape_derivative(
    state: BlockVector,
    mesh: Mesh,
    params: PhysicalParams,
    alpha0: float = 1.0,
) -> SparseMatrix:
    """Sensitivity of the fluid momentum residual to the mesh displacement.

    With ``w = (alpha0 d_f - d_hist) / dt`` the only dependence on ``d_f`` is through
    the convective term, giving ``-rho (alpha0 / dt) ((delta d . grad) u, v)``.
    """

    maps = build_dofmaps(mesh)
    u_map, g_map = maps.u, maps.d_f
    if u_map.elements.size == 0:
        return zeros(u_map.n_dofs, g_map.n_dofs)
    geo = element_geometry(mesh, u_map.elements)
    ue = gather(np.asarray(state["fluid_velocity"], dtype=float), u_map.element_dofs, 2)
    gu = np.einsum("eac,eqad->eqcd", ue, geo.grad_p2)
    N = geo.values_p2
    local = np.einsum("eq,qa,qb,eqcd->eacbd", geo.weights, N, N, gu)
    local *= -params.rho_f * alpha0 / params.dt
    return scatter_matrix(
        local.reshape(len(geo.weights), 12, 12),
        u_map.element_dofs,
        g_map.element_dofs,
        u_map.n_dofs,
        g_map.n_dofs,
    )


def inlet_profile(
    y: NDArray[np.float64], flow_rate: float, height: float
) -> NDArray[np.float64]:
    """Parabolic axial velocity of a symmetric channel carrying ``flow_rate``.

    The half channel ``[0, height]`` with the symmetry line at ``y = 0`` carries half
    the flow, so the centerline velocity is ``3 Q / (4 h)``.
    """

    peak = 0.75 * flow_rate / height
    return peak * (1.0 - (np.asarray(y) / height) ** 2)


def inlet_values(mesh: Mesh, flow_rate: float, height: float) -> NDArray[np.float64]:
    """Fluid velocity vector holding the inlet profile on inlet DoFs, zero elsewhere."""

    maps = build_dofmaps(mesh)
    values = np.zeros(maps.u.n_dofs)
    axial = maps.inlet_dofs[maps.inlet_dofs % 2 == 0]
    y = maps.u.node_coordinate_of_dof()[axial, 1]
    values[axial] = inlet_profile(y, flow_rate, height)
    return values
