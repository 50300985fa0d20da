"""
Dense FaCSI factors for small correctness checks.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from fsibench.linalg import SEGMENT_NAMES

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from fsibench.fem import BlockSystem

Factors = tuple["NDArray[np.float64]", "NDArray[np.float64]", "NDArray[np.float64]"]


def _slices(system: BlockSystem) -> dict[str, slice]:
    starts = system.offsets
    return {
        name: slice(starts[name], starts[name] + system.layout[name])
        for name in SEGMENT_NAMES
    }


def facsi_factors(system: BlockSystem) -> Factors:
    """Dense ``B_S``, ``B_G`` and ``B_F`` of a block system."""

    n = system.n_dofs
    at = _slices(system)
    B_S, B_G, B_F = np.eye(n), np.eye(n), np.eye(n)

    B_S[at["solid"], at["solid"]] = system["S"].toarray()

    B_G[at["geometry"], at["solid"]] = system["C5"].toarray()
    B_G[at["geometry"], at["geometry"]] = system["G"].toarray()

    u, p, lam = at["fluid_velocity"], at["fluid_pressure"], at["interface"]
    B_F[u, at["geometry"]] = system["D"].toarray()
    B_F[u, u] = system["F_uu"].toarray()
    B_F[u, p] = system["F_up"].toarray()
    B_F[u, lam] = system["C3"].toarray()
    B_F[p, u] = system["F_pu"].toarray()
    B_F[p, p] = system["F_pp"].toarray()
    B_F[lam, at["solid"]] = system["C2"].toarray()
    B_F[lam, u] = system["C1"].toarray()
    B_F[lam, lam] = 0.0
    return B_S, B_G, B_F


def facsi_product(system: BlockSystem) -> NDArray[np.float64]:
    """``B_S B_G B_F``, which equals the Jacobian with ``C4`` removed."""

    B_S, B_G, B_F = facsi_factors(system)
    product: NDArray[np.float64] = B_S @ B_G @ B_F
    return product


def fluid_interface_matrix(system: BlockSystem) -> NDArray[np.float64]:
    """The fluid-interface saddle system ``[F C3; C1 0]`` on ``(u, p, lam)``."""

    F = system.fluid_matrix().toarray()
    n_u, n_f = system.layout["fluid_velocity"], F.shape[0]
    n_lam = system.layout["interface"]
    out = np.zeros((n_f + n_lam, n_f + n_lam))
    out[:n_f, :n_f] = F
    out[:n_u, n_f:] = system["C3"].toarray()
    out[n_f:, :n_u] = system["C1"].toarray()
    return out
