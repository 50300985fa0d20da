"""
Random block systems with the sparsity pattern of the coupled FSI Jacobian.

Used to check the block preconditioner algebra independently of any discretization.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import scipy.sparse as sp

from fsibench.linalg import BlockVector, SparseMatrix, canonical, csr_from_triplets

from .system import BlockSystem

if TYPE_CHECKING:
    from numpy.random import Generator

DEFAULT_SIZES: dict[str, int] = {
    "solid": 30,
    "geometry": 30,
    "fluid_velocity": 40,
    "fluid_pressure": 12,
}


def _random(
    rng: Generator, nrows: int, ncols: int, density: float, scale: float = 1.0
) -> SparseMatrix:
    if nrows == 0 or ncols == 0 or scale == 0.0:
        return sp.csr_matrix((nrows, ncols))
    block = sp.random(
        nrows,
        ncols,
        density=density,
        format="csr",
        random_state=rng,
        data_rvs=lambda k: rng.uniform(-1.0, 1.0, k),
    )
    return canonical(scale * block)


def _band(rng: Generator, size: int) -> SparseMatrix:
    """Random symmetric tridiagonal coupling; keeps the block graph connected."""

    off = rng.uniform(0.5, 1.0, max(size - 1, 0))
    return canonical(sp.diags([off, off], [-1, 1], shape=(size, size)))


def _pressure_links(rng: Generator, n_u: int, n_p: int) -> SparseMatrix:
    """Velocity rows shared by consecutive pressures; keeps F_up^T F_up connected."""

    if n_u == 0 or n_p == 0:
        return sp.csr_matrix((n_u, n_p))
    anchors = np.round(np.linspace(0, n_u - 1, n_p)).astype(np.int64)
    rows = np.concatenate([anchors, anchors[:-1]])
    cols = np.concatenate([np.arange(n_p), np.arange(1, n_p)])
    values = rng.uniform(0.5, 1.0, rows.size)
    return csr_from_triplets(None, n_u, n_p, rows=rows, cols=cols, values=values)


def _diagonally_dominant(matrix: SparseMatrix) -> SparseMatrix:
    shift = np.abs(matrix).sum(axis=1).A.ravel() + 1.0
    return canonical(matrix + sp.diags(shift))


def generate_synthetic_block_system(
    seed: int,
    sizes: dict[str, int] | None = None,
    interface_size: int = 8,
    *,
    density: float = 0.15,
    coupling_scale: float = 0.1,
    c4_scale: float = 0.1,
    pressure_shift: float = 1.0,
) -> BlockSystem:
    """Draw a reproducible random block system.

    S and G are symmetric and diagonally dominant, F_uu nonsymmetric and diagonally
    dominant, all three on top of a tridiagonal band so their graphs are connected;
    ``F_pu = F_up^T`` and ``F_pp = -pressure_shift I``. C1 selects a random
    sorted subset of velocity DoFs and ``C3 = C1^T``. C2, C4, C5 and D are random with
    entries scaled by ``coupling_scale`` (``c4_scale`` for C4; zero drops it).

    :param seed: seed of ``numpy.random.default_rng``
    :param sizes: segment sizes of solid, geometry, fluid velocity and pressure
    :param interface_size: number of interface multiplier slots
    """

    n = {**DEFAULT_SIZES, **(sizes or {})}
    n_s, n_g = n["solid"], n["geometry"]
    n_u, n_p = n["fluid_velocity"], n["fluid_pressure"]
    if interface_size > n_u:
        raise ValueError(
            f"interface_size {interface_size} exceeds {n_u} velocity DoFs"
        )
    rng = np.random.default_rng(seed)

    def spd(size: int) -> SparseMatrix:
        half = _random(rng, size, size, density)
        return _diagonally_dominant(half + half.T + _band(rng, size))

    S = spd(n_s)
    G = spd(n_g)
    F_uu = _diagonally_dominant(_random(rng, n_u, n_u, density) + _band(rng, n_u))
    F_up = canonical(
        _random(rng, n_u, n_p, max(density, 2.0 / max(n_u, 1)))
        + _pressure_links(rng, n_u, n_p)
    )
    slots = np.sort(rng.choice(n_u, size=interface_size, replace=False))
    C1 = csr_from_triplets(
        None,
        interface_size,
        n_u,
        rows=np.arange(interface_size),
        cols=slots,
        values=np.ones(interface_size),
    )
    blocks = {
        "S": S,
        "G": G,
        "F_uu": F_uu,
        "F_up": F_up,
        "F_pu": canonical(F_up.T),
        "F_pp": canonical(-pressure_shift * sp.identity(n_p)),
        "C1": C1,
        "C3": canonical(C1.T),
        "C2": _random(rng, interface_size, n_s, density, coupling_scale),
        "C5": _random(rng, n_g, n_s, density, coupling_scale),
        "D": _random(rng, n_u, n_g, density, coupling_scale),
        "C4": _random(rng, n_s, interface_size, density, c4_scale),
    }
    layout = {
        "solid": n_s,
        "geometry": n_g,
        "fluid_velocity": n_u,
        "fluid_pressure": n_p,
        "interface": interface_size,
    }
    rhs = BlockVector.from_array(layout, rng.standard_normal(sum(layout.values())))
    return BlockSystem(blocks=blocks, layout=layout, rhs=rhs)
