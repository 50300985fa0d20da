"""
Import the FaCSI preconditioner.
"""
from .condensation import CondensedFluid, FluidSplit, condense_fluid
from .exceptions import FacsiStageError
from .oracle import facsi_factors, facsi_product, fluid_interface_matrix
from .preconditioner import (
    INNER_BLOCK,
    INNER_FLUID,
    FacsiConfig,
    FacsiPreconditioner,
    apply_bf_inv,
    apply_bg_inv,
    apply_bs_inv,
    apply_facsi,
    build_facsi,
)

__all__ = [
    "CondensedFluid",
    "FluidSplit",
    "condense_fluid",
    "FacsiStageError",
    "facsi_factors",
    "facsi_product",
    "fluid_interface_matrix",
    "INNER_BLOCK",
    "INNER_FLUID",
    "FacsiConfig",
    "FacsiPreconditioner",
    "apply_bf_inv",
    "apply_bg_inv",
    "apply_bs_inv",
    "apply_facsi",
    "build_facsi",
]
