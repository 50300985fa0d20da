"""
Import the overlapping Schwarz preconditioners.
"""
from .coarse import (
    COARSE_KINDS,
    CoarseBasis,
    build_coarse_basis,
    build_gdsw_basis,
    build_rgdsw_basis,
    build_subdomain_basis,
    coarse_basis_from_values,
    coarse_entities,
    export_coarse_basis,
    extend_harmonically,
    gdsw_interface_values,
    harmonic_defect,
    interface_values,
    rgdsw_interface_values,
    subdomain_values,
)
from .exceptions import CoarseSpaceError, SubdomainSolveError
from .nullspace import (
    constant_nullspace,
    elasticity_nullspace,
    embed_nullspace,
    translation_nullspace,
)
from .preconditioner import SchwarzPreconditioner, apply_schwarz, build_schwarz

__all__ = [
    "COARSE_KINDS",
    "CoarseBasis",
    "build_coarse_basis",
    "build_gdsw_basis",
    "build_rgdsw_basis",
    "build_subdomain_basis",
    "coarse_basis_from_values",
    "coarse_entities",
    "export_coarse_basis",
    "extend_harmonically",
    "gdsw_interface_values",
    "harmonic_defect",
    "interface_values",
    "rgdsw_interface_values",
    "subdomain_values",
    "CoarseSpaceError",
    "SubdomainSolveError",
    "constant_nullspace",
    "elasticity_nullspace",
    "embed_nullspace",
    "translation_nullspace",
    "SchwarzPreconditioner",
    "apply_schwarz",
    "build_schwarz",
]
