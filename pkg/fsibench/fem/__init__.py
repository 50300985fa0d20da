"""
Import the finite element problem factory.
"""
from .coupling import SHAPE_DERIVATIVES, CouplingBlocks, assemble_coupling
from .dofmap import FIELDS, DofMap, FsiDofMaps, build_dofmaps
from .exceptions import AssemblyError, CouplingError, MeshError
from .fluid import (
    FluidBlocks,
    assemble_fluid,
    assemble_shape_derivative,
    inlet_profile,
    inlet_values,
)
from .geometry import assemble_geometry, vector_laplacian
from .mesh import (
    BOUNDARY_TAGS,
    FLUID,
    RECTANGLE_SIDE_TAGS,
    SOLID,
    Mesh,
    build_channel_mesh,
    build_rectangle_mesh,
    element_graph,
    export_mesh,
    mesh_edges,
)
from .params import PhysicalParams
from .poisson import PoissonProblem, assemble_poisson
from .solid import SolidBlocks, assemble_solid, linear_elastic_stiffness
from .synthetic import generate_synthetic_block_system
from .system import (
    BLOCK_POSITIONS,
    BlockSystem,
    FsiHistory,
    assemble_fluid_system,
    assemble_fsi_system,
    export_system,
    fluid_residual,
    fsi_residual,
)

__all__ = [
    "SHAPE_DERIVATIVES",
    "CouplingBlocks",
    "assemble_coupling",
    "FIELDS",
    "DofMap",
    "FsiDofMaps",
    "build_dofmaps",
    "AssemblyError",
    "CouplingError",
    "MeshError",
    "FluidBlocks",
    "assemble_fluid",
    "assemble_shape_derivative",
    "inlet_profile",
    "inlet_values",
    "assemble_geometry",
    "vector_laplacian",
    "BOUNDARY_TAGS",
    "RECTANGLE_SIDE_TAGS",
    "FLUID",
    "SOLID",
    "Mesh",
    "build_channel_mesh",
    "build_rectangle_mesh",
    "element_graph",
    "export_mesh",
    "mesh_edges",
    "PhysicalParams",
    "PoissonProblem",
    "assemble_poisson",
    "SolidBlocks",
    "assemble_solid",
    "linear_elastic_stiffness",
    "generate_synthetic_block_system",
    "BLOCK_POSITIONS",
    "BlockSystem",
    "FsiHistory",
    "assemble_fluid_system",
    "assemble_fsi_system",
    "export_system",
    "fluid_residual",
    "fsi_residual",
]
