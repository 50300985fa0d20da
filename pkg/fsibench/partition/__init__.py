"""
Import the domain decomposition tools.
"""
from .decomposition import (
    Decomposition,
    export_decomposition,
    induce_field,
    restrict_matrix,
    restrict_to_dofs,
)
from .exceptions import PartitionError
from .fields import (
    PARTITIONERS,
    FieldDecompositions,
    box_grid,
    coupled_fluid_dofs,
    decompose_fields,
    partition_mesh,
)
from .interface import (
    InterfaceComponent,
    InterfacePartition,
    classify_interface,
    dof_graph,
)
from .partitioner import (
    decompose_matrix_graph,
    extend_overlap,
    matrix_graph,
    partition_boxes,
    partition_elements,
)

__all__ = [
    "Decomposition",
    "export_decomposition",
    "induce_field",
    "restrict_matrix",
    "restrict_to_dofs",
    "PartitionError",
    "PARTITIONERS",
    "FieldDecompositions",
    "box_grid",
    "coupled_fluid_dofs",
    "decompose_fields",
    "partition_mesh",
    "InterfaceComponent",
    "InterfacePartition",
    "classify_interface",
    "dof_graph",
    "decompose_matrix_graph",
    "extend_overlap",
    "matrix_graph",
    "partition_boxes",
    "partition_elements",
]
