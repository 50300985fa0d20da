"""
Import the fluid subproblem preconditioners.
"""
from .exceptions import HfError, InnerSolveError, SingularSchurError
from .inner import (
    INNER_KINDS,
    InnerSolver,
    InnerSolverConfig,
    build_inner_solver,
    krylov_solver,
)
from .monolithic import MonolithicFluidPreconditioner, build_monolithic_fluid
from .saddle import SaddleBlocks, has_pressure_nullspace, pin_pressure
from .simple import (
    VARIANTS,
    SimplePreconditioner,
    apply_simple,
    build_simple,
    compute_hf,
    schur_simple,
    simple_product,
)

__all__ = [
    "HfError",
    "InnerSolveError",
    "SingularSchurError",
    "INNER_KINDS",
    "InnerSolver",
    "InnerSolverConfig",
    "build_inner_solver",
    "krylov_solver",
    "MonolithicFluidPreconditioner",
    "build_monolithic_fluid",
    "SaddleBlocks",
    "has_pressure_nullspace",
    "pin_pressure",
    "VARIANTS",
    "SimplePreconditioner",
    "apply_simple",
    "build_simple",
    "compute_hf",
    "schur_simple",
    "simple_product",
]
