"""
Benchmark problems.

Each problem kind turns a config, a flow rate and a seed into a time-dependent (or
steady, solved as a single step) problem for :func:`fsibench.solver.time_loop`, and can
dump its first Jacobian for external solvers.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable
from functools import cached_property
from typing import TYPE_CHECKING, Any, ClassVar

import numpy as np

from fsibench.facsi import FacsiConfig, build_facsi
from fsibench.fem import (
    RECTANGLE_SIDE_TAGS,
    BlockSystem,
    FsiHistory,
    Mesh,
    PhysicalParams,
    assemble_fluid_system,
    assemble_fsi_system,
    assemble_poisson,
    build_channel_mesh,
    build_dofmaps,
    build_rectangle_mesh,
    export_mesh,
    export_system,
    fluid_residual,
    fsi_residual,
    generate_synthetic_block_system,
)
from fsibench.fluid import (
    InnerSolverConfig,
    SaddleBlocks,
    build_monolithic_fluid,
    build_simple,
)
from fsibench.linalg import BlockVector, write_matrix_market
from fsibench.partition import (
    FieldDecompositions,
    decompose_fields,
    decompose_matrix_graph,
    export_decomposition,
    induce_field,
    partition_mesh,
)
from fsibench.schwarz import (
    build_coarse_basis,
    build_schwarz,
    elasticity_nullspace,
    export_coarse_basis,
    translation_nullspace,
)
from fsibench.solver import (
    BdfHistory,
    NewmarkScheme,
    NewmarkState,
    RampPlateau,
    make_schedule,
    time_loop,
)
from fsibench.utils.file import create_dir, write_text_file
from fsibench.utils.hash import hash_arrays
from fsibench.utils.log import logger
from fsibench.utils.toml import create_toml
from fsibench.utils.units import from_internal_stress

if TYPE_CHECKING:
    from pathlib import Path

    from numpy.typing import NDArray

    from fsibench.linalg import SparseMatrix
    from fsibench.partition import Decomposition
    from fsibench.solver import Operator, SolveStats, TimeProblem

    from .config import BenchConfig

log = logger(__name__)

PrecondFactory = Callable[[Any], "Operator"]


def _outlet_pressure_dofs(mesh: Mesh) -> NDArray[np.int64]:
    maps = build_dofmaps(mesh)
    return maps.p.dofs(mesh.tag_nodes("outlet", quadratic=False), (0,))


def mean_outlet_pressure(
    mesh: Mesh, pressure: NDArray[np.float64], dofs: NDArray[np.int64] | None = None
) -> float:
    """Mean pressure over the outlet vertices in kPa."""

    chosen = _outlet_pressure_dofs(mesh) if dofs is None else dofs
    if chosen.size == 0:
        return 0.0
    return from_internal_stress(float(np.mean(pressure[chosen])), "kPa")


def mid_channel_wall_dof(mesh: Mesh) -> int:
    """Solid DoF of the vertical displacement of the interface node nearest the
    middle of the channel."""

    maps = build_dofmaps(mesh)
    nodes = mesh.tag_nodes("interface")
    x = mesh.node_coordinates[nodes, 0]
    middle = 0.5 * (mesh.vertices[:, 0].min() + mesh.vertices[:, 0].max())
    node = nodes[int(np.argmin(np.abs(x - middle)))]
    return int(maps.d_s.dofs(np.array([node]), (1,))[0])


class FsiChannelProblem:
    """The flexible channel: BDF fluid and mesh, Newmark wall, FaCSI per Newton step.

    :param schedule: inflow schedule; the outlet pressure follows its ramp up to the
        reference pressure
    :param outlet_pressure: apply the ramped reference pressure on the outlet
    """

    def __init__(
        self,
        mesh: Mesh,
        params: PhysicalParams,
        facsi: FacsiConfig,
        schedule: RampPlateau,
        *,
        lumen_height: float,
        shape_derivative: str = "ale_convection",
        outlet_pressure: bool = True,
    ):
        self.mesh = mesh
        self.params = params
        self.facsi = facsi
        self.schedule = schedule
        self.lumen_height = lumen_height
        self.shape_derivative = shape_derivative
        self.outlet_pressure = outlet_pressure
        self.maps = build_dofmaps(mesh)
        self.layout = self.maps.layout
        self.dt = params.dt
        self.scheme = NewmarkScheme(params.dt)
        self.bdf_u = BdfHistory()
        self.bdf_d = BdfHistory()
        self.wall = NewmarkState.at_rest(self.maps.d_s.n_dofs)
        self.history: FsiHistory | None = None
        self._outlet_dofs = _outlet_pressure_dofs(mesh)
        self._mid_dof = mid_channel_wall_dof(mesh)

    def _state(self, x: NDArray[np.float64]) -> BlockVector:
        return BlockVector.from_array(self.layout, x)

    def _current(self) -> FsiHistory:
        if self.history is None:
            raise RuntimeError("begin_step must be called before assembling")
        return self.history

    def initial_state(self) -> NDArray[np.float64]:
        self.bdf_u = BdfHistory([np.zeros(self.maps.u.n_dofs)])
        self.bdf_d = BdfHistory([np.zeros(self.maps.d_f.n_dofs)])
        self.wall = NewmarkState.at_rest(self.maps.d_s.n_dofs)
        return np.zeros(sum(self.layout.values()))

    def begin_step(self, step: int, time: float, flow_rate: float) -> None:
        predictor = self.scheme.predictor(self.wall.d, self.wall.v, self.wall.a)
        explicit = self.scheme.explicit_velocity(self.wall.v, self.wall.a, predictor)
        ramp = self.schedule.ramp(time) if self.outlet_pressure else 0.0
        self.history = FsiHistory(
            alpha0=self.bdf_u.alpha0,
            u_history=self.bdf_u.combination(),
            d_history=self.bdf_d.combination(),
            solid_predictor=predictor,
            interface_velocity=explicit[self.maps.solid_slots],
            flow_rate=flow_rate,
            outlet_pressure=self.params.reference_pressure * ramp,
            lumen_height=self.lumen_height,
            beta=self.scheme.beta,
            gamma=self.scheme.gamma,
            shape_derivative=self.shape_derivative,
        )

    def residual(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        state = self._state(x)
        return fsi_residual(state, self.mesh, self.params, self._current()).to_array()

    def jacobian(self, x: NDArray[np.float64]) -> BlockSystem:
        return assemble_fsi_system(
            self._state(x), self.mesh, self.params, self._current()
        )

    def preconditioner(self, J: BlockSystem, x: NDArray[np.float64]) -> Operator:
        return build_facsi(J, self.facsi)

    def end_step(self, x: NDArray[np.float64]) -> dict[str, float]:
        state = self._state(x)
        self.bdf_u.push(state["fluid_velocity"])
        self.bdf_d.push(state["geometry"])
        self.wall = self.wall.advance(self.scheme, state["solid"])
        return {
            "outlet_pressure_kPa": mean_outlet_pressure(
                self.mesh, state["fluid_pressure"], self._outlet_dofs
            ),
            "lumen_height": self.lumen_height + float(state["solid"][self._mid_dof]),
        }


class FluidChannelProblem:
    """A rigid channel: Stokes or Navier-Stokes flow with BDF time stepping."""

    def __init__(
        self,
        mesh: Mesh,
        params: PhysicalParams,
        precond: PrecondFactory,
        schedule: RampPlateau,
        *,
        lumen_height: float,
        convection: bool = True,
        outlet_pressure: bool = True,
    ):
        self.mesh = mesh
        self.params = params
        self.precond = precond
        self.schedule = schedule
        self.lumen_height = lumen_height
        self.convection = convection
        self.outlet_pressure = outlet_pressure
        self.maps = build_dofmaps(mesh)
        # Only the fluid segments; the mesh never moves
        self.layout = {
            **dict.fromkeys(self.maps.layout, 0),
            "fluid_velocity": self.maps.u.n_dofs,
            "fluid_pressure": self.maps.p.n_dofs,
        }
        self.dt = params.dt
        self.bdf_u = BdfHistory()
        self.history: FsiHistory | None = None
        self._outlet_dofs = _outlet_pressure_dofs(mesh)

    def _state(self, x: NDArray[np.float64]) -> BlockVector:
        return BlockVector.from_array(self.layout, x)

    def _current(self) -> FsiHistory:
        if self.history is None:
            raise RuntimeError("begin_step must be called before assembling")
        return self.history

    def initial_state(self) -> NDArray[np.float64]:
        self.bdf_u = BdfHistory([np.zeros(self.maps.u.n_dofs)])
        return np.zeros(sum(self.layout.values()))

    def begin_step(self, step: int, time: float, flow_rate: float) -> None:
        ramp = self.schedule.ramp(time) if self.outlet_pressure else 0.0
        self.history = FsiHistory(
            alpha0=self.bdf_u.alpha0,
            u_history=self.bdf_u.combination(),
            d_history=np.zeros(0),
            solid_predictor=np.zeros(0),
            interface_velocity=np.zeros(0),
            flow_rate=flow_rate,
            outlet_pressure=self.params.reference_pressure * ramp,
            lumen_height=self.lumen_height,
            convection=self.convection,
        )

    def residual(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        state = self._state(x)
        return fluid_residual(state, self.mesh, self.params, self._current()).to_array()

    def jacobian(self, x: NDArray[np.float64]) -> BlockSystem:
        return assemble_fluid_system(
            self._state(x), self.mesh, self.params, self._current()
        )

    def preconditioner(self, J: BlockSystem, x: NDArray[np.float64]) -> Operator:
        return self.precond(J)

    def end_step(self, x: NDArray[np.float64]) -> dict[str, float]:
        state = self._state(x)
        self.bdf_u.push(state["fluid_velocity"])
        return {
            "outlet_pressure_kPa": mean_outlet_pressure(
                self.mesh, state["fluid_pressure"], self._outlet_dofs
            )
        }


class LinearProblem:
    """A linear system ``A x = b`` solved as one step of the time loop."""

    dt: float = 1.0

    def __init__(
        self,
        matrix: SparseMatrix | BlockSystem,
        rhs: NDArray[np.float64],
        precond: PrecondFactory,
    ):
        self.matrix = matrix
        self.rhs = np.asarray(rhs, dtype=float)
        self.precond = precond

    def _apply(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        if isinstance(self.matrix, BlockSystem):
            return self.matrix.matvec(x)
        return np.asarray(self.matrix @ x, dtype=float)

    def initial_state(self) -> NDArray[np.float64]:
        return np.zeros_like(self.rhs)

    def begin_step(self, step: int, time: float, flow_rate: float) -> None:
        pass

    def residual(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return self._apply(x) - self.rhs

    def jacobian(self, x: NDArray[np.float64]) -> SparseMatrix | BlockSystem:
        return self.matrix

    def preconditioner(self, J: Any, x: NDArray[np.float64]) -> Operator:
        return self.precond(J)

    def end_step(self, x: NDArray[np.float64]) -> dict[str, float]:
        return {"solution_norm": float(np.linalg.norm(x))}


def fluid_preconditioner(
    precond: str,
    decomps: FieldDecompositions | dict[str, Decomposition],
    settings: dict[str, Any],
) -> PrecondFactory:
    """Factory of the monolithic or SIMPLE-type preconditioner of a fluid-only
    system.

    :param decomps: ``fluid``, ``velocity`` and ``pressure`` decompositions
    :param settings: the ``[precond]`` config section
    """

    parts = decomps._asdict() if isinstance(decomps, tuple) else decomps
    levels = settings["levels"]

    def build(J: BlockSystem) -> Operator:
        n_u = J.layout["fluid_velocity"]
        if precond == "monolithic":
            return build_monolithic_fluid(
                J.fluid_matrix(),
                parts["fluid"],
                n_u,
                levels=levels,
                coarse_velocity=settings["coarse_velocity"],
                coarse_pressure=settings["coarse_pressure"],
            )
        inner_F = InnerSolverConfig(
            kind="schwarz",
            decomp=parts["velocity"],
            levels=levels,
            coarse_kind=settings["coarse_pressure"],
            nullspace=translation_nullspace(n_u),
        )
        inner_S = InnerSolverConfig(
            kind="schwarz",
            decomp=parts["pressure"],
            levels=levels,
            coarse_kind=settings["coarse_pressure"],
        )
        return build_simple(
            SaddleBlocks.from_system(J),
            precond,
            settings["simple_alpha"],
            inner_F,
            inner_S,
        )

    return build


class BenchProblem(ABC):
    """One problem kind of the benchmark.

    :param flow_rate: plateau inflow rate (ignored by steady problems)
    :param seed: seed of the partitioner and of random problems
    """

    kind: ClassVar[str]

    def __init__(self, cfg: BenchConfig, flow_rate: float, seed: int):
        self.cfg = cfg
        self.flow_rate = flow_rate
        self.seed = seed

    @property
    def settings(self) -> dict[str, Any]:
        return self.cfg["problem"]

    @property
    def n_steps(self) -> int:
        return self.cfg.n_steps

    def schedule(self) -> RampPlateau | None:
        return make_schedule(self.cfg["schedule"], self.flow_rate)

    def variants(self) -> list[str]:
        """Preconditioner labels this problem runs, in sweep order."""

        return list(dict.fromkeys(self.cfg.fluid_preconds))

    @abstractmethod
    def problem_hash(self) -> str:
        """Hash of the operators and data, independent of the preconditioner."""

    @abstractmethod
    def time_problem(self, precond: str, n_subdomains: int) -> TimeProblem:
        ...

    def solve(self, precond: str, n_subdomains: int) -> SolveStats:
        return time_loop(
            self.time_problem(precond, n_subdomains),
            self.schedule(),
            self.n_steps,
            self.cfg.newton_config(),
        )

    @abstractmethod
    def export(self, directory: Path) -> Path:
        """Write the first Jacobian and its data; return the manifest path."""


class _ChannelBench(BenchProblem):
    """Shared setup of the mesh-based channel problems."""

    def __init__(self, cfg: BenchConfig, flow_rate: float, seed: int):
        super().__init__(cfg, flow_rate, seed)
        self.params = cfg.physical_params(flow_rate)
        self._decomps: dict[int, FieldDecompositions] = {}

    @abstractmethod
    def build_mesh(self) -> Mesh:
        ...

    @cached_property
    def mesh(self) -> Mesh:
        return self.build_mesh()

    def decompositions(self, n_subdomains: int) -> FieldDecompositions:
        if n_subdomains not in self._decomps:
            precond = self.cfg["precond"]
            self._decomps[n_subdomains] = decompose_fields(
                self.mesh,
                build_dofmaps(self.mesh),
                n_subdomains,
                overlap=precond["overlap"],
                seed=self.seed,
                method=precond["partitioner"],
            )
        return self._decomps[n_subdomains]

    def problem_hash(self) -> str:
        physics = [float(v) for v in self.cfg["physics"].values()]
        schedule = [
            float(v) for v in self.cfg["schedule"].values() if not isinstance(v, str)
        ]
        return hash_arrays(
            [
                self.mesh.vertices,
                self.mesh.triangles,
                self.mesh.region,
                np.array(physics + schedule + [self.flow_rate]),
                np.array([self.n_steps]),
                np.frombuffer(f"{self.kind}{self.settings}".encode(), dtype=np.uint8),
            ]
        )

    def _export_common(
        self, problem: FsiChannelProblem | FluidChannelProblem, directory: Path
    ) -> Path:
        schedule = self.schedule()
        x = problem.initial_state()
        flow_rate = 0.0 if schedule is None else schedule(problem.dt)
        problem.begin_step(1, problem.dt, flow_rate)
        manifest = export_system(problem.jacobian(x), directory)
        export_mesh(self.mesh, directory / "mesh.txt")
        n_subdomains = self.cfg.n_subdomains[0]
        export_decomposition(
            self.decompositions(n_subdomains).mesh, directory / "decomposition.txt"
        )
        return manifest


class FsiChannelBench(_ChannelBench):
    kind = "fsi_channel"

    def build_mesh(self) -> Mesh:
        s = self.settings
        return build_channel_mesh(
            s["nx"],
            s["ny_fluid"],
            s["ny_solid"],
            s["length"],
            s["lumen_height"],
            s["wall_thickness"],
        )

    def variants(self) -> list[str]:
        inner = self.cfg["facsi"]["inner_fluid"]
        if inner != "sweep":
            return [inner]
        return super().variants()

    def facsi_config(self, precond: str, n_subdomains: int) -> FacsiConfig:
        maps = build_dofmaps(self.mesh)
        decomps = self.decompositions(n_subdomains)
        settings = {**self.cfg["precond"], **self.cfg["facsi"]}
        return FacsiConfig(
            inner_fluid=precond,
            inner_solid=settings["inner_solid"],
            inner_geometry=settings["inner_geometry"],
            inner_krylov=settings["inner_krylov"],
            levels=settings["levels"],
            coarse_velocity=settings["coarse_velocity"],
            coarse_pressure=settings["coarse_pressure"],
            coarse_solid=settings["coarse_solid"],
            coarse_geometry=settings["coarse_geometry"],
            simple_alpha=settings["simple_alpha"],
            decomps={
                name: part
                for name, part in decomps._asdict().items()
                if part is not None and name != "mesh"
            },
            nullspaces={
                "solid": elasticity_nullspace(maps.d_s.coordinates),
                "geometry": translation_nullspace(maps.d_f.n_dofs),
                "velocity": translation_nullspace(maps.u.n_dofs),
            },
        )

    def time_problem(self, precond: str, n_subdomains: int) -> FsiChannelProblem:
        schedule = self.schedule()
        assert schedule is not None
        return FsiChannelProblem(
            self.mesh,
            self.params,
            self.facsi_config(precond, n_subdomains),
            schedule,
            lumen_height=self.settings["lumen_height"],
            shape_derivative=self.settings["shape_derivative"],
        )

    def export(self, directory: Path) -> Path:
        problem = self.time_problem(self.variants()[0], self.cfg.n_subdomains[0])
        return self._export_common(problem, directory)


class StokesChannelBench(_ChannelBench):
    kind = "stokes_channel"
    convection: ClassVar[bool] = False

    def build_mesh(self) -> Mesh:
        s = self.settings
        return build_rectangle_mesh(
            s["nx"],
            s["ny_fluid"],
            s["length"],
            s["lumen_height"],
            tags={
                "left": "inlet",
                "right": "outlet",
                "bottom": "symmetry",
                "top": "clamp",
            },
        )

    def time_problem(self, precond: str, n_subdomains: int) -> FluidChannelProblem:
        schedule = self.schedule()
        assert schedule is not None
        factory = fluid_preconditioner(
            precond, self.decompositions(n_subdomains), self.cfg["precond"]
        )
        return FluidChannelProblem(
            self.mesh,
            self.params,
            factory,
            schedule,
            lumen_height=self.settings["lumen_height"],
            convection=self.convection,
        )

    def export(self, directory: Path) -> Path:
        problem = self.time_problem(self.variants()[0], self.cfg.n_subdomains[0])
        return self._export_common(problem, directory)


class NavierStokesChannelBench(StokesChannelBench):
    kind = "navier_stokes_channel"
    convection = True


class PoissonBench(BenchProblem):
    """Laplace problem on the unit square with ``nx`` cells per side.

    Dirichlet data is held on the sides listed in ``poisson_dirichlet``.
    """

    kind = "poisson"

    def __init__(self, cfg: BenchConfig, flow_rate: float, seed: int):
        super().__init__(cfg, flow_rate, seed)
        nx = self.settings["nx"]
        self.mesh = build_rectangle_mesh(nx, nx)
        sides = self.settings["poisson_dirichlet"]
        self.poisson = assemble_poisson(
            self.mesh, tuple(RECTANGLE_SIDE_TAGS[side] for side in sides)
        )

    @property
    def n_steps(self) -> int:
        return 1

    def schedule(self) -> RampPlateau | None:
        return None

    def variants(self) -> list[str]:
        precond = self.cfg["precond"]
        if precond["levels"] == 1:
            return ["schwarz-1L"]
        return [f"schwarz-{precond['coarse_scalar']}"]

    def decomposition(self, n_subdomains: int) -> Decomposition:
        precond = self.cfg["precond"]
        base = partition_mesh(
            self.mesh,
            n_subdomains,
            precond["overlap"],
            self.seed,
            precond["partitioner"],
        )
        return induce_field(
            base,
            np.arange(self.mesh.n_elements),
            self.poisson.element_dofs,
            self.mesh.n_vertices,
            self.poisson.dirichlet_dofs,
        )

    def problem_hash(self) -> str:
        K = self.poisson.K
        return hash_arrays([K.data, K.indices, K.indptr, self.poisson.rhs])

    def time_problem(self, precond: str, n_subdomains: int) -> LinearProblem:
        decomp = self.decomposition(n_subdomains)
        settings = self.cfg["precond"]

        def build(K: SparseMatrix) -> Operator:
            return build_schwarz(
                K,
                decomp,
                levels=settings["levels"],
                coarse_kind=settings["coarse_scalar"],
            )

        return LinearProblem(self.poisson.K, self.poisson.rhs, build)

    def export(self, directory: Path) -> Path:
        create_dir(directory)
        write_matrix_market(directory / "K.mtx", self.poisson.K, comment="poisson")
        write_text_file(
            directory / "rhs.txt",
            "\n".join(repr(float(v)) for v in self.poisson.rhs) + "\n",
        )
        export_mesh(self.mesh, directory / "mesh.txt")
        decomp = self.decomposition(self.cfg.n_subdomains[0])
        export_decomposition(decomp, directory / "decomposition.txt")
        files = {"matrix": "K.mtx", "rhs": "rhs.txt", "mesh": "mesh.txt"}
        if self.cfg["precond"]["levels"] == 2:
            basis = build_coarse_basis(
                self.poisson.K, decomp, self.cfg["precond"]["coarse_scalar"]
            )
            export_coarse_basis(basis, directory / "coarse.mtx")
            files["coarse"] = "coarse.mtx"
        path = directory / "manifest.toml"
        create_toml(path, {"poisson": files})
        log.info("Exported Poisson system to %s", directory)
        return path


class SyntheticBench(BenchProblem):
    """A seeded random block system with FSI block structure, solved with FaCSI."""

    kind = "synthetic"

    def __init__(self, cfg: BenchConfig, flow_rate: float, seed: int):
        super().__init__(cfg, flow_rate, seed)
        s = self.settings
        self.system = generate_synthetic_block_system(
            seed,
            {
                "solid": s["synthetic_solid"],
                "geometry": s["synthetic_geometry"],
                "fluid_velocity": s["synthetic_velocity"],
                "fluid_pressure": s["synthetic_pressure"],
            },
            s["synthetic_interface"],
        )

    @property
    def n_steps(self) -> int:
        return 1

    def schedule(self) -> RampPlateau | None:
        return None

    def variants(self) -> list[str]:
        inner = self.cfg["facsi"]["inner_fluid"]
        if inner != "sweep":
            return [inner]
        return super().variants()

    def decompositions(self, n_subdomains: int) -> dict[str, Decomposition]:
        overlap = self.cfg["precond"]["overlap"]
        system = self.system
        pressure_graph = system["F_pu"] @ system["F_up"] + system["F_pp"]
        operators = {
            "solid": system["S"],
            "geometry": system["G"],
            "fluid": system.fluid_matrix(),
            "velocity": system["F_uu"],
            "pressure": pressure_graph.tocsr(),
        }
        return {
            name: decompose_matrix_graph(K, n_subdomains, overlap, self.seed)
            for name, K in operators.items()
        }

    def problem_hash(self) -> str:
        arrays: list[Any] = []
        for name in sorted(self.system.blocks):
            block = self.system[name]
            arrays += [block.data, block.indices, block.indptr]
        return hash_arrays([*arrays, self.system.rhs.to_array()])

    def time_problem(self, precond: str, n_subdomains: int) -> LinearProblem:
        settings = {**self.cfg["precond"], **self.cfg["facsi"]}
        n_u = self.system.layout["fluid_velocity"]
        facsi = FacsiConfig(
            inner_fluid=precond,
            inner_solid=settings["inner_solid"],
            inner_geometry=settings["inner_geometry"],
            inner_krylov=settings["inner_krylov"],
            levels=settings["levels"],
            coarse_velocity=settings["coarse_velocity"],
            coarse_pressure=settings["coarse_pressure"],
            coarse_solid=settings["coarse_solid"],
            coarse_geometry=settings["coarse_geometry"],
            simple_alpha=settings["simple_alpha"],
            decomps=self.decompositions(n_subdomains),
            nullspaces={"velocity": np.ones((n_u, 1))},
        )
        return LinearProblem(
            self.system,
            self.system.rhs.to_array(),
            lambda J: build_facsi(J, facsi),
        )

    def export(self, directory: Path) -> Path:
        return export_system(self.system, directory)


BENCH_PROBLEMS: dict[str, type[BenchProblem]] = {
    cls.kind: cls
    for cls in (
        FsiChannelBench,
        StokesChannelBench,
        NavierStokesChannelBench,
        PoissonBench,
        SyntheticBench,
    )
}


def make_problem(cfg: BenchConfig, flow_rate: float, seed: int) -> BenchProblem:
    """Instantiate the problem kind named by the config."""

    return BENCH_PROBLEMS[cfg.problem](cfg, flow_rate, seed)
