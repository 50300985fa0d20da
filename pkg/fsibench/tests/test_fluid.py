"""
Test fluid module.
"""
import unittest

import numpy as np
import pytest
import scipy.sparse as sp
from numpy.testing import assert_allclose

from fsibench.fem import (
    FsiHistory,
    PhysicalParams,
    assemble_fluid_system,
    build_dofmaps,
    build_rectangle_mesh,
)
from fsibench.fluid import (
    HfError,
    InnerSolveError,
    InnerSolverConfig,
    SaddleBlocks,
    SingularSchurError,
    apply_simple,
    build_inner_solver,
    build_monolithic_fluid,
    build_simple,
    compute_hf,
    has_pressure_nullspace,
    pin_pressure,
    schur_simple,
    simple_product,
)
from fsibench.linalg import BlockVector, DimensionMismatch
from fsibench.partition import decompose_fields
from fsibench.schwarz import translation_nullspace
from fsibench.solver import GmresConfig, gmres

CHANNEL_TAGS = {
    "left": "inlet",
    "right": "outlet",
    "bottom": "symmetry",
    "top": "clamp",
}


def toy_blocks() -> SaddleBlocks:
    F = sp.csr_matrix(np.array([[4.0, -1.0], [-1.0, 4.0]]))
    Bt = sp.csr_matrix(np.array([[1.0], [1.0]]))
    return SaddleBlocks(F, Bt, sp.csr_matrix(Bt.T), sp.csr_matrix((1, 1)))


def stokes_channel(tags: dict[str, str] = CHANNEL_TAGS, nx: int = 6, ny: int = 3):
    mesh = build_rectangle_mesh(nx, ny, 2.0, 1.0, tags)
    maps = build_dofmaps(mesh)
    layout = {
        "solid": 0,
        "geometry": 0,
        "fluid_velocity": maps.u.n_dofs,
        "fluid_pressure": maps.p.n_dofs,
        "interface": 0,
    }
    history = FsiHistory(
        alpha0=1.0,
        u_history=np.zeros(maps.u.n_dofs),
        d_history=np.zeros(0),
        solid_predictor=np.zeros(0),
        interface_velocity=np.zeros(0),
        flow_rate=1.0,
        lumen_height=1.0,
        convection=False,
    )
    system = assemble_fluid_system(
        BlockVector.zeros(layout), mesh, PhysicalParams(), history
    )
    return mesh, maps, system


def iterations(K, M, b) -> int:
    result = gmres(lambda x: K @ x, M, b, GmresConfig(tol=1e-8, max_iter=300))
    assert result.converged
    assert_allclose(K @ result.x, b, atol=1e-6 * np.linalg.norm(b))
    return result.iters


class TestComputeHf(unittest.TestCase):
    """Test compute_hf function."""

    def test_variants(self) -> None:
        """Test reciprocal diagonal and reciprocal absolute row sums."""
        F = toy_blocks().F
        assert_allclose(compute_hf(F, "simple"), [0.25, 0.25])
        assert_allclose(compute_hf(F, "simplec"), [0.2, 0.2])

    def test_nonpositive(self) -> None:
        """Test that a nonpositive diagonal names its row."""
        F = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, -2.0]]))
        with pytest.raises(HfError) as error:
            compute_hf(F, "simple")
        self.assertEqual(error.value.row, 1)
        self.assertEqual(
            str(error.value), "Nonpositive diagonal entry in row 1 (SIMPLE)"
        )

    def test_zero_row(self) -> None:
        """Test that an empty row fails the SIMPLEC row sum."""
        F = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, 0.0]]))
        with pytest.raises(HfError):
            compute_hf(F, "simplec")

    def test_invalid(self) -> None:
        """Test unknown variants and nonsquare blocks."""
        with pytest.raises(ValueError):
            compute_hf(toy_blocks().F, "piso")
        with pytest.raises(ValueError):
            compute_hf(sp.csr_matrix((2, 3)), "simple")


class TestSimple(unittest.TestCase):
    """Test the SIMPLE and SIMPLEC preconditioners."""

    def test_schur_values(self) -> None:
        """Test the Schur approximation of the 2 x 2 example."""
        blocks = toy_blocks()
        simple = schur_simple(blocks, compute_hf(blocks.F, "simple"))
        simplec = schur_simple(blocks, compute_hf(blocks.F, "simplec"))
        assert_allclose(simple.toarray(), [[-0.5]])
        assert_allclose(simplec.toarray(), [[-0.4]])

    def test_application_inverts_product(self) -> None:
        """Test that applying the factors inverts their dense product."""
        blocks = toy_blocks()
        r = np.array([1.0, -2.0, 0.5])
        for variant in ("simple", "simplec"):
            for alpha in (1.0, 0.8):
                M = build_simple(blocks, variant, alpha)
                P = simple_product(M)
                assert_allclose(P @ M(r), r, atol=1e-13)

    def test_lower_rows_reproduce_operator(self) -> None:
        """Test that with alpha = 1 the product keeps the pressure rows exact."""
        _, _, system = stokes_channel(nx=3, ny=2)
        blocks = SaddleBlocks.from_system(system)
        M = build_simple(blocks, "simple", 1.0)
        K = blocks.matrix().toarray()
        P = simple_product(M)
        assert_allclose(P[blocks.n_u :], K[blocks.n_u :], atol=1e-12)
        assert_allclose(P[: blocks.n_u, : blocks.n_u], K[: blocks.n_u, : blocks.n_u])

    def test_zero_schur(self) -> None:
        """Test that a zero Schur approximation raises SingularSchurError."""
        F = sp.identity(2, format="csr")
        empty_Bt = sp.csr_matrix((2, 1))
        blocks = SaddleBlocks(F, empty_Bt, sp.csr_matrix((1, 2)), sp.csr_matrix((1, 1)))
        with pytest.raises(SingularSchurError):
            build_simple(blocks)

    def test_apply_simple_parts(self) -> None:
        """Test the split application against the two factor solves."""
        blocks = toy_blocks()
        M = build_simple(blocks, "simplec", 0.8)
        r_u, r_p = np.array([1.0, -2.0]), np.array([0.5])
        z_u, z_p = apply_simple(M, r_u, r_p)
        assert_allclose(np.concatenate([z_u, z_p]), M(np.concatenate([r_u, r_p])))
        # y_u = F^-1 r_u = [2/15, -7/15], S = -0.4
        y_p = (0.5 - (2.0 - 7.0) / 15.0) / -0.4
        assert_allclose(z_p, [0.8 * y_p])
        assert_allclose(z_u, np.array([2.0, -7.0]) / 15.0 - 0.2 * y_p)
        with pytest.raises(DimensionMismatch):
            apply_simple(M, r_u, np.zeros(2))

    def test_invalid_alpha(self) -> None:
        """Test that a nonpositive damping raises ValueError."""
        with pytest.raises(ValueError):
            build_simple(toy_blocks(), alpha=0.0)

    def test_dimension(self) -> None:
        """Test that a residual of the wrong size raises DimensionMismatch."""
        M = build_simple(toy_blocks())
        with pytest.raises(DimensionMismatch):
            M(np.zeros(2))

    def test_schwarz_inner_solvers(self) -> None:
        """Test SIMPLEC with Schwarz approximations of F and S on a channel."""
        mesh, maps, system = stokes_channel()
        fields = decompose_fields(mesh, maps, 2)
        blocks = SaddleBlocks.from_system(system)
        inner_F = InnerSolverConfig(
            "schwarz",
            fields.velocity,
            coarse_kind="rgdsw",
            nullspace=translation_nullspace(maps.u.n_dofs),
        )
        inner_S = InnerSolverConfig("schwarz", fields.pressure, coarse_kind="rgdsw")
        M = build_simple(blocks, "simplec", 1.0, inner_F, inner_S)
        iterations(blocks.matrix(), M, system.rhs.fluid())


class TestEnclosedFlow(unittest.TestCase):
    """Test the pressure constant of enclosed flow."""

    def test_detection(self) -> None:
        """Test that only the fully clamped box has a pressure nullspace."""
        _, _, open_system = stokes_channel(nx=3, ny=2)
        clamped = dict.fromkeys(CHANNEL_TAGS, "clamp")
        _, _, closed_system = stokes_channel(clamped, nx=3, ny=2)
        self.assertFalse(has_pressure_nullspace(SaddleBlocks.from_system(open_system)))
        self.assertTrue(has_pressure_nullspace(SaddleBlocks.from_system(closed_system)))

    def test_pinned_schur(self) -> None:
        """Test that the Schur approximation gets an identity row for DoF 0."""
        clamped = dict.fromkeys(CHANNEL_TAGS, "clamp")
        _, _, system = stokes_channel(clamped, nx=3, ny=2)
        M = build_simple(SaddleBlocks.from_system(system), "simple")
        row = M.schur_approx.getrow(0).toarray().ravel()
        expected = np.zeros(row.size)
        expected[0] = 1.0
        assert_allclose(row, expected)

    def test_pin_pressure_range(self) -> None:
        """Test that a pressure DoF out of range raises ValueError."""
        K = toy_blocks().matrix()
        with pytest.raises(ValueError):
            pin_pressure(K, 2, 1)


class TestInnerSolver(unittest.TestCase):
    """Test build_inner_solver function."""

    def test_schwarz_needs_decomposition(self) -> None:
        """Test that a Schwarz inner solver without decomposition is rejected."""
        with pytest.raises(ValueError):
            InnerSolverConfig("schwarz")
        with pytest.raises(ValueError):
            InnerSolverConfig("amg")

    def test_singular(self) -> None:
        """Test that a singular block raises InnerSolveError naming the stage."""
        K = sp.csr_matrix(np.array([[1.0, 1.0], [1.0, 1.0]]))
        with pytest.raises(InnerSolveError) as error:
            build_inner_solver(K, InnerSolverConfig(), "F")
        self.assertEqual(error.value.stage, "F")

    def test_krylov_wrapper(self) -> None:
        """Test that the Krylov wrapper solves to its tolerance."""
        mesh, maps, system = stokes_channel(nx=4, ny=2)
        fields = decompose_fields(mesh, maps, 2)
        F = system["F_uu"]
        cfg = InnerSolverConfig(
            "schwarz", fields.velocity, levels=1, krylov=True, krylov_tol=1e-12
        )
        solve = build_inner_solver(F, cfg, "F")
        r = np.ones(F.shape[0])
        assert_allclose(F @ solve(r), r, atol=1e-9)


    def test_krylov_not_converged(self) -> None:
        """Test that an inner solve stopped early warns and returns its iterate."""
        mesh, maps, system = stokes_channel(nx=4, ny=2)
        fields = decompose_fields(mesh, maps, 2)
        F = system["F_uu"]
        cfg = InnerSolverConfig(
            "schwarz",
            fields.velocity,
            levels=1,
            krylov=True,
            krylov_tol=1e-14,
            krylov_max_iter=1,
        )
        solve = build_inner_solver(F, cfg, "F")
        r = np.ones(F.shape[0])
        with self.assertLogs("fsibench.fluid.inner", level="WARNING") as logs:
            x = solve(r)
        self.assertIn("Inner solve F stopped", logs.output[0])
        self.assertTrue(np.all(np.isfinite(x)))


class TestMonolithic(unittest.TestCase):
    """Test build_monolithic_fluid function."""

    def test_coarse_columns(self) -> None:
        """Test that the coarse space stacks velocity and pressure columns."""
        mesh, maps, system = stokes_channel()
        fields = decompose_fields(mesh, maps, 2)
        M = build_monolithic_fluid(system.fluid_matrix(), fields.fluid, maps.u.n_dofs)
        self.assertGreater(M.velocity_columns, 0)
        self.assertGreater(M.pressure_columns, 0)
        self.assertEqual(M.coarse_dim, M.velocity_columns + M.pressure_columns)

    def test_converges(self) -> None:
        """Test GMRES convergence with one and two levels."""
        mesh, maps, system = stokes_channel()
        fields = decompose_fields(mesh, maps, 3)
        K = system.fluid_matrix()
        for levels in (1, 2):
            M = build_monolithic_fluid(K, fields.fluid, maps.u.n_dofs, levels=levels)
            iterations(K, M, system.rhs.fluid())

    def test_split_application(self) -> None:
        """Test that the split application matches the flat one."""
        mesh, maps, system = stokes_channel(nx=4, ny=2)
        fields = decompose_fields(mesh, maps, 2)
        M = build_monolithic_fluid(system.fluid_matrix(), fields.fluid, maps.u.n_dofs)
        r = np.random.default_rng(1).standard_normal(system.fluid_matrix().shape[0])
        z_u, z_p = M.apply(r[: maps.u.n_dofs], r[maps.u.n_dofs :])
        assert_allclose(np.concatenate([z_u, z_p]), M(r))
