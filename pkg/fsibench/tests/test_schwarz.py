"""
Test schwarz module.
"""
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fsibench.fem import (
    PhysicalParams,
    assemble_poisson,
    assemble_solid,
    build_channel_mesh,
    build_dofmaps,
    build_rectangle_mesh,
)
from fsibench.linalg import BlockVector, DimensionMismatch, read_matrix_market
from fsibench.partition import (
    classify_interface,
    extend_overlap,
    induce_field,
    partition_boxes,
)
from fsibench.schwarz import (
    CoarseSpaceError,
    SchwarzPreconditioner,
    apply_schwarz,
    build_coarse_basis,
    build_gdsw_basis,
    build_rgdsw_basis,
    build_schwarz,
    coarse_basis_from_values,
    coarse_entities,
    elasticity_nullspace,
    embed_nullspace,
    export_coarse_basis,
    gdsw_interface_values,
    harmonic_defect,
    interface_values,
    rgdsw_interface_values,
    translation_nullspace,
)
from fsibench.solver import GmresConfig, gmres


def poisson_setup(
    n_cells: int = 8,
    boxes: tuple[int, int] = (2, 2),
    overlap: int = 1,
    dirichlet_tags: tuple[str, ...] | None = None,
):
    mesh = build_rectangle_mesh(n_cells, n_cells)
    problem = assemble_poisson(mesh, dirichlet_tags)
    base = extend_overlap(partition_boxes(mesh, *boxes), mesh, overlap)
    decomp = induce_field(
        base,
        np.arange(mesh.n_elements),
        mesh.triangles,
        mesh.n_vertices,
        problem.dirichlet_dofs,
    )
    return problem, decomp


def gmres_iterations(problem, M) -> int:
    K = problem.K
    result = gmres(lambda x: K @ x, M, problem.rhs, GmresConfig(tol=1e-8))
    assert result.converged
    return result.iters


class TestOneLevel(unittest.TestCase):
    """Test the one-level additive Schwarz preconditioner."""

    def test_single_subdomain_is_exact(self) -> None:
        """Test that one subdomain covering everything inverts the operator."""
        problem, decomp = poisson_setup(4, (1, 1), 0)
        M = build_schwarz(problem.K, decomp, levels=1)
        r = np.linspace(0.0, 1.0, decomp.n_dofs)
        assert_allclose(problem.K @ M(r), r, atol=1e-12)

    def test_additive_sum(self) -> None:
        """Test that the application sums the local solves."""
        problem, decomp = poisson_setup(4)
        M = build_schwarz(problem.K, decomp, levels=1)
        r = np.random.default_rng(0).standard_normal(decomp.n_dofs)
        expected = np.zeros(decomp.n_dofs)
        for dofs in decomp.overlapping_dofs:
            local = problem.K[dofs][:, dofs].toarray()
            expected[dofs] += np.linalg.solve(local, r[dofs])
        assert_allclose(M(r), expected, atol=1e-12)

    def test_dimension_checks(self) -> None:
        """Test mismatched operator and residual sizes."""
        problem, decomp = poisson_setup(4)
        M = build_schwarz(problem.K, decomp, levels=1)
        with pytest.raises(DimensionMismatch):
            M(np.zeros(3))
        small, _ = poisson_setup(2, (1, 1), 0)
        with pytest.raises(DimensionMismatch):
            build_schwarz(small.K, decomp, levels=1)

    def test_invalid_levels(self) -> None:
        """Test level validation of the preconditioner."""
        problem, decomp = poisson_setup(4)
        M = build_schwarz(problem.K, decomp, levels=1)
        with pytest.raises(ValueError):
            SchwarzPreconditioner(3, decomp, M.local_facts)
        with pytest.raises(ValueError):
            SchwarzPreconditioner(2, decomp, M.local_facts)


class TestCoarseSpaces(unittest.TestCase):
    """Test the GDSW, RGDSW and subdomain coarse spaces."""

    def test_dimensions(self) -> None:
        """Test coarse dimensions for a 2 x 2 box split of a scalar problem."""
        problem, decomp = poisson_setup()
        dims = {
            kind: build_coarse_basis(problem.K, decomp, kind).dim
            for kind in ("gdsw", "rgdsw", "subdomain")
        }
        # one cross point and four edges; edges fold into the cross point
        self.assertEqual(dims, {"gdsw": 5, "rgdsw": 1, "subdomain": 4})

    def test_named_builders(self) -> None:
        """Test that the GDSW and RGDSW builders agree with the dispatcher."""
        problem, decomp = poisson_setup()
        for build, kind, dim in (
            (build_gdsw_basis, "gdsw", 5),
            (build_rgdsw_basis, "rgdsw", 1),
        ):
            basis = build(problem.K, decomp)
            self.assertEqual(basis.dim, dim)
            assert_allclose(
                basis.phi.toarray(),
                build_coarse_basis(problem.K, decomp, kind).phi.toarray(),
            )

    def test_interface_partition_of_unity(self) -> None:
        """Test that interface values of constants sum to one on the interface."""
        _, decomp = poisson_setup()
        partition = classify_interface(decomp)
        ones = np.ones((decomp.n_dofs, 1))
        for values in (
            gdsw_interface_values(partition, ones),
            rgdsw_interface_values(partition, ones),
        ):
            assert_allclose(values.sum(axis=1)[partition.dofs], 1.0)

    def test_entities(self) -> None:
        """Test that every edge is owned by the cross point."""
        _, decomp = poisson_setup()
        partition = classify_interface(decomp)
        cross = partition.vertices[0]
        owners = coarse_entities(partition)
        for edge in partition.edges:
            self.assertEqual(owners[edge], [cross])

    def test_harmonic_extension(self) -> None:
        """Test that extended basis functions are discrete harmonic."""
        problem, decomp = poisson_setup()
        for kind in ("gdsw", "rgdsw"):
            basis = build_coarse_basis(problem.K, decomp, kind)
            self.assertLess(harmonic_defect(problem.K, decomp, basis.phi), 1e-12)

    def test_zero_on_dirichlet(self) -> None:
        """Test that basis functions vanish on fixed DoFs."""
        problem, decomp = poisson_setup()
        basis = build_coarse_basis(problem.K, decomp, "gdsw")
        dense = basis.phi.toarray()
        assert_allclose(dense[problem.dirichlet_dofs], 0.0)

    def test_empty(self) -> None:
        """Test that a coarse space without columns raises CoarseSpaceError."""
        problem, decomp = poisson_setup()
        with pytest.raises(CoarseSpaceError):
            coarse_basis_from_values(
                problem.K, decomp, np.zeros((decomp.n_dofs, 0)), "gdsw"
            )

    def test_unknown_kind(self) -> None:
        """Test that an unknown coarse space raises ValueError."""
        problem, decomp = poisson_setup()
        with pytest.raises(ValueError):
            build_coarse_basis(problem.K, decomp, "agdsw")
        with pytest.raises(ValueError):
            interface_values(decomp, "agdsw", np.ones((decomp.n_dofs, 1)))

    def test_export(self) -> None:
        """Test that the exported basis reads back unchanged."""
        problem, decomp = poisson_setup()
        basis = build_coarse_basis(problem.K, decomp, "rgdsw")
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "coarse.mtx"
            export_coarse_basis(basis, path)
            assert_allclose(read_matrix_market(path).toarray(), basis.phi.toarray())


class TestTwoLevel(unittest.TestCase):
    """Test the two-level preconditioner."""

    def test_coarse_improves_iterations(self) -> None:
        """Test that both coarse spaces beat one level on 32x32 with 16 subdomains."""
        problem, decomp = poisson_setup(32, (4, 4), dirichlet_tags=("inlet",))
        one = gmres_iterations(problem, build_schwarz(problem.K, decomp, levels=1))
        gdsw = gmres_iterations(
            problem, build_schwarz(problem.K, decomp, levels=2, coarse_kind="gdsw")
        )
        rgdsw = gmres_iterations(
            problem, build_schwarz(problem.K, decomp, levels=2, coarse_kind="rgdsw")
        )
        self.assertLess(gdsw, one)
        self.assertLess(rgdsw, one)
        self.assertEqual((one, gdsw, rgdsw), (33, 27, 30))

    def test_prebuilt_coarse(self) -> None:
        """Test that a prebuilt coarse basis is used as given."""
        problem, decomp = poisson_setup()
        basis = build_coarse_basis(problem.K, decomp, "subdomain")
        M = build_schwarz(problem.K, decomp, levels=2, coarse=basis)
        self.assertIs(M.coarse, basis)

    def test_apply_is_linear(self) -> None:
        """Test that apply_schwarz is the call and acts linearly."""
        problem, decomp = poisson_setup()
        M = build_schwarz(problem.K, decomp, levels=2, coarse_kind="rgdsw")
        rng = np.random.default_rng(4)
        a, b = rng.standard_normal((2, decomp.n_dofs))
        assert_allclose(apply_schwarz(M, a), M(a))
        assert_allclose(
            apply_schwarz(M, 2.0 * a - b),
            2.0 * apply_schwarz(M, a) - apply_schwarz(M, b),
            atol=1e-12,
        )

    @pytest.mark.slow
    def test_scalability(self) -> None:
        """Test that two-level counts stay bounded with fixed H/h while one-level
        counts grow."""
        two, one = [], []
        for side in (2, 4, 8):
            problem, decomp = poisson_setup(
                8 * side, (side, side), dirichlet_tags=("inlet",)
            )
            one.append(gmres_iterations(problem, build_schwarz(problem.K, decomp, 1)))
            two.append(gmres_iterations(problem, build_schwarz(problem.K, decomp, 2)))
        self.assertLessEqual(max(two), 1.5 * min(two))
        self.assertTrue(all(a < b for a, b in zip(one, one[1:])))
        self.assertEqual((two, one), ([21, 27, 30], [19, 33, 60]))


class TestNullspaces(unittest.TestCase):
    """Test nullspace builders."""

    def test_translations(self) -> None:
        """Test interleaved translation modes."""
        modes = translation_nullspace(6)
        assert_allclose(modes[:, 0], [1, 0, 1, 0, 1, 0])
        assert_allclose(modes[:, 1], [0, 1, 0, 1, 0, 1])
        with pytest.raises(ValueError):
            translation_nullspace(5)

    def test_rigid_modes_in_kernel(self) -> None:
        """Test that rigid body modes lie in the kernel of the elastic stiffness."""
        mesh = build_channel_mesh(3, 1, 2, 1.0, 0.3, 0.2)
        maps = build_dofmaps(mesh)
        blocks = assemble_solid(BlockVector.zeros(maps.layout), mesh, PhysicalParams())
        modes = elasticity_nullspace(maps.d_s.coordinates)
        self.assertEqual(modes.shape, (maps.d_s.n_dofs, 3))
        scale = abs(blocks.K).max()
        assert_allclose(blocks.K @ modes, 0.0, atol=1e-10 * scale)

    def test_embed(self) -> None:
        """Test placing field modes into a larger numbering."""
        out = embed_nullspace(np.ones((2, 1)), [1, 3], 4)
        assert_allclose(out[:, 0], [0.0, 1.0, 0.0, 1.0])
