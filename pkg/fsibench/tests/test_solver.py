"""
Test solver module.
"""
import math
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pytest
import scipy.sparse as sp
from numpy.testing import assert_allclose

from fsibench.linalg import DimensionMismatch
from fsibench.solver import (
    BdfHistory,
    DecayProblem,
    ForcingConfig,
    ForcingError,
    GmresBreakdown,
    GmresConfig,
    NewmarkScheme,
    NewmarkState,
    NewtonConfig,
    NewtonFailure,
    NewtonStepStats,
    OscillatorProblem,
    RampPlateau,
    RampPlateauPulse,
    SolveStats,
    TimestepStats,
    as_operator,
    averages_from_csv,
    bdf_coefficients,
    forcing_term,
    gmres,
    make_schedule,
    newton_solve,
    time_loop,
)


def laplacian_1d(n: int) -> sp.csr_matrix:
    return sp.diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(n, n), format="csr")


def step(newton_idx: int, gmres_iters: int, converged: bool = True) -> NewtonStepStats:
    return NewtonStepStats(newton_idx, 1e-4, gmres_iters, 0.1, 0.5, 0.25, converged)


class StuckProblem:
    """A residual Newton can never reduce."""

    dt = 0.1

    def initial_state(self) -> np.ndarray:
        return np.zeros(1)

    def begin_step(self, step: int, time: float, flow_rate: float) -> None:
        pass

    def residual(self, x: np.ndarray) -> np.ndarray:
        return np.ones(1)

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        return np.eye(1)

    def preconditioner(self, J, x):
        return None

    def end_step(self, x: np.ndarray) -> dict[str, float]:
        return {}


class TestGmres(unittest.TestCase):
    """Test gmres function."""

    def test_converges(self) -> None:
        """Test that the true relative residual meets the tolerance."""
        A = laplacian_1d(30)
        b = np.ones(30)
        result = gmres(lambda x: A @ x, None, b, GmresConfig(tol=1e-10))
        self.assertTrue(result.converged)
        residual = np.linalg.norm(b - A @ result.x)
        self.assertLessEqual(residual, 1e-10 * np.linalg.norm(b))
        self.assertLessEqual(result.relative_residual, 1e-10)
        self.assertLessEqual(result.iters, 30)

    def test_history_monotone(self) -> None:
        """Test that the history of an unrestarted run never increases."""
        A = laplacian_1d(20) + sp.diags(np.linspace(0.0, 1.0, 20))
        result = gmres(lambda x: A @ x, None, np.arange(20.0), GmresConfig(tol=1e-10))
        history = np.array(result.residual_history)
        self.assertEqual(history[0], 1.0)
        self.assertTrue(np.all(np.diff(history) <= 0.0))
        self.assertEqual(len(history), result.iters + 1)

    def test_history_shows_stagnation(self) -> None:
        """Test that a stagnating run records every estimate as is."""
        n = 6
        shift = sp.diags([np.ones(n - 1), np.ones(1)], [-1, n - 1], format="csr")
        b = np.zeros(n)
        b[0] = 1.0
        result = gmres(lambda x: shift @ x, None, b, GmresConfig(tol=1e-10))
        self.assertTrue(result.converged)
        self.assertEqual(result.iters, n)
        assert_allclose(result.residual_history, [1.0] * n + [0.0], atol=1e-14)

    def test_exact_preconditioner(self) -> None:
        """Test that the exact inverse converges in one iteration."""
        A = laplacian_1d(15).toarray()
        A_inv = np.linalg.inv(A)
        result = gmres(lambda x: A @ x, lambda r: A_inv @ r, np.ones(15))
        self.assertEqual(result.iters, 1)

    def test_restart(self) -> None:
        """Test restarted GMRES on a nonsymmetric operator."""
        n = 40
        A = sp.diags([-1.0, 4.0, -1.3], [-1, 0, 1], shape=(n, n), format="csr")
        b = np.ones(n)
        cfg = GmresConfig(tol=1e-8, max_iter=2000, restart=10)
        result = gmres(lambda x: A @ x, None, b, cfg)
        self.assertTrue(result.converged)
        assert_allclose(A @ result.x, b, atol=1e-7 * np.linalg.norm(b))

    def test_zero_rhs(self) -> None:
        """Test that a zero right-hand side returns zero without iterating."""
        result = gmres(lambda x: x, None, np.zeros(4))
        self.assertEqual(result.iters, 0)
        assert_allclose(result.x, 0.0)

    def test_not_converged(self) -> None:
        """Test that exhausting max_iter flags the result."""
        A = laplacian_1d(50)
        result = gmres(lambda x: A @ x, None, np.ones(50), GmresConfig(max_iter=3))
        self.assertFalse(result.converged)
        self.assertEqual(result.iters, 3)

    def test_breakdown(self) -> None:
        """Test that a singular Hessenberg matrix raises GmresBreakdown."""
        with pytest.raises(GmresBreakdown) as error:
            gmres(lambda x: 0.0 * x, None, np.ones(1))
        self.assertEqual(str(error.value), "GMRES breakdown at iteration 1")

    def test_initial_guess_size(self) -> None:
        """Test that a wrong initial guess size raises DimensionMismatch."""
        with pytest.raises(DimensionMismatch):
            gmres(lambda x: x, None, np.ones(3), x0=np.zeros(2))

    def test_config(self) -> None:
        """Test configuration validation."""
        with pytest.raises(ValueError):
            GmresConfig(tol=0.0)
        with pytest.raises(ValueError):
            GmresConfig(max_iter=0)
        with pytest.raises(ValueError):
            GmresConfig(restart=0)


class TestForcing(unittest.TestCase):
    """Test forcing_term function."""

    def test_first_step(self) -> None:
        """Test that the first Newton step uses the loosest tolerance."""
        self.assertEqual(forcing_term(1.0, 1.0, ForcingConfig(), 0), 1e-4)

    def test_quadratic_rule(self) -> None:
        """Test gamma times the squared residual ratio."""
        eta = forcing_term(1.0, 1e-2, ForcingConfig(), 1)
        self.assertAlmostEqual(eta, 0.9e-4)

    def test_clamped(self) -> None:
        """Test clamping to the tightest and loosest tolerances."""
        cfg = ForcingConfig()
        self.assertEqual(forcing_term(1.0, 1e-6, cfg, 2), 1e-8)
        self.assertEqual(forcing_term(1.0, 0.5, cfg, 2), 1e-4)

    def test_safeguard(self) -> None:
        """Test that a large previous term bounds the next one from below."""
        cfg = ForcingConfig(eta_loose=0.5, eta_tight=1e-8)
        eta = forcing_term(1.0, 1e-2, cfg, 2, eta_prev=0.5)
        self.assertAlmostEqual(eta, 0.9 * 0.25)
        small = forcing_term(1.0, 1e-2, cfg, 2, eta_prev=0.1)
        self.assertAlmostEqual(small, 0.9e-4)

    def test_invalid_inputs(self) -> None:
        """Test that bad residuals or indices raise ForcingError."""
        with pytest.raises(ForcingError):
            forcing_term(0.0, 1.0, ForcingConfig(), 1)
        with pytest.raises(ForcingError):
            forcing_term(1.0, 1.0, ForcingConfig(), -1)

    def test_invalid_config(self) -> None:
        """Test that inverted bounds raise ValueError."""
        with pytest.raises(ValueError):
            ForcingConfig(eta_loose=1e-8, eta_tight=1e-4)
        with pytest.raises(ValueError):
            ForcingConfig(exponent=1.0)


class TestNewton(unittest.TestCase):
    """Test newton_solve function."""

    def test_square_root(self) -> None:
        """Test convergence to sqrt(2) with shrinking residuals."""
        result = newton_solve(
            lambda x: x**2 - 2.0, lambda x: np.array([[2.0 * x[0]]]), None, [1.0]
        )
        self.assertTrue(result.converged)
        assert_allclose(result.state, [math.sqrt(2.0)])
        self.assertLessEqual(result.iterations, 6)
        norms = result.residual_norms
        self.assertTrue(all(a > b for a, b in zip(norms, norms[1:])))
        indices = [s.newton_idx for s in result.steps]
        self.assertEqual(indices, list(range(1, result.iterations + 1)))

    def test_solved_start(self) -> None:
        """Test that a zero initial residual takes no Newton step."""
        result = newton_solve(lambda x: 0.0 * x, lambda x: np.eye(1), None, [3.0])
        self.assertTrue(result.converged)
        self.assertEqual(result.iterations, 0)

    def test_not_converged(self) -> None:
        """Test that running out of steps returns a non-converged result."""
        result = newton_solve(
            lambda x: np.ones(1),
            lambda x: np.eye(1),
            None,
            [0.0],
            NewtonConfig(max_newton=2),
        )
        self.assertFalse(result.converged)
        self.assertEqual(result.iterations, 2)

    def test_backtracking(self) -> None:
        """Test that an overshooting full step is halved and Newton still converges."""

        def jacobian(x):
            return np.array([[1.0 / (1.0 + x[0] ** 2)]])

        with self.assertLogs("fsibench.solver.newton", level="INFO") as logs:
            result = newton_solve(
                np.arctan, jacobian, None, [2.0], NewtonConfig(max_newton=20)
            )
        self.assertIn("step shortened to 0.5", logs.output[0])
        self.assertTrue(result.converged)
        assert_allclose(result.state, [0.0], atol=1e-6)
        norms = result.residual_norms
        self.assertTrue(all(a > b for a, b in zip(norms, norms[1:])))

        cfg = NewtonConfig(max_newton=3, max_backtracks=0)
        full = newton_solve(np.arctan, jacobian, None, [2.0], cfg)
        self.assertFalse(full.converged)
        self.assertGreater(full.residual_norms[1], full.residual_norms[0])

    def test_preconditioner_factory(self) -> None:
        """Test that the factory receives the Jacobian of the current iterate."""
        seen = []

        def factory(J, x):
            seen.append(float(J[0, 0]))
            return lambda r: r / J[0, 0]

        newton_solve(
            lambda x: x**2 - 4.0, lambda x: np.array([[2.0 * x[0]]]), factory, [1.0]
        )
        self.assertEqual(seen[0], 2.0)

    def test_as_operator(self) -> None:
        """Test Jacobians given as arrays, matrices, block systems and callables."""
        x = np.array([1.0, 2.0])
        dense = np.array([[2.0, 0.0], [0.0, 3.0]])
        expected = np.array([2.0, 6.0])
        assert_allclose(as_operator(dense)(x), expected)
        assert_allclose(as_operator(sp.csr_matrix(dense))(x), expected)
        assert_allclose(as_operator(lambda v: dense @ v)(x), expected)

        class WithMatvec:
            def matvec(self, v):
                return dense @ v

        assert_allclose(as_operator(WithMatvec())(x), expected)
        with pytest.raises(TypeError):
            as_operator("J")

    def test_config(self) -> None:
        """Test configuration validation."""
        with pytest.raises(ValueError):
            NewtonConfig(tol_rel=0.0)
        with pytest.raises(ValueError):
            NewtonConfig(max_newton=0)
        with pytest.raises(ValueError):
            NewtonConfig(max_backtracks=-1)


class TestIntegrators(unittest.TestCase):
    """Test the BDF and Newmark integrators."""

    def test_bdf_coefficients(self) -> None:
        """Test the first and second order coefficients."""
        self.assertEqual(bdf_coefficients(1), (1.0, (1.0,)))
        self.assertEqual(bdf_coefficients(2), (1.5, (2.0, -0.5)))
        with pytest.raises(ValueError):
            bdf_coefficients(3)

    def test_bdf_history(self) -> None:
        """Test that the order grows with the stored states."""
        history = BdfHistory()
        with pytest.raises(ValueError):
            history.order
        history.push([1.0])
        self.assertEqual(history.alpha0, 1.0)
        history.push([3.0])
        self.assertEqual(history.alpha0, 1.5)
        assert_allclose(history.combination(), [2.0 * 3.0 - 0.5 * 1.0])
        history.push([5.0])
        self.assertEqual(len(history.states), 2)

    def test_bdf2_second_order(self) -> None:
        """Test that halving the step quarters the decay error."""
        errors = []
        for dt in (0.02, 0.01):
            stats = time_loop(DecayProblem(dt), None, round(1.0 / dt))
            errors.append(stats.per_timestep[-1].monitors["error"])
        self.assertAlmostEqual(errors[0] / errors[1], 4.0, delta=0.4)

    def test_newmark_energy(self) -> None:
        """Test that the average acceleration rule conserves oscillator energy."""
        oscillator = OscillatorProblem(0.01)
        stats = time_loop(oscillator, None, 1000)
        e0 = 0.5 * oscillator.stiffness * oscillator.d0**2
        drift = abs(stats.per_timestep[-1].monitors["energy"] - e0) / e0
        self.assertLessEqual(drift, 1e-10)

    def test_newmark_velocity_split(self) -> None:
        """Test that the explicit part plus the factor term gives the new velocity."""
        scheme = NewmarkScheme(0.1)
        state = NewmarkState(np.array([1.0]), np.array([0.5]), np.array([-2.0]))
        d_new = np.array([1.02])
        predictor = scheme.predictor(state.d, state.v, state.a)
        advanced = state.advance(scheme, d_new)
        split = scheme.explicit_velocity(state.v, state.a, predictor)
        assert_allclose(split + scheme.velocity_factor * d_new, advanced.v)

    def test_newmark_invalid(self) -> None:
        """Test Newmark parameter validation."""
        with pytest.raises(ValueError):
            NewmarkScheme(0.0)
        with pytest.raises(ValueError):
            NewmarkScheme(0.1, beta=0.6)


class TestSchedules(unittest.TestCase):
    """Test the inflow schedules."""

    def test_ramp_plateau(self) -> None:
        """Test the linear ramp and the plateau."""
        schedule = RampPlateau(4.0, 0.1, 0.1)
        self.assertEqual(schedule(0.0), 0.0)
        self.assertAlmostEqual(schedule(0.05), 2.0)
        self.assertEqual(schedule(0.15), 4.0)
        self.assertAlmostEqual(schedule.duration, 0.2)

    def test_no_ramp(self) -> None:
        """Test that a zero ramp time starts at the plateau."""
        self.assertEqual(RampPlateau(3.0, 0.0, 1.0)(0.0), 3.0)

    def test_pulse(self) -> None:
        """Test the pulse peak and the plateau around it."""
        schedule = RampPlateauPulse(2.0, 0.1, 0.1, 0.2, 1.5)
        self.assertAlmostEqual(schedule(0.3), 3.0)
        self.assertEqual(schedule(0.45), 2.0)
        self.assertAlmostEqual(schedule.duration, 0.4)

    def test_make_schedule(self) -> None:
        """Test building schedules from a config section."""
        section = {"ramp_time": 0.2, "plateau_time": 0.0}
        self.assertIsInstance(make_schedule(section, 1.0), RampPlateau)
        pulse = {
            **section,
            "profile": "ramp_plateau_pulse",
            "pulse_time": 0.1,
            "pulse_peak": 2.0,
        }
        self.assertIsInstance(make_schedule(pulse, 1.0), RampPlateauPulse)
        with pytest.raises(ValueError):
            make_schedule({**section, "profile": "sine"}, 1.0)
        with pytest.raises(ValueError):
            RampPlateau(1.0, -0.1)


class TestStats(unittest.TestCase):
    """Test SolveStats class."""

    def stats(self) -> SolveStats:
        stats = SolveStats()
        first = [step(1, 10), step(2, 20)]
        stats.add(TimestepStats(1, 0.1, first, monitors={"q": 1.0}))
        stats.add(TimestepStats(2, 0.2, [step(1, 30, converged=False)]))
        stats.add(TimestepStats(3, 0.3, []))
        return stats

    def test_averages(self) -> None:
        """Test the averages over time steps."""
        stats = self.stats()
        self.assertEqual(stats.avg_gmres_per_newton, (15.0 + 30.0) / 2)
        self.assertEqual(stats.avg_newton, 1.0)
        self.assertEqual(stats.gmres_failures, 1)
        self.assertAlmostEqual(stats.setup_s, 1.5)
        self.assertAlmostEqual(stats.solve_s, 0.75)

    def test_csv_recomputes_averages(self) -> None:
        """Test that the averages can be recomputed from the written CSV."""
        stats = self.stats()
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "cells" / "stats.csv"
            stats.write_csv(path)
            text = path.read_text(encoding="utf-8")
        self.assertEqual(
            averages_from_csv(text), (stats.avg_gmres_per_newton, stats.avg_newton)
        )
        self.assertIn("3,0,0.0,0,0.0,0.0,0.0", text.splitlines())

    def test_monitors_csv(self) -> None:
        """Test the monitor table with missing values."""
        lines = self.stats().monitors_csv().splitlines()
        self.assertEqual(lines[0], "timestep,time,newton_iters,q")
        self.assertEqual(lines[1], "1,0.1,2,1.0")
        self.assertEqual(lines[2], "2,0.2,1,nan")

    def test_bad_header(self) -> None:
        """Test that a foreign CSV is rejected."""
        with pytest.raises(ValueError):
            averages_from_csv("a,b\n1,2\n")

    def test_empty(self) -> None:
        """Test averages of an empty run."""
        self.assertEqual(SolveStats().avg_newton, 0.0)
        self.assertEqual(SolveStats().avg_gmres_per_newton, 0.0)


class TestTimeLoop(unittest.TestCase):
    """Test time_loop function."""

    def test_monitors_and_schedule(self) -> None:
        """Test that every step records its time and monitors."""
        problem = DecayProblem(0.1)
        stats = time_loop(problem, RampPlateau(1.0, 0.2, 0.0), 5)
        self.assertEqual(stats.n_timesteps, 5)
        assert_allclose([t.time for t in stats.per_timestep], [0.1, 0.2, 0.3, 0.4, 0.5])
        self.assertIn("error", stats.per_timestep[-1].monitors)

    def test_newton_failure(self) -> None:
        """Test that a stuck Newton iteration names its time step."""
        with pytest.raises(NewtonFailure) as error:
            time_loop(StuckProblem(), None, 3, NewtonConfig(max_newton=2))
        self.assertEqual(error.value.step, 1)
        self.assertEqual(error.value.stats.n_timesteps, 1)
        self.assertTrue(str(error.value).startswith("Newton failed in time step 1"))

    def test_no_steps(self) -> None:
        """Test that zero steps raise ValueError."""
        with pytest.raises(ValueError):
            time_loop(DecayProblem(0.1), None, 0)
