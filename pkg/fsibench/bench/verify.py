"""
The acceptance suite behind ``bench verify``.

Every check returns ``(passed, detail)``. Dense checks compare preconditioners against
explicitly multiplied factors; trend checks run small sweeps and compare iteration
counts.
"""
from __future__ import annotations

import math
import time
from collections.abc import Callable
from typing import TYPE_CHECKING

import numpy as np
import scipy.sparse as sp

from fsibench.facsi import apply_bf_inv, build_facsi, condense_fluid
from fsibench.facsi.oracle import facsi_product, fluid_interface_matrix
from fsibench.fem import generate_synthetic_block_system
from fsibench.fluid import SaddleBlocks, build_simple, compute_hf, simple_product
from fsibench.linalg import BlockVector, dense_lu_factor
from fsibench.runners import CheckOutcome, CheckRunner
from fsibench.schwarz import build_schwarz
from fsibench.solver import (
    DecayProblem,
    GmresConfig,
    NewtonFailure,
    OscillatorProblem,
    gmres,
    time_loop,
)
from fsibench.utils.log import logger

from .config import BenchConfig
from .exceptions import AcceptanceFailure
from .problems import PoissonBench, make_problem
from .sweep import run_sweep

if TYPE_CHECKING:
    from fsibench.fem import BlockSystem

log = logger(__name__)

N_SEEDS = 25
ORACLE_TOL = 1e-10
SIMPLE_TOL = 1e-12
SCALING_SUBDOMAINS: tuple[int, ...] = (4, 16, 64)
# Cells per subdomain side in the scalability check
H_OVER_h = 8
# Dirichlet data on one side only, so most subdomains float at every N
SCALING_DIRICHLET: tuple[str, ...] = ("left",)
# Inflow rates spanning mass- to advection-dominated steps at TREND_DT
TREND_RATES: tuple[float, ...] = (2.0, 6.0, 12.0)
TREND_DT = 0.005
# Equal averaged iteration counts can differ in the last bits
COUNT_RTOL = 1e-9


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(float(np.linalg.norm(b)), np.finfo(float).tiny)
    return float(np.linalg.norm(a - b)) / scale


def _at_most(a: float, b: float, rtol: float = COUNT_RTOL) -> bool:
    return a <= b + rtol * max(1.0, abs(b))


def _non_decreasing(values: list[float], rtol: float = COUNT_RTOL) -> bool:
    return all(_at_most(a, b, rtol) for a, b in zip(values, values[1:]))


def _synthetic(seed: int) -> BlockSystem:
    sizes = {
        "solid": 10 + seed % 7,
        "geometry": 10 + seed % 5,
        "fluid_velocity": 24 + seed % 9,
        "fluid_pressure": 6 + seed % 3,
    }
    return generate_synthetic_block_system(seed, sizes, interface_size=6)


def check_facsi_oracle(n_seeds: int = N_SEEDS) -> CheckOutcome:
    """FaCSI with exact inner solves inverts ``B_S B_G B_F``."""

    worst = 0.0
    for seed in range(n_seeds):
        system = _synthetic(seed)
        M = build_facsi(system)
        product = facsi_product(system)
        rng = np.random.default_rng(seed)
        for _ in range(3):
            r = rng.standard_normal(system.n_dofs)
            worst = max(worst, _rel(M(r), np.linalg.solve(product, r)))
    return worst <= ORACLE_TOL, f"max relative error {worst:.2e} over {n_seeds} seeds"


def check_condensation(n_seeds: int = N_SEEDS) -> CheckOutcome:
    """Static condensation on ``F_II`` solves the fluid-interface saddle system."""

    worst = 0.0
    for seed in range(n_seeds):
        system = _synthetic(seed)
        fluid = condense_fluid(system)
        inner = dense_lu_factor(fluid.F_II).solve
        rng = np.random.default_rng(seed)
        r = BlockVector.zeros(system.layout).replace(
            fluid_velocity=rng.standard_normal(system.layout["fluid_velocity"]),
            fluid_pressure=rng.standard_normal(system.layout["fluid_pressure"]),
            interface=rng.standard_normal(system.layout["interface"]),
        )
        z = apply_bf_inv(r, inner, fluid)
        dense = np.linalg.solve(
            fluid_interface_matrix(system),
            np.concatenate(
                [r["fluid_velocity"], r["fluid_pressure"], r["interface"]]
            ),
        )
        got = np.concatenate(
            [z["fluid_velocity"], z["fluid_pressure"], z["interface"]]
        )
        worst = max(worst, _rel(got, dense))
    return worst <= ORACLE_TOL, f"max relative error {worst:.2e} over {n_seeds} seeds"


def check_simple_formulas() -> CheckOutcome:
    """``H_F`` on a 2x2 example and SIMPLE(C) against the dense factor product."""

    F = sp.csr_matrix(np.array([[4.0, -1.0], [-1.0, 4.0]]))
    hf_ok = np.allclose(compute_hf(F, "simple"), [0.25, 0.25]) and np.allclose(
        compute_hf(F, "simplec"), [0.2, 0.2]
    )
    worst = 0.0
    for seed in range(5):
        rng = np.random.default_rng(seed)
        n_u, n_p = 8, 3
        F_uu = rng.standard_normal((n_u, n_u)) + 10.0 * np.eye(n_u)
        B = rng.standard_normal((n_p, n_u))
        blocks = SaddleBlocks(
            sp.csr_matrix(F_uu),
            sp.csr_matrix(B.T),
            sp.csr_matrix(B),
            sp.csr_matrix((n_p, n_p)),
        )
        for variant in ("simple", "simplec"):
            for alpha in (1.0, 0.8):
                M = build_simple(blocks, variant, alpha)
                r = rng.standard_normal(n_u + n_p)
                worst = max(worst, _rel(M(r), np.linalg.solve(simple_product(M), r)))
    passed = hf_ok and worst <= SIMPLE_TOL
    return passed, f"H_F formulas {'ok' if hf_ok else 'wrong'}, max error {worst:.2e}"


def _poisson_counts(levels: int) -> list[int]:
    counts = []
    for n in SCALING_SUBDOMAINS:
        side = math.isqrt(n)
        cfg = BenchConfig("scalability").with_settings(
            problem={
                "kind": "poisson",
                "nx": side * H_OVER_h,
                "poisson_dirichlet": list(SCALING_DIRICHLET),
            },
            precond={"partitioner": "boxes", "overlap": 1, "levels": levels},
        )
        bench = PoissonBench(cfg, 0.0, 0)
        K, b = bench.poisson.K, bench.poisson.rhs
        M = build_schwarz(K, bench.decomposition(n), levels=levels, coarse_kind="gdsw")
        result = gmres(lambda x: K @ x, M, b, GmresConfig(tol=1e-8, max_iter=1000))
        counts.append(result.iters)
    return counts


def check_scalability() -> CheckOutcome:
    """Two-level counts stay bounded in N, one-level counts grow, and past the
    smallest N the coarse level saves iterations."""

    two = _poisson_counts(2)
    one = _poisson_counts(1)
    bounded = max(two) <= 1.5 * min(two)
    growing = all(a < b for a, b in zip(one, one[1:]))
    fewer = all(t < o for t, o in zip(two[1:], one[1:]))
    return bounded and growing and fewer, f"two-level {two}, one-level {one}"


def check_exact_preconditioner() -> CheckOutcome:
    """GMRES preconditioned by the exact inverse takes one iteration."""

    cfg = BenchConfig("exact").with_settings(problem={"kind": "poisson", "nx": 8})
    operators = [PoissonBench(cfg, 0.0, 0).poisson.K]
    operators += [_synthetic(seed).to_sparse() for seed in range(3)]
    counts = []
    for K in operators:
        lu = dense_lu_factor(K)
        b = np.random.default_rng(0).standard_normal(K.shape[0])
        result = gmres(lambda x, A=K: A @ x, lu.solve, b, GmresConfig(tol=1e-12))
        counts.append(result.iters)
    return all(c == 1 for c in counts), f"iterations {counts}"


def trend_config() -> BenchConfig:
    return BenchConfig("trend").with_settings(
        problem={"kind": "navier_stokes_channel", "nx": 8, "ny_fluid": 2, "n_steps": 3},
        physics={"dt": TREND_DT},
        schedule={"ramp_time": 0.002, "plateau_time": 0.01},
        precond={"fluid_precond": ["monolithic", "simplec"], "N_subdomains": [2]},
        sweep={"flow_rates": list(TREND_RATES)},
    )


def check_fluid_trend() -> CheckOutcome:
    """Monolithic needs no more iterations than SIMPLEC, SIMPLEC grows with the
    flow rate."""

    report = run_sweep(trend_config())
    if report.failed_rows:
        return False, f"{len(report.failed_rows)} cells failed"
    avg = {(row.flow_rate, row.precond): row.avg_iter for row in report.rows}
    simplec = [avg[(q, "simplec")] for q in TREND_RATES]
    monolithic = [avg[(q, "monolithic")] for q in TREND_RATES]
    below = all(_at_most(m, s) for m, s in zip(monolithic, simplec))
    rising = _non_decreasing(simplec)
    return below and rising, f"monolithic {monolithic}, simplec {simplec}"


def check_fsi_end_to_end() -> CheckOutcome:
    """20 steps of the flexible channel with FaCSI and a monolithic fluid solver."""

    cfg = BenchConfig("fsi").with_settings(
        problem={"kind": "fsi_channel", "n_steps": 20},
        precond={"fluid_precond": ["monolithic"], "N_subdomains": [4]},
        sweep={"flow_rates": [2.0]},
    )
    try:
        stats = make_problem(cfg, 2.0, 0).solve("monolithic", 4)
    except NewtonFailure as exc:
        return False, str(exc)
    newton = max(t.newton_iters for t in stats.per_timestep)
    passed = newton <= cfg["solver"]["max_newton"] and stats.gmres_failures == 0
    return passed, (
        f"{stats.n_timesteps} steps, max {newton} Newton, "
        f"{stats.gmres_failures} GMRES failures"
    )


def check_integrators() -> CheckOutcome:
    """BDF-2 error ratio under step halving and Newmark energy conservation."""

    errors = []
    for dt in (0.02, 0.01):
        problem = DecayProblem(dt)
        stats = time_loop(problem, None, round(1.0 / dt))
        errors.append(stats.per_timestep[-1].monitors["error"])
    ratio = errors[0] / errors[1]
    oscillator = OscillatorProblem(0.01)
    stats = time_loop(oscillator, None, 1000)
    e0 = 0.5 * oscillator.stiffness * oscillator.d0**2
    drift = abs(stats.per_timestep[-1].monitors["energy"] - e0) / e0
    passed = abs(ratio - 4.0) <= 0.4 and drift <= 1e-10
    return passed, f"BDF-2 error ratio {ratio:.3f}, Newmark energy drift {drift:.2e}"


def check_determinism() -> CheckOutcome:
    """Repeated solves give identical iteration counts and residual histories."""

    def run() -> tuple[list[int], list[list[float]]]:
        counts, histories = [], []
        system = _synthetic(3)
        M = build_facsi(system)
        b = system.rhs.to_array()
        result = gmres(system.matvec, M, b, GmresConfig(tol=1e-10))
        counts.append(result.iters)
        histories.append(result.residual_history)
        counts += _poisson_counts(2)[:2]
        return counts, histories

    first, second = run(), run()
    return first == second, f"counts {first[0]}"


CHECKS: dict[str, Callable[[], CheckOutcome]] = {
    "facsi_oracle": check_facsi_oracle,
    "condensation": check_condensation,
    "simple_formulas": check_simple_formulas,
    "scalability": check_scalability,
    "exact_preconditioner": check_exact_preconditioner,
    "fluid_trend": check_fluid_trend,
    "fsi_end_to_end": check_fsi_end_to_end,
    "integrators": check_integrators,
    "determinism": check_determinism,
}
SLOW_CHECKS: tuple[str, ...] = ("fluid_trend", "fsi_end_to_end")


def run_checks(
    names: list[str] | None = None, *, quick: bool = False
) -> list[CheckRunner]:
    """Run checks in order, each inside its own runner.

    :param names: checks to run, all by default
    :param quick: skip the slow trend checks
    :raises ValueError: for an unknown check name
    """

    chosen = list(CHECKS) if names is None else names
    unknown = [name for name in chosen if name not in CHECKS]
    if unknown:
        raise ValueError(f"Unknown checks {unknown}, expected some of {list(CHECKS)}")
    if quick:
        chosen = [name for name in chosen if name not in SLOW_CHECKS]
    runners = []
    for name in chosen:
        runner = CheckRunner(name, CHECKS[name])
        start = time.perf_counter()
        runner.run()
        log.info(
            "%s %s in %.2f s: %s",
            "PASS" if runner.passed else "FAIL",
            name,
            time.perf_counter() - start,
            runner.detail,
        )
        runners.append(runner)
    return runners


def format_results(runners: list[CheckRunner]) -> str:
    lines = [
        f"{'PASS' if r.passed else 'FAIL'}  {r.check_name:<22} {r.detail}"
        for r in runners
    ]
    return "\n".join(lines) + "\n"


def require_passed(runners: list[CheckRunner]) -> None:
    """:raises AcceptanceFailure: naming the failed checks"""

    failed = [r.check_name for r in runners if not r.passed]
    if failed:
        raise AcceptanceFailure(failed)
