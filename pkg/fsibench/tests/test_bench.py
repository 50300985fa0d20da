"""
Test bench module.
"""
import io
import math
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

from fsibench.__main__ import main
from fsibench.bench import (
    CHECKS,
    EXIT_ACCEPTANCE,
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_SOLVER,
    AcceptanceFailure,
    BenchConfig,
    BenchReport,
    ConfigError,
    ReportRow,
    SweepFailure,
    cell_id,
    emit_cells,
    emit_gnuplot,
    emit_report,
    exit_code,
    format_results,
    make_problem,
    mean_outlet_pressure,
    mid_channel_wall_dof,
    parse_config,
    parse_config_text,
    parse_report_csv,
    require_passed,
    run_checks,
    run_sweep,
    write_report,
)
from fsibench.bench import verify
from fsibench.fem import build_channel_mesh, build_dofmaps
from fsibench.solver import GmresBreakdown, NewtonFailure, SolveStats

TEST_DIR = Path(__file__).parent
TOML_DIR = TEST_DIR / "test_toml_files"


def rows() -> list[ReportRow]:
    return [
        ReportRow("a", 4, "monolithic", 10.0, 2.0, 0.5, 1.25, flow_rate=2.0),
        ReportRow("a", 4, "simplec", 20.5, 2.0, 0.25, 2.0, flow_rate=2.0, seed=1),
    ]


def failed_row() -> ReportRow:
    nan = math.nan
    return ReportRow(
        "a", 16, "simplec", nan, nan, nan, nan, 2.0, status="failed", message="boom"
    )


def run_quietly(argv: list[str]) -> tuple[int, str]:
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = main(argv)
    return code, buffer.getvalue()


class TestConfig(unittest.TestCase):
    """Test config parsing and validation."""

    def test_defaults(self) -> None:
        """Test that an empty config keeps every default."""

        cfg = parse_config_text("")
        self.assertEqual(cfg.problem, "fsi_channel")
        self.assertEqual(cfg.n_subdomains, [4])
        self.assertEqual(cfg.fluid_preconds, ["monolithic"])
        self.assertEqual(cfg.flow_rates, [2.0])
        self.assertEqual(cfg["physics"]["dt"], 0.001)

    def test_values(self) -> None:
        """Test that integers widen to floats and scalars to lists."""

        cfg = parse_config_text(
            "[precond]\nN_subdomains = 8\noverlap = 0\n[sweep]\nflow_rates = [1, 3]\n"
        )
        self.assertEqual(cfg.n_subdomains, [8])
        self.assertEqual(cfg["precond"]["overlap"], 0)
        self.assertEqual(cfg.flow_rates, [1.0, 3.0])
        self.assertIsInstance(cfg["sweep"]["flow_rates"][0], float)

    def test_unknown_key(self) -> None:
        """Test that an unknown key names its line."""

        with pytest.raises(ConfigError) as error:
            parse_config(TOML_DIR / "bad_key.toml")
        self.assertEqual(error.value.line, 6)
        self.assertEqual(
            str(error.value), "line 6: Unknown key 'coarse_space' in [precond]"
        )

    def test_unknown_section(self) -> None:
        """Test that an unknown section names its header line."""

        with pytest.raises(ConfigError) as error:
            parse_config_text('[problem]\nkind = "poisson"\n\n[mesh]\nnx = 4\n')
        self.assertEqual(error.value.line, 4)

    def test_key_outside_section(self) -> None:
        """Test a section name used as a plain key."""

        with pytest.raises(ConfigError) as error:
            parse_config_text("problem = 3\n")
        self.assertEqual(error.value.line, 1)

    def test_malformed(self) -> None:
        """Test that a TOML syntax error keeps the line of the parser message."""

        with pytest.raises(ConfigError) as error:
            parse_config(TOML_DIR / "malformed.toml")
        self.assertEqual(error.value.line, 2)

    def test_wrong_type(self) -> None:
        """Test that a quoted number is rejected."""

        with pytest.raises(ConfigError) as error:
            parse_config_text('[problem]\nnx = "8"\n')
        self.assertIn("expected an integer", str(error.value))
        with pytest.raises(ConfigError):
            parse_config_text("[facsi]\ninner_krylov = 1\n")

    def test_out_of_range(self) -> None:
        """Test range checks on scalars and on list items."""

        bad = [
            "[precond]\noverlap = -1\n",
            "[precond]\nlevels = 3\n",
            '[precond]\nfluid_precond = ["monolithic", "pcd"]\n',
            "[physics]\npoisson = 0.5\n",
            "[solver]\nforcing_exponent = 1.0\n",
            '[problem]\nkind = "heat"\n',
            "[sweep]\nseeds = []\n",
        ]
        for text in bad:
            with pytest.raises(ConfigError):
                parse_config_text(text)

    def test_forcing_order(self) -> None:
        """Test that eta_tight must stay below eta_loose."""

        with pytest.raises(ConfigError) as error:
            parse_config_text("[solver]\neta_loose = 1e-8\neta_tight = 1e-4\n")
        self.assertEqual(error.value.line, 3)

    def test_simple_note(self) -> None:
        """Test the note for SIMPLE-type preconditioners without RGDSW."""

        with self.assertLogs("fsibench.bench.config", level="INFO") as logs:
            parse_config_text(
                '[precond]\nfluid_precond = ["simplec"]\ncoarse_pressure = "gdsw"\n'
            )
        self.assertTrue(any("RGDSW" in line for line in logs.output))

    def test_missing_file(self) -> None:
        """Test that a missing config file raises ConfigError."""

        with pytest.raises(ConfigError):
            parse_config(TOML_DIR / "no_such_config.toml")

    def test_file(self) -> None:
        """Test the config name and the output path next to the file."""

        cfg = parse_config(TOML_DIR / "small_poisson.toml")
        self.assertEqual(cfg.name, "small_poisson")
        self.assertEqual(cfg.problem, "poisson")
        self.assertEqual(cfg.output_format, "table")
        self.assertEqual(cfg.output_path, TOML_DIR / "bench_out")

    def test_echo(self) -> None:
        """Test that the echoed config parses back to the same settings."""

        cfg = parse_config(TOML_DIR / "small_synthetic.toml")
        self.assertEqual(parse_config_text(cfg.echo()).settings, cfg.settings)

    def test_with_settings(self) -> None:
        """Test that replaced keys are validated."""

        cfg = BenchConfig("base").with_settings(problem={"kind": "poisson"})
        self.assertEqual(cfg.problem, "poisson")
        with pytest.raises(ConfigError) as error:
            cfg.with_settings(precond={"levels": 3})
        self.assertIsNone(error.value.line)

    def test_newton_config(self) -> None:
        """Test the solver section mapping, zero restart meaning none."""

        newton = BenchConfig("base").newton_config()
        self.assertEqual(newton.max_newton, 15)
        self.assertIsNone(newton.gmres_restart)
        self.assertEqual(newton.forcing.eta_loose, 1e-4)


class TestReport(unittest.TestCase):
    """Test report emission and parsing."""

    def test_csv(self) -> None:
        """Test the header and exact float digits of the CSV report."""

        report = BenchReport(rows())
        lines = emit_report(report, "csv").splitlines()
        header = "config,N,precond,avg_iter,avg_newton,setup_s,solve_s"
        self.assertEqual(lines[0], header)
        self.assertEqual(lines[1], "a,4,monolithic,10.0,2.0,0.5,1.25")
        self.assertEqual(len(lines), 3)

    def test_cells_round_trip(self) -> None:
        """Test that the full cell CSV reads back unchanged."""

        report = BenchReport(rows())
        self.assertEqual(parse_report_csv(emit_cells(report)).rows, report.rows)

    def test_failed_row(self) -> None:
        """Test that a failed row reads back as NaN with its status."""

        report = BenchReport([failed_row()])
        (row,) = parse_report_csv(emit_cells(report)).rows
        self.assertTrue(row.failed)
        self.assertTrue(math.isnan(row.avg_iter))
        self.assertEqual(row.message, "boom")

    def test_table(self) -> None:
        """Test one column group per preconditioner and one line per cell."""

        report = BenchReport([*rows(), failed_row()])
        lines = emit_report(report, "table").splitlines()
        self.assertEqual(len(lines), 5)
        self.assertIn("monolithic", lines[0])
        self.assertIn("simplec", lines[0])
        self.assertIn("# avg. iter.", lines[1])
        self.assertIn("10.0", lines[3])
        self.assertIn("20.5", lines[3])
        self.assertIn("failed", lines[4])

    def test_gnuplot(self) -> None:
        """Test one data block per preconditioner."""

        blocks = emit_gnuplot(BenchReport(rows())).split("\n\n\n")
        self.assertEqual(len(blocks), 2)
        first = blocks[0].splitlines()
        self.assertEqual(first[0], "# monolithic")
        self.assertEqual(first[2], "4 10.0 2.0 0.5 1.25 2.0")

    def test_errors(self) -> None:
        """Test empty reports, unknown formats and unknown headers."""

        with pytest.raises(ValueError):
            emit_report(BenchReport())
        with pytest.raises(ValueError):
            emit_report(BenchReport(rows()), "xlsx")
        with pytest.raises(ValueError):
            parse_report_csv("a,b,c\n1,2,3\n")

    def test_write(self) -> None:
        """Test the files written for a table report."""

        with tempfile.TemporaryDirectory() as tmp:
            path = write_report(BenchReport(rows()), Path(tmp) / "out", "table")
            self.assertEqual(path.name, "report.txt")
            for name in ("report.txt", "cells.csv", "report.dat"):
                self.assertTrue((Path(tmp) / "out" / name).is_file())


class TestSweep(unittest.TestCase):
    """Test run_sweep function."""

    def test_poisson(self) -> None:
        """Test one row per subdomain count with a shared problem hash."""

        cfg = parse_config(TOML_DIR / "small_poisson.toml")
        seen: list[ReportRow] = []
        report = run_sweep(cfg, on_cell=seen.append)
        self.assertEqual(seen, report.rows)
        self.assertEqual([row.N for row in report.rows], [4, 16])
        self.assertEqual(report.preconds, ["schwarz-rgdsw"])
        self.assertEqual(report.failed_rows, [])
        self.assertEqual(report.rows[0].config, "small_poisson/q=2.0/seed=0")
        self.assertEqual(report.rows[0].problem_hash, report.rows[1].problem_hash)
        for row in report.rows:
            self.assertGreater(row.avg_iter, 0.0)
            self.assertGreaterEqual(row.avg_newton, 1.0)

    def test_output_directory(self) -> None:
        """Test that per-cell statistics are written next to the report."""

        cfg = parse_config(TOML_DIR / "small_poisson.toml")
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp)
            run_sweep(cfg, out)
            self.assertTrue((out / "report.txt").is_file())
            stem = "small_poisson_q2.0_s0_N4_schwarz-rgdsw"
            self.assertTrue((out / "cells" / f"{stem}.csv").is_file())
            self.assertTrue((out / "cells" / f"{stem}_monitors.csv").is_file())

    def test_failed_cell(self) -> None:
        """Test that a failing cell becomes a failed row."""

        report = run_sweep(parse_config(TOML_DIR / "failing_poisson.toml"))
        (row,) = report.rows
        self.assertTrue(row.failed)
        self.assertTrue(row.message.startswith("PartitionError"))
        self.assertTrue(math.isnan(row.avg_iter))

    def test_synthetic_pairing(self) -> None:
        """Test that rows of one seed share a hash across preconditioners."""

        cfg = parse_config(TOML_DIR / "small_synthetic.toml")
        report = run_sweep(cfg)
        order = [(row.precond, row.seed) for row in report.rows]
        self.assertEqual(
            order,
            [("monolithic", 0), ("monolithic", 1), ("simplec", 0), ("simplec", 1)],
        )
        self.assertEqual(report.failed_rows, [])
        hashes = {(row.precond, row.seed): row.problem_hash for row in report.rows}
        self.assertEqual(hashes[("monolithic", 0)], hashes[("simplec", 0)])
        self.assertNotEqual(hashes[("monolithic", 0)], hashes[("monolithic", 1)])

    def test_cell_id(self) -> None:
        """Test the config id of a report row."""

        self.assertEqual(cell_id(BenchConfig("c"), 0.5, 3), "c/q=0.5/seed=3")


class TestProblems(unittest.TestCase):
    """Test the benchmark problem kinds."""

    def test_variants(self) -> None:
        """Test the preconditioner labels of each problem kind."""

        base = BenchConfig("v").with_settings(
            precond={"fluid_precond": ["monolithic", "simple"]}
        )
        self.assertEqual(
            make_problem(base, 1.0, 0).variants(), ["monolithic", "simple"]
        )
        exact = base.with_settings(facsi={"inner_fluid": "exact"})
        self.assertEqual(make_problem(exact, 1.0, 0).variants(), ["exact"])
        poisson = base.with_settings(
            problem={"kind": "poisson", "nx": 4}, precond={"levels": 1}
        )
        self.assertEqual(make_problem(poisson, 0.0, 0).variants(), ["schwarz-1L"])

    def test_problem_hash(self) -> None:
        """Test that the hash depends on the data and not on the instance."""

        cfg = BenchConfig("h").with_settings(problem={"nx": 4, "ny_fluid": 2})
        first = make_problem(cfg, 1.0, 0).problem_hash()
        self.assertEqual(first, make_problem(cfg, 1.0, 3).problem_hash())
        self.assertNotEqual(first, make_problem(cfg, 2.0, 0).problem_hash())

    def test_monitors(self) -> None:
        """Test the outlet pressure mean and the wall monitor DoF."""

        mesh = build_channel_mesh(4, 2, 1, 1.0, 0.5, 0.1)
        maps = build_dofmaps(mesh)
        self.assertEqual(mean_outlet_pressure(mesh, np.zeros(maps.p.n_dofs)), 0.0)
        # 10 internal stress units are 1 kPa
        pressure = np.full(maps.p.n_dofs, 10.0)
        self.assertAlmostEqual(mean_outlet_pressure(mesh, pressure), 1.0)
        dof = mid_channel_wall_dof(mesh)
        self.assertTrue(0 <= dof < maps.d_s.n_dofs)
        self.assertEqual(dof % 2, 1)

    def test_stokes_channel(self) -> None:
        """Test a short Stokes channel run with SIMPLEC."""

        cfg = BenchConfig("stokes").with_settings(
            problem={"kind": "stokes_channel", "nx": 6, "ny_fluid": 2, "n_steps": 2},
            precond={"N_subdomains": [2], "fluid_precond": ["simplec"]},
        )
        stats = make_problem(cfg, 1.0, 0).solve("simplec", 2)
        self.assertEqual(stats.n_timesteps, 2)
        self.assertEqual(stats.gmres_failures, 0)
        for timestep in stats.per_timestep:
            self.assertGreaterEqual(timestep.newton_iters, 1)
            self.assertIn("outlet_pressure_kPa", timestep.monitors)

    def test_export(self) -> None:
        """Test the files written by the Poisson export."""

        cfg = parse_config(TOML_DIR / "small_poisson.toml")
        with tempfile.TemporaryDirectory() as tmp:
            manifest = make_problem(cfg, 0.0, 0).export(Path(tmp))
            self.assertEqual(manifest.name, "manifest.toml")
            for name in ("K.mtx", "rhs.txt", "mesh.txt", "decomposition.txt"):
                self.assertTrue((Path(tmp) / name).is_file())
            self.assertTrue((Path(tmp) / "coarse.mtx").is_file())

    @pytest.mark.slow
    def test_fsi_channel(self) -> None:
        """Test a short run of the flexible channel with FaCSI."""

        cfg = BenchConfig("fsi").with_settings(
            problem={"nx": 8, "ny_fluid": 2, "ny_solid": 1, "n_steps": 3},
            precond={"N_subdomains": [2]},
        )
        stats = make_problem(cfg, 2.0, 0).solve("monolithic", 2)
        self.assertEqual(stats.n_timesteps, 3)
        self.assertEqual(stats.gmres_failures, 0)
        for timestep in stats.per_timestep:
            self.assertLessEqual(timestep.newton_iters, 15)
            self.assertIn("lumen_height", timestep.monitors)


class TestVerify(unittest.TestCase):
    """Test the acceptance checks."""

    def test_quick_checks(self) -> None:
        """Test that the dense and integrator checks pass."""

        names = [
            "facsi_oracle",
            "condensation",
            "simple_formulas",
            "exact_preconditioner",
            "integrators",
        ]
        runners = run_checks(names)
        self.assertEqual([r.check_name for r in runners], names)
        for runner in runners:
            self.assertTrue(runner.passed, f"{runner.check_name}: {runner.detail}")
        require_passed(runners)

    def test_selection(self) -> None:
        """Test unknown names and the quick filter."""

        with pytest.raises(ValueError):
            run_checks(["no_such_check"])
        self.assertEqual(run_checks(["fluid_trend"], quick=True), [])

    def test_failures(self) -> None:
        """Test that failed checks are listed and raise AcceptanceFailure."""

        with patch.dict(CHECKS, {"never": lambda: (False, "nope")}):
            runners = run_checks(["never"])
        self.assertEqual(format_results(runners), f"FAIL  {'never':<22} nope\n")
        with pytest.raises(AcceptanceFailure) as error:
            require_passed(runners)
        self.assertEqual(str(error.value), "1 acceptance check(s) failed: never")

    def test_count_comparisons(self) -> None:
        """Test that averaged counts equal up to rounding compare as ordered."""

        simplec = [15.666666666666666, 15.777777777777779, 15.777777777777777]
        self.assertTrue(verify._non_decreasing(simplec))
        self.assertFalse(verify._non_decreasing([16.0, 15.5]))
        self.assertTrue(verify._at_most(7.888888888888889, 7.888888888888888))
        self.assertFalse(verify._at_most(8.0, 7.9))

    def test_fsi_newton_failure(self) -> None:
        """Test that a stalled FSI run fails the check instead of raising."""

        failure = NewtonFailure(8, SolveStats(), "residual stalled")
        with patch.object(verify, "make_problem", side_effect=failure):
            passed, detail = verify.check_fsi_end_to_end()
        self.assertFalse(passed)
        self.assertEqual(detail, "Newton failed in time step 8: residual stalled")

    @pytest.mark.slow
    def test_scalability(self) -> None:
        """Test the Poisson Schwarz counts against their recorded baseline."""

        passed, detail = verify.check_scalability()
        self.assertTrue(passed, detail)
        self.assertEqual(detail, "two-level [21, 27, 30], one-level [19, 33, 60]")

    @pytest.mark.slow
    def test_all_checks(self) -> None:
        """Test the complete acceptance suite."""

        runners = run_checks()
        failed = [f"{r.check_name}: {r.detail}" for r in runners if not r.passed]
        self.assertEqual(failed, [])


class TestExitCodes(unittest.TestCase):
    """Test the command line and its exit codes."""

    def test_exit_code_mapping(self) -> None:
        """Test the exception to exit code mapping."""

        def raising(exc: Exception):
            @exit_code
            def command() -> None:
                raise exc

            return command()

        self.assertEqual(raising(ConfigError(None, "bad")), EXIT_CONFIG)
        self.assertEqual(raising(FileNotFoundError(2, "missing", "x")), EXIT_CONFIG)
        self.assertEqual(raising(GmresBreakdown(3)), EXIT_SOLVER)
        self.assertEqual(raising(SweepFailure(1, 4)), EXIT_SOLVER)
        self.assertEqual(raising(AcceptanceFailure(["a"])), EXIT_ACCEPTANCE)
        self.assertEqual(str(SweepFailure(1, 4)), "1 of 4 sweep cells failed")

    def test_run(self) -> None:
        """Test a successful run and its echoed config."""

        with tempfile.TemporaryDirectory() as tmp:
            code, output = run_quietly(
                ["run", str(TOML_DIR / "small_poisson.toml"), "-o", tmp]
            )
            self.assertEqual(code, EXIT_OK)
            self.assertIn("schwarz-rgdsw", output)
            echoed = parse_config(Path(tmp) / "config.toml")
            original = parse_config(TOML_DIR / "small_poisson.toml")
            self.assertEqual(echoed.settings, original.settings)

    def test_run_config_errors(self) -> None:
        """Test that unreadable configs exit with the config error code."""

        for name in ("bad_key.toml", "malformed.toml", "no_such_config.toml"):
            code, _ = run_quietly(["run", str(TOML_DIR / name)])
            self.assertEqual(code, EXIT_CONFIG, name)

    def test_run_solver_failure(self) -> None:
        """Test that failed cells exit with the solver failure code."""

        with tempfile.TemporaryDirectory() as tmp:
            code, output = run_quietly(
                ["run", str(TOML_DIR / "failing_poisson.toml"), "-o", tmp]
            )
            self.assertTrue((Path(tmp) / "report.csv").is_file())
        self.assertEqual(code, EXIT_SOLVER)
        self.assertIn("nan", output)

    def test_verify(self) -> None:
        """Test passing and failing acceptance runs."""

        checks = {"always": lambda: (True, "ok"), "never": lambda: (False, "nope")}
        with patch.dict(CHECKS, checks):
            code, output = run_quietly(["verify", "always"])
            self.assertEqual(code, EXIT_OK)
            self.assertTrue(output.startswith("PASS  always"))
            code, output = run_quietly(["verify", "always", "never"])
            self.assertEqual(code, EXIT_ACCEPTANCE)
            self.assertIn("FAIL  never", output)

    def test_verify_unknown(self) -> None:
        """Test that an unknown check name is a usage error."""

        with pytest.raises(SystemExit):
            run_quietly(["verify", "no_such_check"])

    def test_export_system(self) -> None:
        """Test exporting the synthetic block system."""

        with tempfile.TemporaryDirectory() as tmp:
            code, output = run_quietly(
                ["export-system", str(TOML_DIR / "small_synthetic.toml"), tmp]
            )
            self.assertEqual(code, EXIT_OK)
            manifest = Path(output.strip())
            self.assertEqual(manifest, Path(tmp) / "manifest.toml")
            self.assertTrue(manifest.is_file())
            self.assertTrue((Path(tmp) / "rhs.txt").is_file())
