"""
Entry point for the ``bench`` command-line script.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from fsibench import __version__
from fsibench.bench import (
    CHECKS,
    SweepFailure,
    emit_report,
    exit_code,
    format_results,
    make_problem,
    parse_config,
    require_passed,
    run_checks,
    run_sweep,
)
from fsibench.utils.file import write_text_file
from fsibench.utils.log import logger

log = logger(__name__)


@exit_code
def run(config: Path, out_dir: Path | None = None) -> None:
    """Run the sweep of a config, print the report and write it to the output
    directory."""

    cfg = parse_config(config)
    target = cfg.output_path if out_dir is None else out_dir
    write_text_file(target / "config.toml", cfg.echo())
    report = run_sweep(cfg, target)
    sys.stdout.write(emit_report(report, cfg.output_format))
    if report.failed_rows:
        raise SweepFailure(len(report.failed_rows), len(report))


@exit_code
def verify(names: list[str] | None = None, quick: bool = False) -> None:
    """Run the acceptance checks and print one line per check."""

    runners = run_checks(names, quick=quick)
    sys.stdout.write(format_results(runners))
    require_passed(runners)


@exit_code
def export_system(config: Path, directory: Path) -> None:
    """Dump the first Jacobian of a config's first cell."""

    cfg = parse_config(config)
    problem = make_problem(cfg, cfg.flow_rates[0], cfg.seeds[0])
    manifest = problem.export(directory)
    sys.stdout.write(f"{manifest}\n")


def parser() -> argparse.ArgumentParser:
    main_parser = argparse.ArgumentParser(
        prog="bench", description="Benchmark FSI block preconditioners."
    )
    main_parser.add_argument("--version", action="version", version=__version__)
    commands = main_parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="run the sweep of a config file")
    run_parser.add_argument("config", type=Path)
    run_parser.add_argument(
        "-o", "--out", type=Path, default=None, help="override the output path"
    )

    verify_parser = commands.add_parser("verify", help="run the acceptance checks")
    verify_parser.add_argument(
        "checks", nargs="*", help=f"checks to run, some of {', '.join(CHECKS)}"
    )
    verify_parser.add_argument(
        "--quick", action="store_true", help="skip the slow trend checks"
    )

    export_parser = commands.add_parser(
        "export-system", help="write the first Jacobian as Matrix Market files"
    )
    export_parser.add_argument("config", type=Path)
    export_parser.add_argument("directory", type=Path)
    return main_parser


def main(argv: list[str] | None = None) -> int:
    """Parse the command line and return the exit code."""

    main_parser = parser()
    args = main_parser.parse_args(argv)
    if args.command == "run":
        return run(args.config, args.out)
    if args.command == "verify":
        unknown = sorted(set(args.checks) - set(CHECKS))
        if unknown:
            main_parser.error(f"unknown checks: {', '.join(unknown)}")
        return verify(args.checks or None, quick=args.quick)
    return export_system(args.config, args.directory)


if __name__ == "__main__":
    sys.exit(main())
