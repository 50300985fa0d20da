"""
Benchmark configuration files.

A config is a TOML file whose sections and keys are those of
:data:`fsibench.settings.default_settings`; anything left out keeps its default.
Parsing is strict: unknown sections or keys, wrong types and out-of-range values are
errors carrying the line they occur on.
"""
from __future__ import annotations

import copy
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fsibench.facsi import INNER_BLOCK, INNER_FLUID
from fsibench.fem import RECTANGLE_SIDE_TAGS, SHAPE_DERIVATIVES, PhysicalParams
from fsibench.partition import PARTITIONERS
from fsibench.schwarz import COARSE_KINDS
from fsibench.settings import load_defaults
from fsibench.solver import SCHEDULES, ForcingConfig, NewtonConfig
from fsibench.utils.log import logger
from fsibench.utils.toml import dump_toml, error_line, loads_toml

from .exceptions import ConfigError

log = logger(__name__)

PROBLEMS: tuple[str, ...] = (
    "fsi_channel",
    "stokes_channel",
    "navier_stokes_channel",
    "poisson",
    "synthetic",
)
FLUID_PRECONDS: tuple[str, ...] = ("monolithic", "simple", "simplec")
OUTPUT_FORMATS: tuple[str, ...] = ("csv", "table")

Rule = tuple[Callable[[Any], bool], str]


def _choice(options: tuple[str, ...]) -> Rule:
    return (lambda v: v in options), f"one of {', '.join(options)}"


def _at_least(bound: float) -> Rule:
    return (lambda v: v >= bound), f">= {bound}"


def _between(low: float, high: float) -> Rule:
    return (lambda v: low < v < high), f"in ({low}, {high})"


_POSITIVE: Rule = (lambda v: v > 0), "> 0"

RULES: dict[str, dict[str, Rule]] = {
    "problem": {
        "kind": _choice(PROBLEMS),
        "nx": _at_least(1),
        "poisson_dirichlet": _choice(tuple(RECTANGLE_SIDE_TAGS)),
        "ny_fluid": _at_least(1),
        "ny_solid": _at_least(1),
        "length": _POSITIVE,
        "lumen_height": _POSITIVE,
        "wall_thickness": _POSITIVE,
        "n_steps": _at_least(1),
        "shape_derivative": _choice(SHAPE_DERIVATIVES),
        "synthetic_solid": _at_least(1),
        "synthetic_geometry": _at_least(1),
        "synthetic_velocity": _at_least(2),
        "synthetic_pressure": _at_least(1),
        "synthetic_interface": _at_least(1),
    },
    "physics": {
        "nu_f": _POSITIVE,
        "rho_f": _POSITIVE,
        "rho_s": _POSITIVE,
        "poisson": _between(0.0, 0.5),
        "mu_s": _POSITIVE,
        "E": _POSITIVE,
        "p_ref": _POSITIVE,
        "dt": _POSITIVE,
    },
    "schedule": {
        "profile": _choice(SCHEDULES),
        "ramp_time": _at_least(0.0),
        "plateau_time": _at_least(0.0),
        "pulse_time": _at_least(0.0),
        "pulse_peak": _POSITIVE,
    },
    "solver": {
        "newton_tol": _between(0.0, 1.0),
        "max_newton": _at_least(1),
        "eta_loose": _between(0.0, 1.0),
        "eta_tight": _between(0.0, 1.0),
        "forcing_gamma": ((lambda v: 0.0 < v <= 1.0), "in (0, 1]"),
        "forcing_exponent": ((lambda v: 1.0 < v <= 2.0), "in (1, 2]"),
        "gmres_max_iter": _at_least(1),
        "gmres_restart": _at_least(0),
    },
    "precond": {
        "fluid_precond": _choice(FLUID_PRECONDS),
        "levels": ((lambda v: v in (1, 2)), "1 or 2"),
        "overlap": _at_least(0),
        "N_subdomains": _at_least(1),
        "partitioner": _choice(PARTITIONERS),
        "coarse_velocity": _choice(COARSE_KINDS),
        "coarse_pressure": _choice(COARSE_KINDS),
        "coarse_solid": _choice(COARSE_KINDS),
        "coarse_geometry": _choice(COARSE_KINDS),
        "coarse_scalar": _choice(COARSE_KINDS),
        "simple_alpha": _POSITIVE,
    },
    "facsi": {
        "inner_fluid": _choice(("sweep", *INNER_FLUID)),
        "inner_solid": _choice(INNER_BLOCK),
        "inner_geometry": _choice(INNER_BLOCK),
        "inner_krylov": ((lambda v: True), "a boolean"),
    },
    "sweep": {
        "flow_rates": _at_least(0.0),
        "seeds": _at_least(0),
    },
    "output": {
        "path": ((lambda v: bool(v.strip())), "a non-empty path"),
        "format": _choice(OUTPUT_FORMATS),
    },
}

_HEADER = re.compile(r"^\[\s*([^\]]+?)\s*\]")


@dataclass(frozen=True, eq=False)
class BenchConfig:
    """A validated benchmark configuration.

    :param name: config id written in report rows (the file stem)
    :param settings: every section with defaults filled in
    """

    name: str
    settings: dict[str, dict[str, Any]] = field(default_factory=load_defaults)
    source: Path | None = None

    def __getitem__(self, section: str) -> dict[str, Any]:
        return self.settings[section]

    @property
    def problem(self) -> str:
        kind: str = self["problem"]["kind"]
        return kind

    @property
    def n_steps(self) -> int:
        return int(self["problem"]["n_steps"])

    @property
    def fluid_preconds(self) -> list[str]:
        return list(self["precond"]["fluid_precond"])

    @property
    def n_subdomains(self) -> list[int]:
        return [int(n) for n in self["precond"]["N_subdomains"]]

    @property
    def flow_rates(self) -> list[float]:
        return [float(q) for q in self["sweep"]["flow_rates"]]

    @property
    def seeds(self) -> list[int]:
        return [int(s) for s in self["sweep"]["seeds"]]

    @property
    def output_path(self) -> Path:
        path = Path(self["output"]["path"])
        if self.source is not None and not path.is_absolute():
            return self.source.parent / path
        return path

    @property
    def output_format(self) -> str:
        fmt: str = self["output"]["format"]
        return fmt

    def newton_config(self) -> NewtonConfig:
        solver = self["solver"]
        forcing = ForcingConfig(
            eta_loose=solver["eta_loose"],
            eta_tight=solver["eta_tight"],
            gamma=solver["forcing_gamma"],
            exponent=solver["forcing_exponent"],
        )
        return NewtonConfig(
            tol_rel=solver["newton_tol"],
            max_newton=solver["max_newton"],
            forcing=forcing,
            gmres_max_iter=solver["gmres_max_iter"],
            gmres_restart=solver["gmres_restart"] or None,
        )

    def physical_params(self, flow_rate: float = 0.0) -> PhysicalParams:
        return PhysicalParams.from_settings(self["physics"], flow_rate)

    def echo(self) -> str:
        """The effective config as TOML text."""

        return dump_toml(self.settings)

    def with_settings(self, **sections: dict[str, Any]) -> BenchConfig:
        """A copy with some keys replaced, validated like a parsed file."""

        merged = copy.deepcopy(self.settings)
        for section, values in sections.items():
            merged.setdefault(section, {}).update(values)
        return build_config(merged, self.name, source=self.source)


def _line_of(text: str, section: str, key: str | None = None) -> int | None:
    """1-based line of a section header, or of a key inside that section."""

    current = ""
    key_pattern = None
    if key is not None:
        key_pattern = re.compile(rf"^(\"?){re.escape(key)}\1\s*=")
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        header = _HEADER.match(line)
        if header:
            current = header.group(1)
            if key is None and current == section:
                return number
            continue
        if key_pattern is not None and current == section and key_pattern.match(line):
            return number
    return None


def _coerce(value: Any, default: Any) -> Any:
    """Match ``value`` to the type of ``default`` or raise ``TypeError``."""

    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise TypeError("expected true or false")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError("expected an integer")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TypeError("expected a number")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise TypeError("expected a quoted string")
        return value
    raise TypeError(f"unsupported value {value!r}")


def _validate_value(
    section: str, key: str, value: Any, default: Any, line: int | None
) -> Any:
    check, expected = RULES[section][key]
    try:
        if isinstance(default, list):
            items = value if isinstance(value, list) else [value]
            if not items:
                raise ValueError("list must not be empty")
            coerced: Any = [_coerce(item, default[0]) for item in items]
            values = coerced
        else:
            coerced = _coerce(value, default)
            values = [coerced]
    except (TypeError, ValueError) as exc:
        raise ConfigError(line, f"[{section}] {key}: {exc}") from exc
    for item in values:
        if not check(item):
            raise ConfigError(
                line,
                f"[{section}] {key} = {item!r} is out of range, expected {expected}",
            )
    return coerced


def build_config(
    data: dict[str, Any],
    name: str,
    text: str = "",
    source: Path | None = None,
) -> BenchConfig:
    """Validate parsed TOML data against the defaults.

    :param text: source text used to locate offending lines
    :raises ConfigError: for unknown sections or keys and invalid values
    """

    settings = load_defaults()
    for section, values in data.items():
        if section not in settings:
            raise ConfigError(_line_of(text, section), f"Unknown section [{section}]")
        if not isinstance(values, dict):
            raise ConfigError(
                _line_of(text, "", section), f"Key {section!r} outside a section"
            )
        for key, value in values.items():
            line = _line_of(text, section, key)
            if key not in settings[section]:
                raise ConfigError(line, f"Unknown key {key!r} in [{section}]")
            settings[section][key] = _validate_value(
                section, key, value, settings[section][key], line
            )

    solver = settings["solver"]
    if not solver["eta_tight"] < solver["eta_loose"]:
        raise ConfigError(
            _line_of(text, "solver", "eta_tight"),
            f"eta_tight = {solver['eta_tight']} must be below "
            f"eta_loose = {solver['eta_loose']}",
        )
    precond = settings["precond"]
    if (
        set(precond["fluid_precond"]) & {"simple", "simplec"}
        and precond["coarse_pressure"] != "rgdsw"
    ):
        log.info(
            "Note: SIMPLE-type preconditioners are usually run with RGDSW inner "
            "coarse spaces, %r configured",
            precond["coarse_pressure"],
        )
    return BenchConfig(name=name, settings=settings, source=source)


def parse_config_text(text: str, name: str = "config") -> BenchConfig:
    """Parse config text.

    :raises ConfigError: for malformed TOML or invalid settings
    """

    try:
        data = loads_toml(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(error_line(exc), str(exc)) from exc
    return build_config(data, name, text)


def parse_config(path: Path | str) -> BenchConfig:
    """Read and validate a config file.

    :raises ConfigError: if the file is missing or invalid
    """

    path = Path(path)
    if not path.is_file():
        raise ConfigError(None, f"Config file {path} not found")
    text = path.read_text(encoding="utf-8")
    config = parse_config_text(text, path.stem)
    log.info("Loaded config %s (%s)", path, config.problem)
    return BenchConfig(name=config.name, settings=config.settings, source=path)
