"""
Common TOML file operation methods.

Configs, the packaged defaults and export manifests are all TOML: read with
``tomllib``, written with ``tomli_w``.
"""
from __future__ import annotations

import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any

import tomli_w

from fsibench.utils.file import create_dir

_LINE_IN_ERROR = re.compile(r"at line (\d+)")


def create_toml(path: Path | str, data: dict[str, Any]) -> None:
    """Create a new TOML file with given data, creating its directory if needed.

    :param path: path to new TOML file
    :param data: data to be stored in TOML file as a dictionary
    """

    target = Path(path)
    create_dir(target.parent)
    with open(target, mode="wb") as f:
        tomli_w.dump(data, f)


def dump_toml(data: dict[str, Any]) -> str:
    """Return the TOML text for a dictionary (used for config echoes).

    :param data: data to serialise
    """

    return tomli_w.dumps(data)


def loads_toml(text: str) -> dict[str, Any]:
    """Parse TOML text.

    :raises tomllib.TOMLDecodeError: on malformed text; see :func:`error_line`
    """

    data: dict[str, Any] = tomllib.loads(text)
    return data


def load_toml(path: Path | str) -> dict[str, Any]:
    """Return the data from a TOML file as a Python dictionary.

    :param path: target TOML file
    """

    return loads_toml(Path(path).read_text(encoding="utf-8"))


def error_line(exc: tomllib.TOMLDecodeError) -> int | None:
    """1-based line number a decode error points at, if it names one."""

    found = _LINE_IN_ERROR.search(str(exc))
    return int(found.group(1)) if found else None
