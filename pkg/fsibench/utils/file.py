"""
Common file operation methods.

Everything the bench writes (reports, exported systems, meshes, decompositions) is
plain UTF-8 text created through these helpers.
"""

import logging
from pathlib import Path


def create_dir(path: Path | str) -> Path:
    """Create a directory if one does not exist.

    :param path: target directory
    :return: the directory as a ``Path``
    :raises NotADirectoryError: if a file already exists at ``path``
    """

    if not isinstance(path, (Path, str)):
        raise TypeError("Path must be a string or a Path object.")
    directory = Path(path)
    if directory.is_dir():
        return directory
    if directory.exists():
        raise NotADirectoryError(f"{directory} exists and is not a directory")

    directory.mkdir(parents=True, exist_ok=True)
    logging.info("Created directory at %s", directory)
    return directory


def write_text_file(path: Path | str, text: str) -> Path:
    """Write ``text`` to ``path``, creating its parent directory first.

    Line endings are written as ``\\n`` on every platform.

    :return: the written file as a ``Path``
    """

    target = Path(path)
    create_dir(target.parent)
    with target.open("w", encoding="utf-8", newline="\n") as file:
        file.write(text)
    return target
