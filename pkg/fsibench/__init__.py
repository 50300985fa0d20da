"""
Evaluate run-time constants.
"""
from importlib import metadata

from fsibench.utils import log

# Get the version of the package
try:
    __version__: str = metadata.version(__name__)
except metadata.PackageNotFoundError:
    log.logger(__name__).warning(
        "Could not find %s metadata during init. Setting version to 'unknown'.",
        __name__,
    )
    __version__ = "unknown"
