"""
Problem hashing.
"""
from __future__ import annotations

from hashlib import sha3_384
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import ArrayLike


def hash_arrays(arrays: Iterable[ArrayLike]) -> str:
    """Hash a sequence of arrays using SHA-384.

    Shapes and dtypes are part of the hash, so two problems only share a hash if every
    operator and vector is bitwise identical.
    """

    # Feed large arrays in 128 KB chunks to save memory
    buf_size: int = 131072

    sha3: sha3_384 = sha3_384()

    for item in arrays:
        array = np.ascontiguousarray(item)
        sha3.update(f"{array.dtype.str}{array.shape}".encode())
        data: bytes = array.tobytes()
        for start in range(0, len(data), buf_size):
            sha3.update(data[start : start + buf_size])

    # Get the hash of the arrays
    hash_str: str = sha3.hexdigest()
    return hash_str
