"""Kernel backend selection.

POSTHIST_KERNELS=numpy forces the pure-numpy path, POSTHIST_KERNELS=numba
forces the compiled path (import error surfaces); by default numba is used
when importable.
"""

from __future__ import annotations

import logging
import os

import numpy as np

logger = logging.getLogger(__name__)


def _select_backend() -> str:
    flag = os.environ.get("POSTHIST_KERNELS", "").strip().lower()
    if flag in {"numpy", "python"}:
        return "numpy"
    if flag == "numba":
        return "numba"
    if flag:
        logger.warning("unknown POSTHIST_KERNELS value %r; autodetecting", flag)
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


BACKEND = _select_backend()

if BACKEND == "numba":
    from . import _numba_kernels as _impl
else:
    from . import _numpy_kernels as _impl

levenshtein_distance = _impl.levenshtein_distance
damerau_distance = _impl.damerau_distance
indel_distance = _impl.indel_distance
lcs_length = _impl.lcs_length
gram_hashes = _impl.gram_hashes
winnow_select = _impl.winnow_select
HASH_BASE = _impl.HASH_BASE
HASH_MOD = _impl.HASH_MOD


def encode(s: str) -> np.ndarray:
    """Unicode scalar values of s as an int64 array."""
    return np.frombuffer(s.encode("utf-32-le"), dtype="<u4").astype(np.int64)
