"""Winnowing fingerprint similarity.

Gram hashes are selected with a window of size w = n (rightmost minimum per
window, consecutive duplicates dropped). Jaccard/Dice/Overlap compare the
distinct selected hashes; LCS/OA compare the selected hash sequences with the
edit-similarity normalization (max length - distance) / max length.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .base import TooShortError
from .normalize import normalize_ngram
from .setlike import coefficient_of_sets

LCS_COMPARISON = "LongestCommonSubsequence"
OA_COMPARISON = "OptimalAlignment"

FINGERPRINT_COMPARISONS = (
    "Jaccard",
    "Dice",
    "Overlap",
    LCS_COMPARISON,
    OA_COMPARISON,
)


def fingerprints(s: str, n: int) -> np.ndarray:
    """Selected fingerprint hash sequence of s for gram size n."""
    if len(s) < n:
        raise TooShortError(f"need at least {n} characters, got {len(s)}")
    hashes = kernels.gram_hashes(kernels.encode(s), n)
    return kernels.winnow_select(hashes, n)


def winnowing_similarity(
    a: str, b: str, n: int, comparison: str, normalized: bool = False
) -> float:
    if normalized:
        a = normalize_ngram(a)
        b = normalize_ngram(b)
    fa = fingerprints(a, n)
    fb = fingerprints(b, n)
    if comparison == LCS_COMPARISON:
        longest = max(fa.size, fb.size)
        return int(kernels.lcs_length(fa, fb)) / longest
    if comparison == OA_COMPARISON:
        longest = max(fa.size, fb.size)
        d = int(kernels.indel_distance(fa, fb))
        return max(0.0, (longest - d) / longest)
    return coefficient_of_sets(set(fa.tolist()), set(fb.tolist()), comparison)
