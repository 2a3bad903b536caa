"""Edit-based and equality-based similarity."""

from __future__ import annotations

from . import kernels
from .base import TooShortError
from .normalize import normalize_edit, normalize_token, tokenize

LEVENSHTEIN = "levenshtein"
DAMERAU_LEVENSHTEIN = "damerauLevenshtein"
OPTIMAL_ALIGNMENT = "optimalAlignment"
LONGEST_COMMON_SUBSEQUENCE = "longestCommonSubsequence"

EDIT_METHODS = (
    LEVENSHTEIN,
    DAMERAU_LEVENSHTEIN,
    OPTIMAL_ALIGNMENT,
    LONGEST_COMMON_SUBSEQUENCE,
)

_DISTANCES = {
    LEVENSHTEIN: kernels.levenshtein_distance,
    DAMERAU_LEVENSHTEIN: kernels.damerau_distance,
    OPTIMAL_ALIGNMENT: kernels.indel_distance,
}


def edit_distance(a: str, b: str, kind: str) -> int:
    return int(_DISTANCES[kind](kernels.encode(a), kernels.encode(b)))


def lcs_length(a: str, b: str) -> int:
    return int(kernels.lcs_length(kernels.encode(a), kernels.encode(b)))


def edit_similarity(a: str, b: str, kind: str, normalized: bool = False) -> float:
    """(max length - distance) / max length, clamped to [0,1]; LCS/max for
    the subsequence kind. The indel-only distance can exceed the longer
    length, hence the clamp."""
    if normalized:
        a = normalize_edit(a)
        b = normalize_edit(b)
    longest = max(len(a), len(b))
    if longest == 0:
        raise TooShortError("both inputs empty")
    if kind == LONGEST_COMMON_SUBSEQUENCE:
        return lcs_length(a, b) / longest
    d = edit_distance(a, b, kind)
    return max(0.0, (longest - d) / longest)


def equal_similarity(
    a: str, b: str, token: bool = False, normalized: bool = False
) -> float:
    """1.0 on identical inputs, else 0.0; empty equals empty."""
    if normalized:
        norm = normalize_token if token else normalize_edit
        a = norm(a)
        b = norm(b)
    if token:
        return 1.0 if tokenize(a) == tokenize(b) else 0.0
    return 1.0 if a == b else 0.0
