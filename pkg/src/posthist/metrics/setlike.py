"""Set-coefficient similarity over tokens, n-grams, and shingles."""

from __future__ import annotations

from .normalize import elements

JACCARD = "Jaccard"
DICE = "Dice"
OVERLAP = "Overlap"

SET_COEFFICIENTS = (JACCARD, DICE, OVERLAP)


def coefficient_of_sets(sa: set, sb: set, coefficient: str) -> float:
    """Both sets must be nonempty; callers enforce this via tooShort."""
    inter = len(sa & sb)
    if coefficient == JACCARD:
        return inter / len(sa | sb)
    if coefficient == DICE:
        return 2 * inter / (len(sa) + len(sb))
    if coefficient == OVERLAP:
        return inter / min(len(sa), len(sb))
    raise ValueError(f"unknown coefficient {coefficient!r}")


def set_similarity(
    a: str,
    b: str,
    unit: str,
    coefficient: str,
    n: int | None = None,
    normalized: bool = False,
    padded: bool = False,
) -> float:
    sa = set(elements(a, unit, n, padded, normalized))
    sb = set(elements(b, unit, n, padded, normalized))
    return coefficient_of_sets(sa, sb, coefficient)
