"""Shared types and errors for the similarity-metric catalog."""

from __future__ import annotations

from dataclasses import dataclass


class TooShortError(ValueError):
    """An input is too short for the metric; callers fall back to a backup."""


class UnknownMetricError(LookupError):
    """The requested metric name is not in the catalog."""


@dataclass(frozen=True)
class MetricDescriptor:
    """One catalog entry; the name is derived deterministically from fields.

    method is set for edit-family metrics (levenshtein, damerauLevenshtein,
    optimalAlignment, longestCommonSubsequence); coefficient for set and
    fingerprint comparisons; weighting/distance for profile metrics.
    """

    name: str
    family: str
    unit: str
    n: int | None = None
    coefficient: str | None = None
    weighting: str | None = None
    distance: str | None = None
    method: str | None = None
    normalized: bool = False
    padded: bool = False
    min_input_length: int = 1
