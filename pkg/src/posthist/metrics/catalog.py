"""The metric catalog: 134 named configurations behind one interface.

Families and variants:
- edit (8): levenshtein, damerauLevenshtein, optimalAlignment,
  longestCommonSubsequence, each raw and input-normalized.
- set (54): Jaccard/Dice/Overlap over tokens (raw, normalized), character
  2..5-grams (raw, normalized, normalized+padded), and 2..3-shingles
  (raw, normalized).
- profile (28): cosine with bool/termFrequency/normalizedTermFrequency
  weightings over the seven units (input-raw), plus manhattan over the seven
  units (input-normalized).
- fingerprint (40): winnowing over 2..5-grams compared by Jaccard, Dice,
  Overlap, LongestCommonSubsequence, OptimalAlignment, raw and normalized.
- equal (4): equal, tokenEqual, each raw and normalized.
"""

from __future__ import annotations

from collections.abc import Callable

from .base import MetricDescriptor, UnknownMetricError
from .edit import EDIT_METHODS, edit_similarity, equal_similarity
from .fingerprint import FINGERPRINT_COMPARISONS, winnowing_similarity
from .profiles import BOOL, COSINE, MANHATTAN, NORMALIZED_TF, TF, profile_similarity
from .setlike import SET_COEFFICIENTS, set_similarity

MetricFunction = Callable[[str, str], float]

_NUMBER_WORDS = {2: "Two", 3: "Three", 4: "Four", 5: "Five"}

# (unit, n, lowerCamel name, UpperCamel name)
_UNITS = [("token", None, "token", "Token")]
_UNITS += [
    ("ngram", n, f"{_NUMBER_WORDS[n].lower()}Gram", f"{_NUMBER_WORDS[n]}Gram")
    for n in (2, 3, 4, 5)
]
_UNITS += [
    ("shingle", n, f"{_NUMBER_WORDS[n].lower()}Shingle", f"{_NUMBER_WORDS[n]}Shingle")
    for n in (2, 3)
]

_WEIGHTING_NAMES = {BOOL: "Bool", TF: "TermFrequency", NORMALIZED_TF: "NormalizedTermFrequency"}


def _upper_first(name: str) -> str:
    return name[0].upper() + name[1:]


def _build_catalog() -> list[MetricDescriptor]:
    out: list[MetricDescriptor] = []

    for method in EDIT_METHODS:
        for normalized in (False, True):
            out.append(
                MetricDescriptor(
                    name=method + ("Normalized" if normalized else ""),
                    family="edit",
                    unit="character",
                    method=method,
                    normalized=normalized,
                    min_input_length=1,
                )
            )

    for unit, n, lower, _ in _UNITS:
        for coefficient in SET_COEFFICIENTS:
            variants = [(False, False), (True, False)]
            if unit == "ngram":
                variants.append((True, True))
            for normalized, padded in variants:
                suffix = ("Normalized" if normalized else "") + ("Padded" if padded else "")
                out.append(
                    MetricDescriptor(
                        name=f"{lower}{coefficient}{suffix}",
                        family="set",
                        unit=unit,
                        n=n,
                        coefficient=coefficient,
                        normalized=normalized,
                        padded=padded,
                        min_input_length=1 if (unit == "token" or padded) else n,
                    )
                )

    for unit, n, _, upper in _UNITS:
        for weighting in (BOOL, TF, NORMALIZED_TF):
            out.append(
                MetricDescriptor(
                    name=f"cosine{upper}{_WEIGHTING_NAMES[weighting]}",
                    family="profile",
                    unit=unit,
                    n=n,
                    weighting=weighting,
                    distance=COSINE,
                    min_input_length=1 if unit == "token" else n,
                )
            )
    for unit, n, _, upper in _UNITS:
        out.append(
            MetricDescriptor(
                name=f"manhattan{upper}Normalized",
                family="profile",
                unit=unit,
                n=n,
                weighting=TF,
                distance=MANHATTAN,
                normalized=True,
                min_input_length=1 if unit == "token" else n,
            )
        )

    for n in (2, 3, 4, 5):
        for comparison in FINGERPRINT_COMPARISONS:
            for normalized in (False, True):
                out.append(
                    MetricDescriptor(
                        name=f"winnowing{_NUMBER_WORDS[n]}Gram{comparison}"
                        + ("Normalized" if normalized else ""),
                        family="fingerprint",
                        unit="ngram",
                        n=n,
                        coefficient=comparison,
                        normalized=normalized,
                        min_input_length=n,
                    )
                )

    for token in (False, True):
        for normalized in (False, True):
            out.append(
                MetricDescriptor(
                    name=("tokenEqual" if token else "equal")
                    + ("Normalized" if normalized else ""),
                    family="equal",
                    unit="token" if token else "character",
                    normalized=normalized,
                    min_input_length=0,
                )
            )
    return out


_CATALOG = _build_catalog()
_BY_NAME = {d.name: d for d in _CATALOG}
assert len(_BY_NAME) == len(_CATALOG), "duplicate metric name in catalog"


def enumerate_metrics() -> list[MetricDescriptor]:
    """All catalog entries in deterministic order."""
    return list(_CATALOG)


def descriptor(name: str) -> MetricDescriptor:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownMetricError(name) from None


def _function_for(d: MetricDescriptor) -> MetricFunction:
    if d.family == "edit":
        return lambda a, b: edit_similarity(a, b, d.method, d.normalized)
    if d.family == "set":
        return lambda a, b: set_similarity(
            a, b, d.unit, d.coefficient, d.n, d.normalized, d.padded
        )
    if d.family == "profile":
        return lambda a, b: profile_similarity(
            a, b, d.unit, d.weighting, d.distance, d.n, d.normalized, d.padded
        )
    if d.family == "fingerprint":
        return lambda a, b: winnowing_similarity(a, b, d.n, d.coefficient, d.normalized)
    if d.family == "equal":
        return lambda a, b: equal_similarity(
            a, b, token=d.unit == "token", normalized=d.normalized
        )
    raise ValueError(f"unknown family {d.family!r}")


_FUNCTIONS: dict[str, MetricFunction] = {}


def resolve(name: str) -> MetricFunction:
    """Metric function for a canonical catalog name."""
    fn = _FUNCTIONS.get(name)
    if fn is None:
        fn = _function_for(descriptor(name))
        _FUNCTIONS[name] = fn
    return fn
