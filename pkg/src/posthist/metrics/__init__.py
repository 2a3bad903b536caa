"""String similarity metrics: catalog, families, and normalization."""

from .base import MetricDescriptor, TooShortError, UnknownMetricError
from .catalog import descriptor, enumerate_metrics, resolve
from .edit import edit_distance, edit_similarity, equal_similarity, lcs_length
from .fingerprint import fingerprints, winnowing_similarity
from .kernels import BACKEND
from .normalize import (
    PAD_CHAR,
    char_ngrams,
    elements,
    normalize_edit,
    normalize_for_unit,
    normalize_ngram,
    normalize_token,
    token_shingles,
    tokenize,
)
from .profiles import profile_similarity
from .setlike import set_similarity

__all__ = [
    "BACKEND",
    "MetricDescriptor",
    "PAD_CHAR",
    "TooShortError",
    "UnknownMetricError",
    "char_ngrams",
    "descriptor",
    "edit_distance",
    "edit_similarity",
    "elements",
    "enumerate_metrics",
    "equal_similarity",
    "fingerprints",
    "lcs_length",
    "normalize_edit",
    "normalize_for_unit",
    "normalize_ngram",
    "normalize_token",
    "profile_similarity",
    "resolve",
    "set_similarity",
    "token_shingles",
    "tokenize",
    "winnowing_similarity",
]
