"""Input normalization and element extraction for similarity metrics.

Three normalization rules exist, keyed by the unit a metric operates on:
character-level (edit and equal families) lowercases and collapses whitespace
runs to one space; n-gram normalization lowercases and strips all whitespace
plus the characters {, }, and ;; token/shingle normalization lowercases,
unifies whitespace, and drops characters outside [a-zA-Z0-9_ ] so token
boundaries survive.
"""

from __future__ import annotations

import re

from .base import TooShortError

# Reserved noncharacter: cannot collide with any content character.
PAD_CHAR = "﷐"

_WS_RUN = re.compile(r"\s+")
_NGRAM_DROP = re.compile(r"[\s{};]+")
_WORD_DROP = re.compile(r"[^a-z0-9_ ]")


def normalize_edit(s: str) -> str:
    return _WS_RUN.sub(" ", s.strip()).lower()


def normalize_ngram(s: str) -> str:
    return _NGRAM_DROP.sub("", s.lower())


def normalize_token(s: str) -> str:
    return _WORD_DROP.sub("", _WS_RUN.sub(" ", s.strip()).lower())


_BY_UNIT = {
    "character": normalize_edit,
    "ngram": normalize_ngram,
    "token": normalize_token,
    "shingle": normalize_token,
}


def normalize_for_unit(s: str, unit: str) -> str:
    return _BY_UNIT[unit](s)


def tokenize(s: str) -> list[str]:
    return s.split()


def char_ngrams(s: str, n: int, padded: bool = False) -> list[str]:
    """All length-n substrings, in order (a multiset, not a set)."""
    if padded:
        pad = PAD_CHAR * (n - 1)
        s = pad + s + pad
    if len(s) < n:
        raise TooShortError(f"need at least {n} characters, got {len(s)}")
    return [s[i : i + n] for i in range(len(s) - n + 1)]


def token_shingles(tokens: list[str], n: int) -> list[tuple[str, ...]]:
    if len(tokens) < n:
        raise TooShortError(f"need at least {n} tokens, got {len(tokens)}")
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def elements(s: str, unit: str, n: int | None, padded: bool, normalized: bool) -> list:
    """Extract the element multiset a set/profile metric operates on.

    Raises TooShortError when the (possibly normalized) input cannot produce
    a single element.
    """
    if normalized:
        s = normalize_for_unit(s, unit)
    if unit == "token":
        tokens = tokenize(s)
        if not tokens:
            raise TooShortError("no tokens")
        return tokens
    if unit == "ngram":
        if len(s) < 1:
            raise TooShortError("empty input")
        return char_ngrams(s, n, padded)
    if unit == "shingle":
        return token_shingles(tokenize(s), n)
    raise ValueError(f"unknown unit {unit!r}")
