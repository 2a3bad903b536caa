import random
import subprocess
import sys

import pytest

from posthist import metrics
from posthist.metrics import (
    PAD_CHAR,
    TooShortError,
    UnknownMetricError,
    char_ngrams,
    descriptor,
    enumerate_metrics,
    normalize_edit,
    normalize_ngram,
    normalize_token,
    resolve,
    token_shingles,
)
from posthist.metrics import _numba_kernels, _numpy_kernels
from posthist.metrics.kernels import encode


def score(name, a, b):
    return resolve(name)(a, b)


# --- catalog -----------------------------------------------------------------

def test_catalog_size_and_families():
    descs = enumerate_metrics()
    assert len(descs) == 134
    by_family = {}
    for d in descs:
        by_family[d.family] = by_family.get(d.family, 0) + 1
    assert by_family == {"edit": 8, "set": 54, "profile": 28, "fingerprint": 40, "equal": 4}


def test_catalog_names_unique_and_resolvable():
    names = [d.name for d in enumerate_metrics()]
    assert len(set(names)) == len(names)
    for name in names:
        assert callable(resolve(name))
        assert descriptor(name).name == name


def test_unknown_metric():
    with pytest.raises(UnknownMetricError):
        resolve("nope")
    with pytest.raises(UnknownMetricError):
        descriptor("alsoNope")


def test_expected_known_names_present():
    names = {d.name for d in enumerate_metrics()}
    for name in (
        "levenshtein",
        "levenshteinNormalized",
        "damerauLevenshteinNormalized",
        "optimalAlignmentNormalized",
        "longestCommonSubsequenceNormalized",
        "tokenJaccard",
        "fourGramDiceNormalizedPadded",
        "twoShingleOverlapNormalized",
        "cosineTokenNormalizedTermFrequency",
        "manhattanFourGramNormalized",
        "winnowingFourGramDiceNormalized",
        "winnowingFourGramLongestCommonSubsequenceNormalized",
        "equal",
        "tokenEqualNormalized",
    ):
        assert name in names, name


# --- normalization ------------------------------------------------------------

def test_normalize_edit_collapses_and_lowers():
    assert normalize_edit("  A \t B\nc  ") == "a b c"


def test_normalize_ngram_strips_specials():
    assert normalize_ngram("A{b;\n c}") == "abc"


def test_normalize_token_keeps_separators():
    assert normalize_token("print('x');  DONE") == "printx done"


def test_char_ngrams_padding():
    with pytest.raises(TooShortError):
        char_ngrams("ab", 3, padded=False)
    padded = char_ngrams("ab", 3, padded=True)
    assert padded[0] == PAD_CHAR * 2 + "a"
    assert padded[-1] == "b" + PAD_CHAR * 2
    assert char_ngrams("abc", 3) == ["abc"]


def test_token_shingles():
    assert token_shingles(["a", "b", "c"], 2) == [("a", "b"), ("b", "c")]
    with pytest.raises(TooShortError):
        token_shingles(["a"], 2)


# --- documented example values -------------------------------------------------

def test_edit_examples():
    assert score("levenshtein", "kitten", "sitting") == pytest.approx(4 / 7)
    assert score("levenshteinNormalized", "KITTEN ", "sitting") == pytest.approx(4 / 7)
    assert score("longestCommonSubsequence", "abcdef", "abdf") == pytest.approx(4 / 6)


def test_set_examples():
    assert score("tokenJaccard", "a b c", "a b d") == 0.5
    assert score("tokenOverlap", "a b", "a b c d") == 1.0
    assert score("tokenDice", "a b", "a c") == 0.5


def test_profile_examples():
    assert score("cosineTokenBool", "a b", "a c") == pytest.approx(0.5)
    assert score("manhattanFourGramNormalized", "aaaa", "bbbb") == 0.0
    assert score("manhattanFourGramNormalized", "same text", "same text") == 1.0


def test_equal_examples():
    assert score("equal", "", "") == 1.0
    assert score("equal", "a", "b") == 0.0
    assert score("equal", "a  b", "a b") == 0.0
    assert score("equalNormalized", " A ", "a") == 1.0
    assert score("tokenEqual", "a  b", "a b") == 1.0
    assert score("tokenEqual", "a b!", "a b") == 0.0
    assert score("tokenEqualNormalized", "A  b!", "a b") == 1.0


def test_fingerprint_identity_and_too_short():
    assert score("winnowingFourGramDice", "abcdef", "abcdef") == 1.0
    with pytest.raises(TooShortError):
        score("winnowingFourGramDice", "abc", "abcdef")


def test_too_short_conditions():
    with pytest.raises(TooShortError):
        score("levenshtein", "", "")
    with pytest.raises(TooShortError):
        score("tokenJaccard", "  ", "a")
    with pytest.raises(TooShortError):
        score("fourGramJaccard", "abc", "abcd")
    assert score("fourGramJaccardNormalizedPadded", "abc", "abc") == 1.0


# --- family properties ----------------------------------------------------------

_FUZZ_ALPHABET = "ab {;c"


def _fuzz_pairs(count, seed):
    rng = random.Random(seed)
    pairs = []
    for _ in range(count):
        a = "".join(rng.choice(_FUZZ_ALPHABET) for _ in range(rng.randint(0, 12)))
        b = "".join(rng.choice(_FUZZ_ALPHABET) for _ in range(rng.randint(0, 12)))
        pairs.append((a, b))
    return pairs


@pytest.mark.parametrize("name", [d.name for d in enumerate_metrics()])
def test_range_reflexivity_symmetry(name):
    fn = resolve(name)
    for a, b in _fuzz_pairs(30, hash(name) % 10000):
        try:
            val = fn(a, b)
        except TooShortError:
            continue
        assert 0.0 <= val <= 1.0, (name, a, b, val)
        try:
            assert fn(b, a) == pytest.approx(val), (name, a, b)
        except TooShortError:
            pytest.fail(f"{name} asymmetric tooShort on {a!r}/{b!r}")
        try:
            assert fn(a, a) == pytest.approx(1.0)
        except TooShortError:
            pass


def _raw_scorer(desc):
    if desc.family == "edit":
        return lambda a, b: metrics.edit_similarity(a, b, desc.method)
    if desc.family == "set":
        return lambda a, b: metrics.set_similarity(
            a, b, desc.unit, desc.coefficient, desc.n, padded=desc.padded
        )
    if desc.family == "profile":
        return lambda a, b: metrics.profile_similarity(
            a, b, desc.unit, desc.weighting, desc.distance, desc.n, padded=desc.padded
        )
    if desc.family == "fingerprint":
        return lambda a, b: metrics.winnowing_similarity(a, b, desc.n, desc.coefficient)
    return lambda a, b: metrics.equal_similarity(a, b, token=desc.unit == "token")


def test_normalized_variant_equals_raw_on_normalized_input():
    normalized = [d for d in enumerate_metrics() if d.normalized]
    assert len(normalized) >= 60
    pairs = _fuzz_pairs(25, 77)
    for desc in normalized:
        raw_fn = _raw_scorer(desc)
        norm_fn = resolve(desc.name)
        norm = lambda s: metrics.normalize_for_unit(s, desc.unit)
        for a, b in pairs:
            try:
                expected = raw_fn(norm(a), norm(b))
            except TooShortError:
                expected = None
            try:
                actual = norm_fn(a, b)
            except TooShortError:
                actual = None
            if expected is None or actual is None:
                assert expected is None and actual is None, (desc.name, a, b)
            else:
                assert actual == pytest.approx(expected), (desc.name, a, b)


# --- kernel backends ----------------------------------------------------------

def test_kernel_backends_agree():
    rng = random.Random(5)
    for _ in range(150):
        a = encode("".join(rng.choice("abcx {7") for _ in range(rng.randint(0, 24))))
        b = encode("".join(rng.choice("abcx {7") for _ in range(rng.randint(0, 24))))
        for name in ("levenshtein_distance", "damerau_distance", "indel_distance", "lcs_length"):
            assert getattr(_numpy_kernels, name)(a, b) == getattr(_numba_kernels, name)(a, b), (
                name,
                a,
                b,
            )
        if a.size >= 3:
            ha = _numpy_kernels.gram_hashes(a, 3)
            hb = _numba_kernels.gram_hashes(a, 3)
            assert list(ha) == list(hb)
            assert list(_numpy_kernels.winnow_select(ha, 3)) == list(
                _numba_kernels.winnow_select(hb, 3)
            )


def test_kernel_known_values():
    k = encode("kitten")
    s = encode("sitting")
    assert _numpy_kernels.levenshtein_distance(k, s) == 3
    assert _numba_kernels.levenshtein_distance(k, s) == 3
    assert _numpy_kernels.damerau_distance(encode("ca"), encode("abc")) == 2
    assert _numba_kernels.damerau_distance(encode("ca"), encode("abc")) == 2
    assert _numpy_kernels.indel_distance(encode("abc"), encode("xyz")) == 6
    assert _numpy_kernels.lcs_length(encode("abcdef"), encode("abdf")) == 4


@pytest.mark.parametrize("flag,expected", [("numpy", "numpy"), ("numba", "numba")])
def test_backend_env_selection(flag, expected):
    out = subprocess.run(
        [sys.executable, "-c", "from posthist.metrics import BACKEND; print(BACKEND)"],
        env={"POSTHIST_KERNELS": flag, "PATH": "/usr/bin:/bin"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == expected
