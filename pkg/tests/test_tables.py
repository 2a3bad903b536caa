import random

import pytest

from posthist import tables


def test_escape_round_trip_specials():
    raw = "a\tb\nc\rd\\e"
    escaped = tables.escape_field(raw)
    assert "\t" not in escaped and "\n" not in escaped and "\r" not in escaped
    assert tables.unescape_field(escaped) == raw


def test_escape_round_trip_fuzz():
    rng = random.Random(4)
    alphabet = "ab\t\n\r\\xy "
    for _ in range(300):
        raw = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 30)))
        assert tables.unescape_field(tables.escape_field(raw)) == raw


def test_unknown_escape_kept():
    assert tables.unescape_field("a\\qb") == "a\\qb"
    assert tables.unescape_field("end\\") == "end\\"


def test_row_round_trip():
    row = ["1", "a\tb", "c\nd", "", "plain"]
    assert tables.parse_row(tables.format_row(row)) == row


def test_read_rows_skips_blanks_and_strips_cr(tmp_path):
    path = tmp_path / "t.tsv"
    path.write_bytes(b"a\tb\r\n\r\nc\td\n\n")
    assert list(tables.read_rows(path)) == [["a", "b"], ["c", "d"]]


def test_write_rows_and_atomicity(tmp_path):
    path = tmp_path / "out.tsv"
    tables.write_rows(path, [["x", "y\n"], ["1", "2"]])
    assert list(tables.read_rows(path)) == [["x", "y\n"], ["1", "2"]]
    leftovers = [p for p in tmp_path.iterdir() if p != path]
    assert leftovers == []


def test_atomic_write_replaces(tmp_path):
    path = tmp_path / "f.txt"
    tables.atomic_write(path, "one")
    tables.atomic_write(path, "two")
    assert path.read_text() == "two"
