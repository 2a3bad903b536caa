"""Tab-separated table IO with escaping and atomic writes.

Fields may contain tabs, newlines, carriage returns, and backslashes; they are
escaped as \\t, \\n, \\r, and \\\\ so that one logical record is always one
physical line.
"""

from __future__ import annotations

import os
import tempfile
from collections.abc import Iterable, Iterator

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}


def escape_field(value: str) -> str:
    if not any(c in value for c in "\\\t\n\r"):
        return value
    out = []
    for c in value:
        out.append(_ESCAPES.get(c, c))
    return "".join(out)


def unescape_field(value: str) -> str:
    if "\\" not in value:
        return value
    out = []
    i = 0
    n = len(value)
    while i < n:
        c = value[i]
        if c == "\\" and i + 1 < n:
            nxt = value[i + 1]
            if nxt == "t":
                out.append("\t")
            elif nxt == "n":
                out.append("\n")
            elif nxt == "r":
                out.append("\r")
            elif nxt == "\\":
                out.append("\\")
            else:
                # Unknown escape: keep both characters.
                out.append(c)
                out.append(nxt)
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def format_row(fields: Iterable[str]) -> str:
    return "\t".join(escape_field(f) for f in fields)


def parse_row(line: str) -> list[str]:
    return [unescape_field(f) for f in line.split("\t")]


def read_rows(path: str | os.PathLike[str]) -> Iterator[list[str]]:
    """Yield unescaped field lists, skipping blank lines."""
    with open(path, encoding="utf-8", newline="") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if line.endswith("\r"):
                line = line[:-1]
            if not line:
                continue
            yield parse_row(line)


def atomic_write(path: str | os.PathLike[str], data: str) -> None:
    """Write data to path via a same-directory temp file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_rows(path: str | os.PathLike[str], rows: Iterable[Iterable[str]]) -> None:
    atomic_write(path, "".join(format_row(r) + "\n" for r in rows))
