"""Line-level shortest edit scripts (Myers' greedy O(ND) algorithm)."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

KEEP = "keep"
INSERT = "insert"
DELETE = "delete"


@dataclass(frozen=True)
class DiffOp:
    op: str
    line: str


def diff_lines(a: Sequence[str], b: Sequence[str]) -> list[DiffOp]:
    """Return a minimal keep/insert/delete script turning a into b."""
    n, m = len(a), len(b)
    if n == 0:
        return [DiffOp(INSERT, line) for line in b]
    if m == 0:
        return [DiffOp(DELETE, line) for line in a]

    max_d = n + m
    v: dict[int, int] = {1: 0}
    trace: list[dict[int, int]] = []
    found = False
    for d in range(max_d + 1):
        trace.append(dict(v))
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v.get(k - 1, -1) < v.get(k + 1, -1)):
                x = v[k + 1]
            else:
                x = v[k - 1] + 1
            y = x - k
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            v[k] = x
            if x >= n and y >= m:
                found = True
                break
        if found:
            break

    # Backtrack from (n, m) through the stored frontier snapshots.
    ops_reversed: list[DiffOp] = []
    x, y = n, m
    for d in range(len(trace) - 1, 0, -1):
        snapshot = trace[d]
        k = x - y
        if k == -d or (k != d and snapshot.get(k - 1, -1) < snapshot.get(k + 1, -1)):
            prev_k = k + 1
        else:
            prev_k = k - 1
        prev_x = snapshot[prev_k]
        prev_y = prev_x - prev_k
        while x > prev_x and y > prev_y:
            x -= 1
            y -= 1
            ops_reversed.append(DiffOp(KEEP, a[x]))
        if x == prev_x:
            y -= 1
            ops_reversed.append(DiffOp(INSERT, b[y]))
        else:
            x -= 1
            ops_reversed.append(DiffOp(DELETE, a[x]))
    while x > 0 and y > 0:
        x -= 1
        y -= 1
        ops_reversed.append(DiffOp(KEEP, a[x]))
    return ops_reversed[::-1]


def apply_diff(ops: Sequence[DiffOp], a: Sequence[str]) -> list[str]:
    """Apply a script produced by diff_lines to the original line list."""
    out: list[str] = []
    pos = 0
    for op in ops:
        if op.op == KEEP:
            if pos >= len(a) or a[pos] != op.line:
                raise ValueError(f"keep mismatch at source line {pos}")
            out.append(a[pos])
            pos += 1
        elif op.op == DELETE:
            if pos >= len(a) or a[pos] != op.line:
                raise ValueError(f"delete mismatch at source line {pos}")
            pos += 1
        elif op.op == INSERT:
            out.append(op.line)
        else:
            raise ValueError(f"unknown op {op.op!r}")
    if pos != len(a):
        raise ValueError("script did not consume the whole source")
    return out


def line_diff(pred: str, succ: str) -> list[DiffOp]:
    return diff_lines(pred.split("\n"), succ.split("\n"))
