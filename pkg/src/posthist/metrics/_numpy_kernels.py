"""Pure-numpy fallback kernels mirroring the numba implementations.

Row loops stay in Python; inner loops are vectorized. The insert chain
cur[j] = min(cand[j], cur[j-1] + 1) is computed as a running minimum of
cand[j] - j (prefix-min trick), and analogously for the LCS maximum.
"""

from __future__ import annotations

import numpy as np

HASH_BASE = 1114113
HASH_MOD = 2147483647


def levenshtein_distance(a, b):
    n, m = a.size, b.size
    if n == 0:
        return int(m)
    if m == 0:
        return int(n)
    prev = np.arange(m + 1, dtype=np.int64)
    idx = np.arange(1, m + 1, dtype=np.int64)
    full = np.arange(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        cost = (b != a[i - 1]).astype(np.int64)
        cand = np.minimum(prev[:-1] + cost, prev[1:] + 1)
        u = np.minimum.accumulate(
            np.concatenate((np.array([i], np.int64), cand - idx))
        )
        prev = u + full
    return int(prev[m])


def indel_distance(a, b):
    n, m = a.size, b.size
    if n == 0:
        return int(m)
    if m == 0:
        return int(n)
    big = np.int64(n + m + 1)
    prev = np.arange(m + 1, dtype=np.int64)
    idx = np.arange(1, m + 1, dtype=np.int64)
    full = np.arange(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        eq = b == a[i - 1]
        cand = np.minimum(np.where(eq, prev[:-1], big), prev[1:] + 1)
        u = np.minimum.accumulate(
            np.concatenate((np.array([i], np.int64), cand - idx))
        )
        prev = u + full
    return int(prev[m])


def lcs_length(a, b):
    if a.size == 0 or b.size == 0:
        return 0
    prev = np.zeros(b.size + 1, np.int64)
    zero = np.zeros(1, np.int64)
    for i in range(a.size):
        eq = (b == a[i]).astype(np.int64)
        cand = np.maximum(prev[1:], prev[:-1] + eq)
        prev = np.maximum.accumulate(np.concatenate((zero, cand)))
    return int(prev[-1])


def damerau_distance(a, b):
    """Unrestricted Damerau-Levenshtein (Lowrance-Wagner)."""
    n, m = a.size, b.size
    if n == 0:
        return int(m)
    if m == 0:
        return int(n)
    uniq, inv = np.unique(np.concatenate((a, b)), return_inverse=True)
    ar = inv[:n]
    br = inv[n:]
    inf = np.int64(n + m)
    h = np.full((n + 2, m + 2), inf, dtype=np.int64)
    h[1, 1:] = np.arange(m + 1, dtype=np.int64)
    h[1:, 1] = np.arange(n + 1, dtype=np.int64)
    da = np.zeros(uniq.size, dtype=np.int64)
    jj = np.arange(1, m + 1, dtype=np.int64)
    full = np.arange(m + 1, dtype=np.int64)
    zero = np.zeros(1, np.int64)
    for i in range(1, n + 1):
        eq = br == ar[i - 1]
        cost = 1 - eq.astype(np.int64)
        match_pos = np.where(eq, jj, 0)
        j1 = np.concatenate((zero, np.maximum.accumulate(match_pos)[:-1]))
        i1 = da[br]
        trans = h[i1, j1] + (i - i1 - 1) + 1 + (jj - j1 - 1)
        sub = h[i, 1 : m + 1] + cost
        dele = h[i, 2 : m + 2] + 1
        cand = np.minimum(np.minimum(sub, dele), trans)
        u = np.minimum.accumulate(
            np.concatenate((np.array([i], np.int64), cand - jj))
        )
        h[i + 1, 1:] = u + full
        da[ar[i - 1]] = i
    return int(h[n + 1, m + 1])


def gram_hashes(codes, n):
    k = codes.size - n + 1
    if k < 1:
        return np.empty(0, np.int64)
    h = np.zeros(k, np.int64)
    for j in range(n):
        h = (h * HASH_BASE + codes[j : j + k]) % HASH_MOD
    return h


def winnow_select(hashes, w):
    k = hashes.size
    if k == 0:
        return np.empty(0, np.int64)
    if k < w:
        best = k - 1 - int(np.argmin(hashes[::-1]))
        return hashes[best : best + 1].copy()
    windows = np.lib.stride_tricks.sliding_window_view(hashes, w)
    pos = np.arange(k - w + 1) + (w - 1) - np.argmin(windows[:, ::-1], axis=1)
    keep = np.empty(pos.size, dtype=bool)
    keep[0] = True
    keep[1:] = pos[1:] != pos[:-1]
    return hashes[pos[keep]]
