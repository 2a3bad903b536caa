"""Numba-compiled distance and fingerprint kernels.

All kernels take int64 arrays (Unicode code points or fingerprint hashes).
"""

from __future__ import annotations

import numpy as np
from numba import njit

HASH_BASE = 1114113
HASH_MOD = 2147483647


@njit(cache=True)
def levenshtein_distance(a, b):
    n = a.size
    m = b.size
    if n == 0:
        return m
    if m == 0:
        return n
    prev = np.empty(m + 1, np.int64)
    cur = np.empty(m + 1, np.int64)
    for j in range(m + 1):
        prev[j] = j
    for i in range(1, n + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1]
            if ai != b[j - 1]:
                best += 1
            v = prev[j] + 1
            if v < best:
                best = v
            v = cur[j - 1] + 1
            if v < best:
                best = v
            cur[j] = best
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m]


@njit(cache=True)
def indel_distance(a, b):
    n = a.size
    m = b.size
    if n == 0:
        return m
    if m == 0:
        return n
    prev = np.empty(m + 1, np.int64)
    cur = np.empty(m + 1, np.int64)
    for j in range(m + 1):
        prev[j] = j
    for i in range(1, n + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                best = prev[j - 1]
            else:
                best = prev[j] + 1
                v = cur[j - 1] + 1
                if v < best:
                    best = v
            cur[j] = best
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m]


@njit(cache=True)
def lcs_length(a, b):
    n = a.size
    m = b.size
    if n == 0 or m == 0:
        return 0
    prev = np.zeros(m + 1, np.int64)
    cur = np.zeros(m + 1, np.int64)
    for i in range(1, n + 1):
        ai = a[i - 1]
        cur[0] = 0
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                best = prev[j]
                if cur[j - 1] > best:
                    best = cur[j - 1]
                cur[j] = best
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m]


@njit(cache=True)
def damerau_distance(a, b):
    """Unrestricted Damerau-Levenshtein (Lowrance-Wagner)."""
    n = a.size
    m = b.size
    if n == 0:
        return m
    if m == 0:
        return n
    comb = np.empty(n + m, np.int64)
    comb[:n] = a
    comb[n:] = b
    comb = np.sort(comb)
    u = 1
    for t in range(1, comb.size):
        if comb[t] != comb[t - 1]:
            u += 1
    uniq = np.empty(u, np.int64)
    uniq[0] = comb[0]
    w = 1
    for t in range(1, comb.size):
        if comb[t] != comb[t - 1]:
            uniq[w] = comb[t]
            w += 1
    ar = np.searchsorted(uniq, a)
    br = np.searchsorted(uniq, b)
    inf = n + m
    h = np.empty((n + 2, m + 2), np.int64)
    for j in range(m + 2):
        h[0, j] = inf
    for i in range(n + 2):
        h[i, 0] = inf
    for j in range(m + 1):
        h[1, j + 1] = j
    for i in range(n + 1):
        h[i + 1, 1] = i
    da = np.zeros(u, np.int64)
    for i in range(1, n + 1):
        db = 0
        for j in range(1, m + 1):
            i1 = da[br[j - 1]]
            j1 = db
            if ar[i - 1] == br[j - 1]:
                cost = 0
                db = j
            else:
                cost = 1
            best = h[i, j] + cost
            v = h[i + 1, j] + 1
            if v < best:
                best = v
            v = h[i, j + 1] + 1
            if v < best:
                best = v
            v = h[i1, j1] + (i - i1 - 1) + 1 + (j - j1 - 1)
            if v < best:
                best = v
            h[i + 1, j + 1] = best
        da[ar[i - 1]] = i
    return h[n + 1, m + 1]


@njit(cache=True)
def gram_hashes(codes, n):
    """Polynomial hash of every length-n window of the code-point array."""
    k = codes.size - n + 1
    if k < 1:
        return np.empty(0, np.int64)
    out = np.empty(k, np.int64)
    for i in range(k):
        h = 0
        for j in range(n):
            h = (h * HASH_BASE + codes[i + j]) % HASH_MOD
        out[i] = h
    return out


@njit(cache=True)
def winnow_select(hashes, w):
    """Fingerprints: rightmost minimum per window, deduplicated by position.

    Fewer than w hashes select the single rightmost global minimum.
    """
    k = hashes.size
    if k == 0:
        return np.empty(0, np.int64)
    if k < w:
        best = 0
        for j in range(1, k):
            if hashes[j] <= hashes[best]:
                best = j
        out = np.empty(1, np.int64)
        out[0] = hashes[best]
        return out
    positions = np.empty(k - w + 1, np.int64)
    count = 0
    for start in range(k - w + 1):
        best = start
        for j in range(start + 1, start + w):
            if hashes[j] <= hashes[best]:
                best = j
        if count == 0 or positions[count - 1] != best:
            positions[count] = best
            count += 1
    out = np.empty(count, np.int64)
    for t in range(count):
        out[t] = hashes[positions[t]]
    return out
