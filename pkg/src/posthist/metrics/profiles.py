"""Vector-space similarity over element profiles (cosine and manhattan).

Weightings: bool (presence), tf (raw count), normalizedTf (BM15 with k=1.5,
weight f*(k+1)/(f+k)).
"""

from __future__ import annotations

import math
from collections import Counter

from .normalize import elements

BOOL = "bool"
TF = "tf"
NORMALIZED_TF = "normalizedTf"

WEIGHTINGS = (BOOL, TF, NORMALIZED_TF)

COSINE = "cosine"
MANHATTAN = "manhattan"

_BM15_K = 1.5


def _weight(count: int, weighting: str) -> float:
    if weighting == BOOL:
        return 1.0
    if weighting == TF:
        return float(count)
    if weighting == NORMALIZED_TF:
        return count * (_BM15_K + 1.0) / (count + _BM15_K)
    raise ValueError(f"unknown weighting {weighting!r}")


def profile_similarity(
    a: str,
    b: str,
    unit: str,
    weighting: str,
    distance: str,
    n: int | None = None,
    normalized: bool = False,
    padded: bool = False,
) -> float:
    pa = Counter(elements(a, unit, n, padded, normalized))
    pb = Counter(elements(b, unit, n, padded, normalized))
    wa = {e: _weight(c, weighting) for e, c in pa.items()}
    wb = {e: _weight(c, weighting) for e, c in pb.items()}
    # fsum keeps every sum independent of dict iteration order, so scores are
    # exactly symmetric; the explicit 1.0 cases and the clamps keep rounding
    # from leaking outside [0,1] or below 1 on identical profiles.
    if distance == COSINE:
        if wa == wb:
            return 1.0
        dot = math.fsum(w * wb[e] for e, w in wa.items() if e in wb)
        norm_a = math.sqrt(math.fsum(w * w for w in wa.values()))
        norm_b = math.sqrt(math.fsum(w * w for w in wb.values()))
        return min(1.0, dot / (norm_a * norm_b))
    if distance == MANHATTAN:
        l1 = math.fsum(
            abs(wa.get(e, 0.0) - wb.get(e, 0.0)) for e in wa.keys() | wb.keys()
        )
        if l1 == 0.0:
            return 1.0
        total = math.fsum(wa.values()) + math.fsum(wb.values())
        return max(0.0, 1.0 - l1 / total)
    raise ValueError(f"unknown distance {distance!r}")
