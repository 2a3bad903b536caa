"""Benchmark the jit kernels against the numpy fallback implementations.

Runs the four distance kernels and the fingerprint pipeline on random
string pairs of increasing length and prints per-backend wall time plus
the speedup factor. The jit backend is warmed up before timing so
compilation cost is reported separately.
"""

from __future__ import annotations

import argparse
import random
import string
import time

import numpy as np

from posthist.metrics import _numpy_kernels
from posthist.metrics.kernels import encode

try:
    from posthist.metrics import _numba_kernels
except ImportError:
    _numba_kernels = None


def random_pairs(rng: random.Random, count: int, length: int) -> list:
    alphabet = string.ascii_lowercase + "    {};="
    pairs = []
    for _ in range(count):
        a = "".join(rng.choice(alphabet) for _ in range(length))
        b = list(a)
        for _ in range(max(1, length // 8)):
            b[rng.randrange(length)] = rng.choice(alphabet)
        pairs.append((encode(a), encode("".join(b))))
    return pairs


def bench_backend(module, pairs, repeat: int) -> dict[str, float]:
    timings = {}
    for name in ("levenshtein_distance", "damerau_distance", "indel_distance", "lcs_length"):
        fn = getattr(module, name)
        best = float("inf")
        for _ in range(repeat):
            start = time.perf_counter()
            for a, b in pairs:
                fn(a, b)
            best = min(best, time.perf_counter() - start)
        timings[name] = best
    fn_hash = module.gram_hashes
    fn_winnow = module.winnow_select
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for a, b in pairs:
            for arr in (a, b):
                if arr.size >= 4:
                    fn_winnow(fn_hash(arr, 4), 4)
        best = min(best, time.perf_counter() - start)
    timings["winnowing"] = best
    return timings


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=200, help="pairs per length")
    parser.add_argument(
        "--lengths", type=int, nargs="+", default=[16, 64, 256], help="string lengths"
    )
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    args = parser.parse_args()

    rng = random.Random(99)

    if _numba_kernels is None:
        print("jit backend unavailable; benchmarking numpy only")
    else:
        warm = encode("warmup{};")
        start = time.perf_counter()
        _numba_kernels.levenshtein_distance(warm, warm)
        _numba_kernels.damerau_distance(warm, warm)
        _numba_kernels.indel_distance(warm, warm)
        _numba_kernels.lcs_length(warm, warm)
        _numba_kernels.winnow_select(_numba_kernels.gram_hashes(warm, 4), 4)
        print(f"jit warmup (compile/load): {time.perf_counter() - start:.2f}s")

    for length in args.lengths:
        pairs = random_pairs(rng, args.pairs, length)
        numpy_times = bench_backend(_numpy_kernels, pairs, args.repeat)
        jit_times = (
            bench_backend(_numba_kernels, pairs, args.repeat) if _numba_kernels else None
        )
        print(f"\nlength={length} pairs={args.pairs}")
        header = f"{'kernel':<22}{'numpy':>10}"
        if jit_times:
            header += f"{'jit':>10}{'speedup':>9}"
        print(header)
        for name, numpy_t in numpy_times.items():
            line = f"{name:<22}{numpy_t * 1e3:>8.1f}ms"
            if jit_times:
                jit_t = jit_times[name]
                ratio = numpy_t / jit_t if jit_t > 0 else float("inf")
                line += f"{jit_t * 1e3:>8.1f}ms{ratio:>8.1f}x"
            print(line)

    # agreement spot check so the benchmark doubles as a sanity gate
    if _numba_kernels is not None:
        rng2 = random.Random(7)
        for _ in range(200):
            a, b = random_pairs(rng2, 1, rng2.randint(1, 40))[0]
            for name in ("levenshtein_distance", "damerau_distance", "indel_distance", "lcs_length"):
                x = getattr(_numpy_kernels, name)(a, b)
                y = getattr(_numba_kernels, name)(a, b)
                assert x == y, (name, a, b, x, y)
            if a.size >= 4:
                ha = _numpy_kernels.gram_hashes(a, 4)
                hb = _numba_kernels.gram_hashes(a, 4)
                assert np.array_equal(ha, hb)
                assert np.array_equal(
                    _numpy_kernels.winnow_select(ha, 4), _numba_kernels.winnow_select(hb, 4)
                )
        print("\nbackend agreement: OK (200 random pairs)")


if __name__ == "__main__":
    main()
