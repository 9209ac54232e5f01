#!/usr/bin/env python3
"""Benchmark the compiled alignment kernels against the pure-Python fallback.

The alignment and LCS dynamic programs are the hot inner loops of corpus
evaluation: WER/WIL and ROUGE-L compare every summary against the full
source document, an O(|hyp| * |ref|) table per pair. Sizes below mimic a
summary (~80 tokens) scored against a news article (~1500 tokens).

Usage: python benchmarks/bench_kernels.py [--pairs N]
"""

import argparse
import random
import time

from summarank import _alignment_py, kernels


def _make_pairs(pairs, rng):
    data = []
    for _ in range(pairs):
        hyp = [rng.randrange(600) for _ in range(rng.randint(40, 120))]
        ref = [rng.randrange(600) for _ in range(rng.randint(1000, 2000))]
        data.append((hyp, ref))
    return data


def _time(func, data):
    started = time.perf_counter()
    for hyp, ref in data:
        func(hyp, ref)
    return time.perf_counter() - started


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=20)
    args = parser.parse_args()

    if kernels.BACKEND != "cython":
        print(
            "compiled backend not available (BACKEND=%s); build the extension "
            "first: pip install -e . --no-build-isolation" % kernels.BACKEND
        )
        return

    rng = random.Random(12345)
    data = _make_pairs(args.pairs, rng)

    print(f"{args.pairs} summary/document pairs, hyp 40-120 tokens, ref 1000-2000 tokens")
    print(f"{'kernel':<16}{'cython':>12}{'python':>12}{'speedup':>10}")
    for name, compiled, pure in (
        ("align_counts", kernels.align_counts, _alignment_py.align_counts),
        ("lcs_length", kernels.lcs_length, _alignment_py.lcs_length),
    ):
        # sanity: identical results before timing
        for hyp, ref in data[:3]:
            assert compiled(hyp, ref) == pure(hyp, ref)
        t_compiled = _time(compiled, data)
        t_pure = _time(pure, data)
        print(
            f"{name:<16}{t_compiled:>10.3f}s{t_pure:>10.3f}s"
            f"{t_pure / t_compiled:>9.1f}x"
        )


if __name__ == "__main__":
    main()
