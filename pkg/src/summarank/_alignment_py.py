"""Pure-Python alignment kernels.

Fallback used when the compiled extension is unavailable (or forced via
SUMMARANK_PURE_PYTHON=1). Same contracts as summarank._alignment.
"""

from __future__ import annotations

from typing import Sequence


def align_counts(hyp: Sequence[int], ref: Sequence[int]) -> tuple[int, int]:
    """Minimal-cost edit alignment of two id sequences.

    Unit costs for substitution/deletion/insertion, matches free. Among
    minimal-cost alignments the number of exact matches is maximal
    (lexicographic DP on (cost, -hits)). Returns (cost, hits).
    """
    n, m = len(hyp), len(ref)
    prev_cost = list(range(m + 1))
    prev_hits = [0] * (m + 1)
    cur_cost = [0] * (m + 1)
    cur_hits = [0] * (m + 1)
    for i in range(1, n + 1):
        cur_cost[0] = i
        cur_hits[0] = 0
        hi = hyp[i - 1]
        for j in range(1, m + 1):
            if hi == ref[j - 1]:
                c, h = prev_cost[j - 1], prev_hits[j - 1] + 1
            else:
                c, h = prev_cost[j - 1] + 1, prev_hits[j - 1]
            c2, h2 = prev_cost[j] + 1, prev_hits[j]
            if c2 < c or (c2 == c and h2 > h):
                c, h = c2, h2
            c3, h3 = cur_cost[j - 1] + 1, cur_hits[j - 1]
            if c3 < c or (c3 == c and h3 > h):
                c, h = c3, h3
            cur_cost[j] = c
            cur_hits[j] = h
        prev_cost, cur_cost = cur_cost, prev_cost
        prev_hits, cur_hits = cur_hits, prev_hits
    return prev_cost[m], prev_hits[m]


def lcs_length(hyp: Sequence[int], ref: Sequence[int]) -> int:
    """Length of the longest common subsequence of two id sequences."""
    n, m = len(hyp), len(ref)
    prev = [0] * (m + 1)
    cur = [0] * (m + 1)
    for i in range(1, n + 1):
        hi = hyp[i - 1]
        for j in range(1, m + 1):
            if hi == ref[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = cur[j - 1] if cur[j - 1] >= prev[j] else prev[j]
        prev, cur = cur, prev
    return prev[m]
