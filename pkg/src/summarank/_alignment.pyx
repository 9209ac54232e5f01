# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled alignment kernels: Levenshtein alignment counts and LCS length.

Mirrors summarank._alignment_py; see that module for the contracts.
Both kernels run the O(n*m) dynamic program over int32 token ids.
"""

import numpy as np

from libc.stdint cimport int32_t, int64_t


def align_counts(int32_t[::1] hyp, int32_t[::1] ref):
    cdef Py_ssize_t n = hyp.shape[0]
    cdef Py_ssize_t m = ref.shape[0]
    cdef Py_ssize_t i, j
    cdef int64_t c, h, c2, h2, c3, h3
    cdef int32_t hi

    prev_cost_arr = np.arange(m + 1, dtype=np.int64)
    prev_hits_arr = np.zeros(m + 1, dtype=np.int64)
    cur_cost_arr = np.zeros(m + 1, dtype=np.int64)
    cur_hits_arr = np.zeros(m + 1, dtype=np.int64)
    cdef int64_t[::1] prev_cost = prev_cost_arr
    cdef int64_t[::1] prev_hits = prev_hits_arr
    cdef int64_t[::1] cur_cost = cur_cost_arr
    cdef int64_t[::1] cur_hits = cur_hits_arr
    cdef int64_t[::1] tmp

    for i in range(1, n + 1):
        cur_cost[0] = i
        cur_hits[0] = 0
        hi = hyp[i - 1]
        for j in range(1, m + 1):
            if hi == ref[j - 1]:
                c = prev_cost[j - 1]
                h = prev_hits[j - 1] + 1
            else:
                c = prev_cost[j - 1] + 1
                h = prev_hits[j - 1]
            c2 = prev_cost[j] + 1
            h2 = prev_hits[j]
            if c2 < c or (c2 == c and h2 > h):
                c = c2
                h = h2
            c3 = cur_cost[j - 1] + 1
            h3 = cur_hits[j - 1]
            if c3 < c or (c3 == c and h3 > h):
                c = c3
                h = h3
            cur_cost[j] = c
            cur_hits[j] = h
        tmp = prev_cost
        prev_cost = cur_cost
        cur_cost = tmp
        tmp = prev_hits
        prev_hits = cur_hits
        cur_hits = tmp
    return int(prev_cost[m]), int(prev_hits[m])


def lcs_length(int32_t[::1] hyp, int32_t[::1] ref):
    cdef Py_ssize_t n = hyp.shape[0]
    cdef Py_ssize_t m = ref.shape[0]
    cdef Py_ssize_t i, j
    cdef int32_t hi

    prev_arr = np.zeros(m + 1, dtype=np.int64)
    cur_arr = np.zeros(m + 1, dtype=np.int64)
    cdef int64_t[::1] prev = prev_arr
    cdef int64_t[::1] cur = cur_arr
    cdef int64_t[::1] tmp

    for i in range(1, n + 1):
        hi = hyp[i - 1]
        for j in range(1, m + 1):
            if hi == ref[j - 1]:
                cur[j] = prev[j - 1] + 1
            elif cur[j - 1] >= prev[j]:
                cur[j] = cur[j - 1]
            else:
                cur[j] = prev[j]
        tmp = prev
        prev = cur
        cur = tmp
        cur[0] = 0
    return int(prev[m])
