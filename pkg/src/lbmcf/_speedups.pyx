# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hop-bounded shortest-path inner loop.

Semantics match lbmcf._kernels_py bit for bit: double-buffered rounds,
strict improvement, lowest-edge-index tie-breaking.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


def bellman_ford_table(
    int n,
    int[::1] tails,
    int[::1] heads,
    double[::1] lengths,
    int source,
    int hop_limit,
):
    """Hop-indexed shortest-path DP table from ``source``.

    Returns ``(dist, parent)`` with shape ``(hop_limit+1, n)``; see the
    pure-Python twin for the exact contract.
    """
    dist = np.full((hop_limit + 1, n), np.inf)
    parent = np.full((hop_limit + 1, n), -1, dtype=np.int32)
    cdef double[:, ::1] d = dist
    cdef int[:, ::1] par = parent
    cdef Py_ssize_t m = tails.shape[0]
    cdef Py_ssize_t e
    cdef int t, v
    cdef double cand

    d[0, source] = 0.0
    with nogil:
        for t in range(1, hop_limit + 1):
            for v in range(n):
                d[t, v] = d[t - 1, v]
            for e in range(m):
                cand = d[t - 1, tails[e]] + lengths[e]
                if cand < d[t, heads[e]]:
                    d[t, heads[e]] = cand
                    par[t, heads[e]] = <int> e
    return dist, parent
