"""Pure-numpy kernel implementations.

Used when the compiled extension is unavailable (or forced via the
LBMCF_PURE_PYTHON environment variable). Must produce bit-identical tables
to the compiled kernels: relaxations read only the previous round's labels,
improvements are strict, and among edges achieving a round's minimum the
lowest edge index becomes the parent.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def bellman_ford_table(
    n: int,
    tails: np.ndarray,
    heads: np.ndarray,
    lengths: np.ndarray,
    source: int,
    hop_limit: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Hop-indexed shortest-path DP table from ``source``.

    Returns ``(dist, parent)`` with shape ``(hop_limit+1, n)``. ``dist[t, v]``
    is the minimum length over walks of at most ``t`` edges; ``parent[t, v]``
    is the edge improving ``v`` at round ``t`` (-1 when the label carried
    over). Edges with infinite length are effectively removed.
    """
    dist = np.full((hop_limit + 1, n), np.inf)
    parent = np.full((hop_limit + 1, n), -1, dtype=np.int32)
    dist[0, source] = 0.0
    if len(tails) == 0:
        dist[:, source] = 0.0
        return dist, parent
    edge_ids = np.arange(len(tails))
    for t in range(1, hop_limit + 1):
        prev = dist[t - 1]
        cur = prev.copy()
        cand = prev[tails] + lengths
        np.minimum.at(cur, heads, cand)
        improved = (cand == cur[heads]) & (cur[heads] < prev[heads])
        ids = edge_ids[improved]
        # Reversed write: with duplicate heads the last assignment wins, so
        # the smallest edge index ends up recorded.
        parent[t, heads[ids][::-1]] = ids[::-1].astype(np.int32)
        dist[t] = cur
    return dist, parent
