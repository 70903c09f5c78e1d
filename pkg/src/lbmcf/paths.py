"""Hop-bounded shortest paths.

Both solvers reduce to one primitive: single-source shortest paths over at
most ``L`` edges under a positive per-edge length function, computed as an
exact dynamic program (after round ``t`` every label is optimal over walks
of at most ``t`` edges). Labels are double-buffered per round, so recorded
paths never exceed the hop limit, unlike in-place relaxation. Hop-count BFS
is the same computation under the all-ones length function.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .model import Instance, Network

INF = np.inf


@dataclass(frozen=True)
class HopBoundedPathTree:
    """Shortest ``<=hop_limit``-edge paths from one source vertex.

    ``dist[v]`` is the minimum total length over paths from the source to
    ``v`` with at most ``hop_limit`` edges (inf when unreachable);
    ``hops[v]`` is the edge count of the recorded path (-1 when
    unreachable); ``parent_edge[v]`` is the final edge of that path (-1 at
    the source and where undefined). The full per-round tables are kept so
    paths can be reconstructed without ever exceeding the hop limit.
    """

    source: int
    hop_limit: int
    dist_table: np.ndarray
    parent_table: np.ndarray
    tails: np.ndarray

    @cached_property
    def dist(self) -> np.ndarray:
        return self.dist_table[self.hop_limit]

    @cached_property
    def hops(self) -> np.ndarray:
        final = self.dist_table[self.hop_limit]
        # First round at which the final label appears.
        first = np.argmax(self.dist_table == final, axis=0).astype(np.int32)
        first[np.isinf(final)] = -1
        return first

    @cached_property
    def parent_edge(self) -> np.ndarray:
        hops = self.hops
        out = np.full(len(hops), -1, dtype=np.int32)
        reachable = hops > 0
        out[reachable] = self.parent_table[hops[reachable], np.nonzero(reachable)[0]]
        return out

    def reachable(self, v: int) -> bool:
        return bool(np.isfinite(self.dist_table[self.hop_limit, v]))

    def path_to(self, v: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        """Recorded path to ``v`` as (vertex sequence, edge sequence).

        Returns None when ``v`` is unreachable within the hop limit. The
        edge sequence realizes ``dist[v]`` with ``hops[v]`` edges; each
        label was computed as its predecessor label plus one edge length,
        so summing lengths along the path reproduces ``dist[v]`` exactly.
        """
        parent = self.parent_table
        t = self.hop_limit
        # Skip carried rounds; the first non-carry from the top is the
        # round the final label was achieved at.
        while t > 0 and parent[t, v] == -1:
            t -= 1
        if t == 0:
            if v != self.source:
                return None
            return (v,), ()
        verts = [v]
        edges: list[int] = []
        cur = v
        while t > 0:
            e = int(parent[t, cur])
            edges.append(e)
            cur = int(self.tails[e])
            verts.append(cur)
            t -= 1
            while t > 0 and parent[t, cur] == -1:
                t -= 1
        verts.reverse()
        edges.reverse()
        return tuple(verts), tuple(edges)


def truncated_bellman_ford(
    network: Network,
    lengths: np.ndarray,
    source: int,
    hop_limit: int,
) -> HopBoundedPathTree:
    """Shortest paths from ``source`` over at most ``hop_limit`` edges.

    ``lengths`` must be positive (entries of +inf exclude an edge). Ties
    between equal-length relaxations go to the smaller edge index.
    """
    lengths = np.ascontiguousarray(lengths, dtype=np.float64)
    dist, parent = kernels.bellman_ford_table(
        network.vertex_count, network.tails, network.heads, lengths, source, hop_limit
    )
    return HopBoundedPathTree(source, hop_limit, dist, parent, network.tails)


def hop_shortest_path_tree(network: Network, source: int, hop_limit: int) -> HopBoundedPathTree:
    """Minimum-hop paths from ``source``, truncated at depth ``hop_limit``.

    Equivalent to truncated_bellman_ford under the all-ones length function;
    dist equals the hop count.
    """
    return truncated_bellman_ford(network, np.ones(network.edge_count), source, hop_limit)


def prune_unreachable_pairs(instance: Instance) -> tuple[Instance, list[int]]:
    """Drop commodities whose destination is beyond the hop bound.

    Returns the reduced instance and the indices (into the original
    commodity list) of removed commodities. Solvers run after this never
    see a commodity that cannot carry flow.
    """
    trees: dict[int, HopBoundedPathTree] = {}
    kept = []
    removed = []
    for idx, com in enumerate(instance.commodities):
        tree = trees.get(com.origin)
        if tree is None:
            tree = hop_shortest_path_tree(instance.network, com.origin, instance.hop_bound)
            trees[com.origin] = tree
        if tree.reachable(com.destination):
            kept.append(com)
        else:
            removed.append(idx)
    if not removed:
        return instance, []
    return Instance(instance.network, tuple(kept), instance.hop_bound), removed
