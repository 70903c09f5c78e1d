"""Greedy heuristic: route along the longest of the current shortest paths.

The path set holds one hop-shortest route per still-served commodity. Each
iteration pops the longest path (most hops; ties to the lower commodity
index), routes the bottleneck amount capped by the residual demand, deletes
saturated edges and, when something was deleted, rebuilds the path set over
the surviving live-edge graph. On all-integer instances every routed
amount is an integer.

Shortest-path trees are maintained for every vertex as a root, so the
per-rebuild cost depends on the graph, not on the number of commodities
(the reference implementation recomputes all-roots trees each rebuild for
the same reason; its runtime is flat in the commodity count). Trees are
cached across rebuilds: deleting an edge that is nowhere a tree parent can
change neither any hop distance nor the lowest-edge-index parent choice,
so only trees actually containing a deleted edge are recomputed, and only
commodities whose origin tree changed get their paths re-extracted. The
observable behavior is identical to rebuilding from scratch (the test
suite cross-checks this against a naive reference).
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InternalAssertionError
from .model import FlowSolution, Instance, PathFlow, is_unbounded
from .paths import HopBoundedPathTree, truncated_bellman_ford

Path = tuple[tuple[int, ...], tuple[int, ...]]  # vertex sequence, edge sequence


@dataclass
class GreedyStats:
    iterations: int = 0
    rebuilds: int = 0
    edges_deleted: int = 0
    tree_builds: int = 0

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "rebuilds": self.rebuilds,
            "edges_deleted": self.edges_deleted,
            "tree_builds": self.tree_builds,
        }


@dataclass
class GreedyState:
    """Mutable solver state: residuals, live edges and the path set."""

    residual_capacity: np.ndarray
    residual_demand: list[float]
    live: np.ndarray
    path_set: dict[int, Path] = field(default_factory=dict)

    @classmethod
    def initial(cls, instance: Instance) -> "GreedyState":
        return cls(
            residual_capacity=instance.network.capacities.copy(),
            residual_demand=[c.demand for c in instance.commodities],
            live=np.ones(instance.network.edge_count, dtype=bool),
        )


def _live_lengths(live: np.ndarray) -> np.ndarray:
    lengths = np.ones(len(live))
    lengths[~live] = np.inf
    return lengths


def rebuild_path_set(state: GreedyState, instance: Instance) -> dict[int, Path]:
    """Hop-shortest live path per commodity with positive residual demand.

    Commodities without a hop-bounded route in the live graph are omitted.
    Dead edges are excluded by giving them infinite length, which reduces
    hop-count BFS to the shortest-path kernel.
    """
    lengths = _live_lengths(state.live)
    trees: dict[int, HopBoundedPathTree] = {}
    out: dict[int, Path] = {}
    for ci, com in enumerate(instance.commodities):
        if state.residual_demand[ci] <= 0:
            continue
        tree = trees.get(com.origin)
        if tree is None:
            tree = truncated_bellman_ford(
                instance.network, lengths, com.origin, instance.hop_bound
            )
            trees[com.origin] = tree
        path = tree.path_to(com.destination)
        if path is not None:
            out[ci] = path
    return out


class _TreeCache:
    """All-roots shortest-path trees with deletion-based invalidation.

    ``contains[root, e + 1]`` records whether edge ``e`` is a parent
    somewhere in root's tree (column 0 absorbs the -1 carry markers).
    """

    def __init__(self, instance: Instance, stats: GreedyStats, threads: int):
        self.net = instance.network
        self.hop_bound = instance.hop_bound
        self.stats = stats
        self.pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
        self.lengths = np.ones(self.net.edge_count)
        n = self.net.vertex_count
        self.trees: list[HopBoundedPathTree | None] = [None] * n
        self.contains = np.zeros((n, self.net.edge_count + 1), dtype=bool)
        self._build(list(range(n)))

    def close(self) -> None:
        if self.pool is not None:
            self.pool.shutdown()

    def _build_one(self, root: int) -> HopBoundedPathTree:
        return truncated_bellman_ford(self.net, self.lengths, root, self.hop_bound)

    def _build(self, roots: list[int]) -> None:
        self.stats.tree_builds += len(roots)
        if self.pool is not None and len(roots) > 1:
            built = list(self.pool.map(self._build_one, roots))
        else:
            built = [self._build_one(r) for r in roots]
        for root, tree in zip(roots, built):
            self.trees[root] = tree
            row = self.contains[root]
            row[:] = False
            row[tree.parent_table.ravel() + 1] = True

    def delete_edges(self, dead: list[int]) -> list[int]:
        """Mark edges dead, recompute affected trees, return stale roots."""
        self.lengths[dead] = np.inf
        cols = [e + 1 for e in dead]
        stale = [int(r) for r in np.nonzero(self.contains[:, cols].any(axis=1))[0]]
        self._build(stale)
        return stale

    def path(self, origin: int, destination: int) -> Path | None:
        return self.trees[origin].path_to(destination)


def solve_greedy(instance: Instance, threads: int = 1) -> tuple[FlowSolution, GreedyStats]:
    """Run the heuristic; returns a feasible solution and run statistics."""
    net = instance.network
    k = instance.commodity_count
    state = GreedyState.initial(instance)
    stats = GreedyStats()
    iteration_cap = (net.edge_count + 1) * (k + 1)

    cache = _TreeCache(instance, stats, threads)
    version = [0] * k
    heap: list[tuple[int, int, int]] = []  # (-hops, commodity, version)
    flows: dict[tuple[int, tuple[int, ...]], list] = {}

    def refresh_paths(commodities) -> None:
        """Re-extract paths; equivalent to a rebuild_path_set restricted to
        commodities whose tree may have changed."""
        for ci in commodities:
            if state.residual_demand[ci] <= 0:
                state.path_set.pop(ci, None)
                continue
            com = instance.commodities[ci]
            path = cache.path(com.origin, com.destination)
            version[ci] += 1
            if path is None:
                state.path_set.pop(ci, None)
            else:
                state.path_set[ci] = path
                heapq.heappush(heap, (-len(path[1]), ci, version[ci]))

    refresh_paths(range(k))

    try:
        while heap:
            neg_hops, ci, v = heapq.heappop(heap)
            if version[ci] != v or ci not in state.path_set:
                continue
            verts, edges = state.path_set.pop(ci)
            stats.iterations += 1
            if stats.iterations > iteration_cap:
                raise InternalAssertionError(
                    f"iteration count exceeds bound {iteration_cap}"
                )

            edge_list = list(edges)
            u_min = float(state.residual_capacity[edge_list].min())
            demand = state.residual_demand[ci]
            amount = u_min if is_unbounded(demand) else min(u_min, demand)
            if not is_unbounded(demand):
                state.residual_demand[ci] = demand - amount
            key = (ci, edges)
            entry = flows.get(key)
            if entry is None:
                flows[key] = [verts, amount]
            else:
                entry[1] += amount

            deleted = []
            for e in edge_list:
                state.residual_capacity[e] -= amount
                if state.residual_capacity[e] == 0.0:
                    deleted.append(e)
            if deleted:
                stats.rebuilds += 1
                stats.edges_deleted += len(deleted)
                state.live[deleted] = False
                stale = set(cache.delete_edges(deleted))
                # Only commodities rooted at a recomputed tree can have
                # changed paths; everything else keeps its cached entry,
                # matching a from-scratch rebuild.
                refresh_paths(
                    ci2
                    for ci2, com2 in enumerate(instance.commodities)
                    if com2.origin in stale or ci2 == ci
                )
    finally:
        cache.close()

    solution = FlowSolution.from_path_flows(
        PathFlow(ci, verts, edges, amount)
        for (ci, edges), (verts, amount) in flows.items()
        if amount > 0
    )
    return solution, stats
