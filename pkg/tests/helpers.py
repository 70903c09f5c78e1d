"""Shared test utilities: random instances and independent references."""

from __future__ import annotations

import math

from lbmcf.greedy import GreedyState, rebuild_path_set
from lbmcf.model import (
    UNBOUNDED,
    Commodity,
    Edge,
    FlowSolution,
    Instance,
    Network,
    PathFlow,
    is_unbounded,
)

NICE_FRACTIONS = (0.25, 0.5, 0.75)


def _nice_capacity(rng) -> float:
    cap = float(rng.integers(1, 11))
    if rng.random() < 0.3:
        cap += float(rng.choice(NICE_FRACTIONS))
    return cap


def random_instance(
    rng,
    max_n: int = 8,
    max_m: int = 16,
    max_k: int = 3,
    max_hops: int = 4,
    unbounded_share: float = 0.34,
    integers_only: bool = False,
) -> Instance:
    """Seeded random instance within the oracle-friendly size box.

    Parallel edges occur naturally; capacities and demands are integers or
    short decimals so exact rational conversion is lossless.
    """
    n = int(rng.integers(2, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    edges = []
    for _ in range(m):
        while True:
            a, b = int(rng.integers(n)), int(rng.integers(n))
            if a != b:
                break
        cap = float(rng.integers(1, 11)) if integers_only else _nice_capacity(rng)
        edges.append(Edge(a, b, cap))

    k = int(rng.integers(1, max_k + 1))
    pairs: list[tuple[int, int]] = []
    seen = set()
    for _ in range(50 * k):
        if len(pairs) == k:
            break
        s, t = int(rng.integers(n)), int(rng.integers(n))
        if s != t and (s, t) not in seen:
            seen.add((s, t))
            pairs.append((s, t))
    commodities = []
    for s, t in pairs:
        if not integers_only and rng.random() < unbounded_share:
            demand = UNBOUNDED
        else:
            demand = float(rng.integers(1, 9))
            if not integers_only and rng.random() < 0.3:
                demand += float(rng.choice(NICE_FRACTIONS))
        commodities.append(Commodity(s, t, demand))
    hop_bound = int(rng.integers(1, max_hops + 1))
    return Instance(Network(n, tuple(edges)), tuple(commodities), hop_bound)


def brute_force_hop_distances(network: Network, lengths, source: int, hop_limit: int):
    """Min path length per vertex over simple paths with <= hop_limit edges.

    Independent reference for the shortest-path engine: plain recursion over
    the adjacency structure. With positive lengths the minimum over walks
    equals the minimum over simple paths, so simple-path enumeration is a
    valid oracle for the hop-bounded DP.
    """
    n = network.vertex_count
    best = [math.inf] * n
    best[source] = 0.0
    on_path = [False] * n
    on_path[source] = True

    def rec(v: int, used: int, acc: float) -> None:
        if used == hop_limit:
            return
        for e in network.out_edges[v]:
            w = network.edges[e].head
            if on_path[w]:
                continue
            length = acc + lengths[e]
            if length < best[w]:
                best[w] = length
            on_path[w] = True
            rec(w, used + 1, length)
            on_path[w] = False

    rec(source, 0, 0.0)
    return best


def naive_greedy(instance: Instance) -> FlowSolution:
    """Reference heuristic run with from-scratch path-set rebuilds."""
    state = GreedyState.initial(instance)
    flows: dict[tuple[int, tuple[int, ...]], list] = {}
    state.path_set = rebuild_path_set(state, instance)
    while state.path_set:
        ci = max(state.path_set, key=lambda c: (len(state.path_set[c][1]), -c))
        verts, edges = state.path_set.pop(ci)
        u_min = min(float(state.residual_capacity[e]) for e in edges)
        demand = state.residual_demand[ci]
        amount = u_min if is_unbounded(demand) else min(u_min, demand)
        if not is_unbounded(demand):
            state.residual_demand[ci] = demand - amount
        key = (ci, edges)
        if key in flows:
            flows[key][1] += amount
        else:
            flows[key] = [verts, amount]
        deleted = []
        for e in edges:
            state.residual_capacity[e] -= amount
            if state.residual_capacity[e] == 0.0:
                deleted.append(e)
        if deleted:
            state.live[deleted] = False
            state.path_set = rebuild_path_set(state, instance)
    return FlowSolution.from_path_flows(
        PathFlow(ci, verts, edges, amount)
        for (ci, edges), (verts, amount) in flows.items()
        if amount > 0
    )


def solution_key(solution: FlowSolution):
    """Order-insensitive representation for comparing solutions."""
    return sorted(
        (pf.commodity_index, pf.edges, pf.amount) for pf in solution.path_flows
    )
