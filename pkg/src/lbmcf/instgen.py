"""Benchmark instance generator: stacked grids with random inter-grid arcs.

``b`` planar ``a x a`` grids are stacked; every grid adjacency carries both
directed arcs with capacity 3600, and each consecutive grid pair is joined
by ``a*a`` forward arcs following a seeded random permutation, with integer
capacities uniform in [1, 100]. Demands (mode I) are scaled so that a
witness routing along hop-shortest paths has maximum arc congestion exactly
``lambda``: every pair gets unit weight, the unit flows are routed, and all
demands are set to ``lambda / c`` where ``c`` is the worst congestion of the
unit routing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .io import serialize_instance
from .model import Commodity, Edge, Instance, Network
from .paths import HopBoundedPathTree, hop_shortest_path_tree

GRID_CAPACITY = 3600.0
LINK_CAPACITY_RANGE = (1, 100)
RNG_NAME = "numpy-pcg64"


@dataclass(frozen=True)
class GridGenConfig:
    a: int
    b: int
    k: int
    congestion: float
    hop_bound: int
    seed: int

    def __post_init__(self):
        if self.a < 2:
            raise ParameterError(f"grid side must be >= 2, got {self.a}")
        if self.b < 2:
            raise ParameterError(f"grid count must be >= 2, got {self.b}")
        if self.k < 1:
            raise ParameterError(f"commodity count must be >= 1, got {self.k}")
        if not (0 < self.congestion <= 1):
            raise ParameterError(
                f"target congestion must be in (0, 1], got {self.congestion}"
            )
        if self.hop_bound < 1:
            raise ParameterError(f"hop bound must be >= 1, got {self.hop_bound}")

    def header_comments(self) -> list[str]:
        return [
            f"generator: grid a={self.a} b={self.b} k={self.k} "
            f"lambda={self.congestion} L={self.hop_bound}",
            f"rng: {RNG_NAME} seed={self.seed}",
        ]


def generate_grid_network(config: GridGenConfig) -> Network:
    """Stacked-grid network; a pure function of the config (seed included)."""
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    a, b = config.a, config.b
    per_grid = a * a
    edges: list[Edge] = []
    for g in range(b):
        base = g * per_grid
        for r in range(a):
            for c in range(a):
                v = base + r * a + c
                if c + 1 < a:
                    edges.append(Edge(v, v + 1, GRID_CAPACITY))
                    edges.append(Edge(v + 1, v, GRID_CAPACITY))
                if r + 1 < a:
                    edges.append(Edge(v, v + a, GRID_CAPACITY))
                    edges.append(Edge(v + a, v, GRID_CAPACITY))
    lo, hi = LINK_CAPACITY_RANGE
    for g in range(b - 1):
        perm = rng.permutation(per_grid)
        caps = rng.integers(lo, hi + 1, size=per_grid)
        for j in range(per_grid):
            edges.append(
                Edge(g * per_grid + j, (g + 1) * per_grid + int(perm[j]), float(caps[j]))
            )
    return Network(per_grid * b, tuple(edges))


def assign_demands_mode1(
    network: Network,
    k: int,
    congestion: float,
    hop_bound: int,
    seed,
    max_attempts_per_pair: int = 200,
) -> list[Commodity]:
    """Draw k distinct reachable pairs and scale demands to congestion.

    Each pair is routed with unit weight along one hop-shortest path within
    the bound; with ``c`` the maximum unit-flow congestion, every demand is
    ``congestion / c``, so scaling the witness routing by the demand gives a
    feasible flow whose worst arc congestion is exactly ``congestion``.
    Unreachable draws are retried a bounded number of times.
    """
    if k < 1:
        raise ParameterError(f"commodity count must be >= 1, got {k}")
    if not (0 < congestion <= 1):
        raise ParameterError(f"target congestion must be in (0, 1], got {congestion}")
    n = network.vertex_count
    if k > n * (n - 1):
        raise ParameterError(f"cannot draw {k} distinct pairs from {n} vertices")
    rng = np.random.default_rng(seed)
    trees: dict[int, HopBoundedPathTree] = {}
    chosen: list[tuple[int, int]] = []
    used: set[tuple[int, int]] = set()
    witness_paths: list[tuple[int, ...]] = []
    attempts_left = max_attempts_per_pair * k
    while len(chosen) < k:
        if attempts_left <= 0:
            raise ParameterError(
                f"could not draw {k} reachable pairs within the retry budget "
                f"(got {len(chosen)})"
            )
        attempts_left -= 1
        s = int(rng.integers(n))
        t = int(rng.integers(n))
        if s == t or (s, t) in used:
            continue
        tree = trees.get(s)
        if tree is None:
            tree = hop_shortest_path_tree(network, s, hop_bound)
            trees[s] = tree
        path = tree.path_to(t)
        if path is None:
            continue
        used.add((s, t))
        chosen.append((s, t))
        witness_paths.append(path[1])

    load = np.zeros(network.edge_count)
    for edges in witness_paths:
        for e in edges:
            load[e] += 1.0
    c = float(np.max(load / network.capacities))
    demand = congestion / c
    return [Commodity(s, t, demand) for s, t in chosen]


def generate_instance(config: GridGenConfig) -> Instance:
    """Network plus mode-I demands, derived from independent seed streams."""
    dem_seed = np.random.SeedSequence(config.seed).spawn(2)[1]
    network = generate_grid_network(config)
    commodities = assign_demands_mode1(
        network, config.k, config.congestion, config.hop_bound, dem_seed
    )
    return Instance(network, tuple(commodities), config.hop_bound)


def generate_instance_text(config: GridGenConfig) -> str:
    return serialize_instance(generate_instance(config), config.header_comments())
