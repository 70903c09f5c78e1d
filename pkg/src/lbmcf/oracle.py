"""Exact optimum on small instances via explicit path enumeration.

All simple hop-bounded paths are enumerated per commodity and the resulting
path-flow LP (one variable per path, joint capacity rows, demand rows for
finite demands) is solved with the exact rational simplex. Restricting to
simple paths loses no optimality: removing a cycle from a walk shortens it
and frees capacity. This is the ground truth the approximation solvers are
tested against; it does not scale past desk-size instances.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import simplex
from .errors import OracleSizeError
from .model import FlowSolution, Instance, Network, PathFlow, is_unbounded

DEFAULT_PATH_CAP = 100_000


def enumerate_paths(
    network: Network,
    source: int,
    destination: int,
    hop_limit: int,
    cap: int = DEFAULT_PATH_CAP,
) -> list[tuple[int, ...]]:
    """All simple paths with at most ``hop_limit`` edges, as edge sequences.

    Depth-first order following ascending edge indices, so the result is
    deterministic. Parallel edges yield distinct paths. Raises
    OracleSizeError when more than ``cap`` paths exist.
    """
    out: list[tuple[int, ...]] = []
    stack: list[int] = []
    visited = [False] * network.vertex_count
    visited[source] = True

    def dfs(v: int) -> None:
        if v == destination:
            out.append(tuple(stack))
            if len(out) > cap:
                raise OracleSizeError(
                    f"more than {cap} paths from {source} to {destination}; "
                    "instance too large for the exact oracle"
                )
            return
        if len(stack) == hop_limit:
            return
        for e in network.out_edges[v]:
            head = network.edges[e].head
            if visited[head]:
                continue
            visited[head] = True
            stack.append(e)
            dfs(head)
            stack.pop()
            visited[head] = False

    dfs(source)
    return out


@dataclass(frozen=True)
class PathCatalog:
    """Per-commodity lists of simple hop-bounded paths (edge sequences)."""

    paths: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def total_paths(self) -> int:
        return sum(len(p) for p in self.paths)


def build_catalog(instance: Instance, cap: int = DEFAULT_PATH_CAP) -> PathCatalog:
    per_commodity = []
    budget = cap
    for com in instance.commodities:
        paths = enumerate_paths(
            instance.network, com.origin, com.destination, instance.hop_bound, budget
        )
        budget -= len(paths)
        per_commodity.append(tuple(paths))
    return PathCatalog(tuple(per_commodity))


@dataclass(frozen=True)
class ExactResult:
    """Exact optimum plus an optimal path-flow decomposition."""

    optimum: object  # exact rational
    path_flows: tuple[tuple[int, tuple[int, ...], object], ...]  # (commodity, edges, amount)
    solution: FlowSolution  # float rendering of the decomposition
    lp_pivots: int

    @property
    def optimum_float(self) -> float:
        return float(self.optimum)

    @property
    def optimum_str(self) -> str:
        return str(self.optimum)


def _vertices_of(network: Network, edges: tuple[int, ...]) -> tuple[int, ...]:
    verts = [network.edges[edges[0]].tail]
    for e in edges:
        verts.append(network.edges[e].head)
    return tuple(verts)


def exact_optimum(instance: Instance, path_cap: int = DEFAULT_PATH_CAP) -> ExactResult:
    """Maximize total flow exactly over the hop-bounded path catalog.

    Capacities and demands are converted to exact rationals through their
    decimal representations, so the result carries no floating-point error.
    """
    catalog = build_catalog(instance, path_cap)
    net = instance.network

    variables: list[tuple[int, tuple[int, ...]]] = []
    for ci, paths in enumerate(catalog.paths):
        for path in paths:
            variables.append((ci, path))
    nvars = len(variables)

    edge_users: dict[int, list[int]] = {}
    for j, (_, path) in enumerate(variables):
        for e in path:
            edge_users.setdefault(e, []).append(j)

    rows = []
    for e in sorted(edge_users):
        dense = [simplex.ZERO] * nvars
        for j in edge_users[e]:
            dense[j] += simplex.ONE
        rows.append((dense, simplex.rationalize(net.edges[e].capacity)))
    for ci, com in enumerate(instance.commodities):
        if is_unbounded(com.demand) or not catalog.paths[ci]:
            continue
        dense = [simplex.ZERO] * nvars
        for j, (cj, _) in enumerate(variables):
            if cj == ci:
                dense[j] = simplex.ONE
        rows.append((dense, simplex.rationalize(com.demand)))

    result = simplex.maximize([simplex.ONE] * nvars, rows)

    path_flows = []
    float_flows = []
    for j, (ci, path) in enumerate(variables):
        amount = result.x[j]
        if amount != 0:
            path_flows.append((ci, path, amount))
            float_flows.append(
                PathFlow(ci, _vertices_of(net, path), path, float(amount))
            )
    solution = FlowSolution.from_path_flows(float_flows)
    return ExactResult(
        optimum=result.value,
        path_flows=tuple(path_flows),
        solution=solution,
        lp_pivots=result.pivots,
    )
