"""Problem and solution data model for hop-bounded maximum multicommodity flow.

An instance is a directed network with positive edge capacities, a list of
commodities (origin, destination, demand) and a hop bound ``L``: flow of each
commodity must be routed along paths of at most ``L`` edges. Demands may be
finite or unbounded (``UNBOUNDED``, an infinite float). All types are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ParameterError, StructuralError

#: Relative tolerance for capacity and demand feasibility checks. The
#: approximation solver accumulates flow in floating point, so exact
#: equality at saturated edges is unattainable.
REL_TOL = 1e-9

#: Sentinel demand for commodities whose flow is limited by capacities only.
UNBOUNDED = math.inf


def is_unbounded(demand: float) -> bool:
    return math.isinf(demand)


class Edge(NamedTuple):
    tail: int
    head: int
    capacity: float


@dataclass(frozen=True)
class Network:
    """Directed graph with positive real edge capacities.

    Parallel edges are permitted and kept distinct by edge index; self-loops
    are rejected. Vertices are ``0 .. vertex_count-1``.
    """

    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ParameterError(f"vertex_count must be >= 1, got {self.vertex_count}")
        object.__setattr__(self, "edges", tuple(Edge(*e) for e in self.edges))
        for idx, e in enumerate(self.edges):
            if not (0 <= e.tail < self.vertex_count and 0 <= e.head < self.vertex_count):
                raise ParameterError(f"edge {idx}: endpoint out of range: {e.tail}->{e.head}")
            if e.tail == e.head:
                raise ParameterError(f"edge {idx}: self-loop at vertex {e.tail}")
            if not (e.capacity > 0):
                raise ParameterError(f"edge {idx}: capacity must be positive, got {e.capacity}")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def tails(self) -> np.ndarray:
        return np.fromiter((e.tail for e in self.edges), dtype=np.int32, count=len(self.edges))

    @cached_property
    def heads(self) -> np.ndarray:
        return np.fromiter((e.head for e in self.edges), dtype=np.int32, count=len(self.edges))

    @cached_property
    def capacities(self) -> np.ndarray:
        return np.fromiter(
            (e.capacity for e in self.edges), dtype=np.float64, count=len(self.edges)
        )

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        """Per-vertex list of out-edge indices, in edge-index order."""
        buckets: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for idx, e in enumerate(self.edges):
            buckets[e.tail].append(idx)
        return tuple(tuple(b) for b in buckets)

    def find_edge(self, tail: int, head: int) -> int | None:
        """Lowest edge index from ``tail`` to ``head``, or None."""
        for idx in self.out_edges[tail]:
            if self.edges[idx].head == head:
                return idx
        return None


@dataclass(frozen=True)
class Commodity:
    """Origin/destination pair with a finite or unbounded demand."""

    origin: int
    destination: int
    demand: float = UNBOUNDED

    def __post_init__(self):
        if self.origin == self.destination:
            raise ParameterError(f"commodity origin equals destination ({self.origin})")
        if not (self.demand > 0):
            raise ParameterError(f"demand must be positive or unbounded, got {self.demand}")


@dataclass(frozen=True)
class Instance:
    """Network, commodity list and hop bound.

    Commodity (origin, destination) pairs must be unique; the parser merges
    duplicates by summing demands before construction. A commodity list may
    be empty only for internally built instances (e.g. after preprocessing
    removed every commodity).
    """

    network: Network
    commodities: tuple[Commodity, ...]
    hop_bound: int

    def __post_init__(self):
        object.__setattr__(self, "commodities", tuple(self.commodities))
        if self.hop_bound < 1:
            raise ParameterError(f"hop bound must be >= 1, got {self.hop_bound}")
        n = self.network.vertex_count
        seen: set[tuple[int, int]] = set()
        for idx, c in enumerate(self.commodities):
            if not (0 <= c.origin < n and 0 <= c.destination < n):
                raise ParameterError(f"commodity {idx}: endpoint out of range")
            pair = (c.origin, c.destination)
            if pair in seen:
                raise ParameterError(f"commodity {idx}: duplicate pair {pair}")
            seen.add(pair)

    @property
    def commodity_count(self) -> int:
        return len(self.commodities)


@dataclass(frozen=True)
class PathFlow:
    """A nonnegative flow amount routed along one explicit path.

    The vertex sequence and the edge-index sequence are both stored so that
    parallel edges are unambiguous. ``edges[i]`` joins ``path[i]`` to
    ``path[i+1]``.
    """

    commodity_index: int
    path: tuple[int, ...]
    edges: tuple[int, ...]
    amount: float

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def hops(self) -> int:
        return len(self.edges)


def resolve_edges(network: Network, path: Sequence[int]) -> tuple[int, ...]:
    """Map a vertex sequence to edge indices (lowest index wins for parallels).

    Raises StructuralError when consecutive vertices are not joined by an edge.
    """
    out = []
    for a, b in zip(path, path[1:]):
        idx = network.find_edge(a, b)
        if idx is None:
            raise StructuralError(f"no edge {a}->{b} in network")
        out.append(idx)
    return tuple(out)


@dataclass(frozen=True)
class FlowSolution:
    """A list of path-flows plus their total value."""

    path_flows: tuple[PathFlow, ...]
    total_value: float

    def __post_init__(self):
        object.__setattr__(self, "path_flows", tuple(self.path_flows))
        s = sum(pf.amount for pf in self.path_flows)
        scale = max(abs(s), abs(self.total_value), 1.0)
        if abs(s - self.total_value) > REL_TOL * scale:
            raise ParameterError(
                f"total_value {self.total_value} does not match path-flow sum {s}"
            )

    @classmethod
    def from_path_flows(cls, path_flows: Iterable[PathFlow]) -> "FlowSolution":
        pfs = tuple(path_flows)
        return cls(pfs, sum(pf.amount for pf in pfs))


EMPTY_SOLUTION = FlowSolution((), 0.0)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of feasibility validation.

    Capacity and demand violations are relative; the hop violation is the
    absolute hop-count excess. ``feasible`` holds exactly when all three are
    within tolerance (REL_TOL for capacities/demands, zero for hops).
    """

    feasible: bool
    max_capacity_violation: float
    max_demand_violation: float
    max_hops_violation: int
    total_flow: float

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "max_capacity_violation": self.max_capacity_violation,
            "max_demand_violation": self.max_demand_violation,
            "max_hops_violation": self.max_hops_violation,
            "total_flow": self.total_flow,
        }


def check_structure(instance: Instance, solution: FlowSolution) -> None:
    """Raise StructuralError unless every path-flow is well-formed.

    Checks commodity indices, endpoint agreement with the commodity, edge
    existence and edge/vertex consistency, and amount sign. Feasibility is
    not checked here.
    """
    net = instance.network
    for pf in solution.path_flows:
        if not (0 <= pf.commodity_index < instance.commodity_count):
            raise StructuralError(f"commodity index {pf.commodity_index} out of range")
        com = instance.commodities[pf.commodity_index]
        if len(pf.path) < 2:
            raise StructuralError(f"path {pf.path} has fewer than two vertices")
        if len(pf.edges) != len(pf.path) - 1:
            raise StructuralError("edge sequence length does not match vertex sequence")
        if pf.path[0] != com.origin or pf.path[-1] != com.destination:
            raise StructuralError(
                f"path endpoints {pf.path[0]}->{pf.path[-1]} do not match commodity "
                f"{com.origin}->{com.destination}"
            )
        for pos, eidx in enumerate(pf.edges):
            if not (0 <= eidx < net.edge_count):
                raise StructuralError(f"edge index {eidx} out of range")
            e = net.edges[eidx]
            if e.tail != pf.path[pos] or e.head != pf.path[pos + 1]:
                raise StructuralError(
                    f"edge {eidx} ({e.tail}->{e.head}) does not join "
                    f"{pf.path[pos]}->{pf.path[pos + 1]}"
                )
        if pf.amount < 0:
            raise StructuralError(f"negative path-flow amount {pf.amount}")


def aggregate_edge_flows(network: Network, solution: FlowSolution) -> np.ndarray:
    """Per-edge total flow, indexed by edge index.

    The explicit edge-index sequence recorded in each path-flow is used, so
    parallel edges aggregate onto the edge the solver actually chose.
    """
    flows = np.zeros(network.edge_count)
    for pf in solution.path_flows:
        for eidx in pf.edges:
            if not (0 <= eidx < network.edge_count):
                raise StructuralError(f"edge index {eidx} out of range")
            flows[eidx] += pf.amount
    return flows


def validate_solution(instance: Instance, solution: FlowSolution) -> ValidationReport:
    """Validate a solution against capacities, demands and the hop bound.

    Structural problems raise StructuralError; constraint violations are
    reported, not raised. Path-flow decomposition makes vertex conservation
    hold by construction, so it is not checked separately.
    """
    check_structure(instance, solution)
    net = instance.network

    edge_flows = aggregate_edge_flows(net, solution)
    cap_viol = 0.0
    for eidx in range(net.edge_count):
        cap = net.edges[eidx].capacity
        over = (edge_flows[eidx] - cap) / cap
        if over > cap_viol:
            cap_viol = over

    demand_totals = [0.0] * instance.commodity_count
    hops_viol = 0
    for pf in solution.path_flows:
        demand_totals[pf.commodity_index] += pf.amount
        hops_viol = max(hops_viol, pf.hops - instance.hop_bound)

    dem_viol = 0.0
    for ci, com in enumerate(instance.commodities):
        if is_unbounded(com.demand):
            continue
        over = (demand_totals[ci] - com.demand) / com.demand
        if over > dem_viol:
            dem_viol = over

    feasible = cap_viol <= REL_TOL and dem_viol <= REL_TOL and hops_viol <= 0
    return ValidationReport(
        feasible=feasible,
        max_capacity_violation=max(cap_viol, 0.0),
        max_demand_violation=max(dem_viol, 0.0),
        max_hops_violation=max(hops_viol, 0),
        total_flow=sum(pf.amount for pf in solution.path_flows),
    )
