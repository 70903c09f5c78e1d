"""A (1-omega)-approximation scheme for hop-bounded maximum multicommodity flow.

The solver maintains per-edge dual lengths, repeatedly augments along the
currently shortest hop-bounded origin-destination path, and multiplies the
lengths of used edges so that congested edges become expensive. Augmented
amounts are pre-scaled by ``1/sigma`` so the accumulated flow is feasible on
termination. Phases sweep the origins against a geometrically growing
length threshold; a primal/dual gap test allows early termination as soon
as the required ratio is certified.

Finite demands are handled by a reduction: each commodity gets a private
source vertex attached to its origin by an edge whose capacity equals the
demand, after which all demands are unbounded and the hop bound grows by
one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InternalAssertionError, ParameterError
from .model import (
    UNBOUNDED,
    Commodity,
    Edge,
    FlowSolution,
    Instance,
    Network,
    PathFlow,
    is_unbounded,
    validate_solution,
)
from .paths import prune_unreachable_pairs, truncated_bellman_ford

#: Hard slack on the augmentation-count invariant (ceiling effects only).
_AUG_BOUND_SLACK = 1


@dataclass(frozen=True)
class FptasParams:
    """Derived approximation parameters.

    ``epsilon`` solves (1-eps)^2/(1+eps) = 1-omega; ``delta`` is the initial
    edge length; ``sigma = log_{1+eps}((1+eps)/delta)`` scales augmented
    amounts; ``r_max = floor(sigma)`` is the number of phases. All values
    depend on the hop bound of the instance being solved.
    """

    omega: float
    epsilon: float
    delta: float
    sigma: float
    r_max: int
    hop_bound: int


@dataclass
class FptasStats:
    augmentations: int = 0
    phases_completed: int = 0
    bellman_ford_calls: int = 0
    final_dual_bound: float = 0.0
    terminated_early: bool = False
    augmentation_bound: float = 0.0  # edge count of the solved instance times sigma, plus slack
    max_final_length: float = 0.0
    epsilon: float = 0.0

    def to_dict(self) -> dict:
        return {
            "augmentations": self.augmentations,
            "phases_completed": self.phases_completed,
            "bellman_ford_calls": self.bellman_ford_calls,
            "final_dual_bound": self.final_dual_bound,
            "terminated_early": self.terminated_early,
            "augmentation_bound": self.augmentation_bound,
            "max_final_length": self.max_final_length,
            "epsilon": self.epsilon,
        }


def params_from_epsilon(epsilon: float, hop_bound: int, omega: float | None = None) -> FptasParams:
    """Build parameters from an explicit epsilon (mainly for tests)."""
    if not (0 < epsilon < 1):
        raise ParameterError(f"epsilon must be in (0, 1), got {epsilon}")
    if hop_bound < 1:
        raise ParameterError(f"hop bound must be >= 1, got {hop_bound}")
    delta = (1 + epsilon) * ((1 + epsilon) * hop_bound) ** (-1.0 / epsilon)
    if delta <= 0:
        raise ParameterError(
            f"initial length underflows for epsilon={epsilon}, hop bound {hop_bound}"
        )
    sigma = (math.log(1 + epsilon) - math.log(delta)) / math.log(1 + epsilon)
    if omega is None:
        omega = 1 - (1 - epsilon) ** 2 / (1 + epsilon)
    return FptasParams(
        omega=omega,
        epsilon=epsilon,
        delta=delta,
        sigma=sigma,
        r_max=math.floor(sigma),
        hop_bound=hop_bound,
    )


def derive_params(omega: float, hop_bound: int) -> FptasParams:
    """Parameters guaranteeing a (1-omega)-approximate solution.

    ``epsilon`` is the smaller root of eps^2 - (3-omega)*eps + omega = 0, the
    choice making the guarantee (1-eps)^2/(1+eps) equal 1-omega.
    """
    if not (0 < omega < 1):
        raise ParameterError(f"omega must be in (0, 1), got {omega}")
    epsilon = (3 - omega - math.sqrt((3 - omega) ** 2 - 4 * omega)) / 2
    params = params_from_epsilon(epsilon, hop_bound, omega=omega)
    guarantee = (1 - epsilon) ** 2 / (1 + epsilon)
    if guarantee < (1 - omega) - 1e-12:
        raise InternalAssertionError(
            f"parameter derivation inconsistent: guarantee {guarantee} < 1-omega {1 - omega}"
        )
    return params


@dataclass(frozen=True)
class ReductionMap:
    """Finite-demand reduction bookkeeping.

    The expanded instance has one extra vertex and edge per commodity: the
    added edge runs from the private source ``source_vertices[i]`` into the
    commodity's origin with capacity equal to its demand (or the total edge
    capacity when the demand is unbounded, which cannot bind). All expanded
    demands are unbounded and the hop bound grows by one. Solutions
    correspond one-to-one with equal objective values.
    """

    original_instance: Instance
    expanded: Instance
    source_vertices: tuple[int, ...]
    source_edges: tuple[int, ...]


def reduce_finite_demands(instance: Instance) -> ReductionMap:
    net = instance.network
    n, m, k = net.vertex_count, net.edge_count, instance.commodity_count
    unbounding = float(sum(e.capacity for e in net.edges)) or 1.0

    edges = list(net.edges)
    commodities = []
    for i, com in enumerate(instance.commodities):
        cap = unbounding if is_unbounded(com.demand) else com.demand
        edges.append(Edge(n + i, com.origin, cap))
        commodities.append(Commodity(n + i, com.destination, UNBOUNDED))
    expanded = Instance(
        Network(n + k, tuple(edges)), tuple(commodities), instance.hop_bound + 1
    )
    return ReductionMap(
        original_instance=instance,
        expanded=expanded,
        source_vertices=tuple(range(n, n + k)),
        source_edges=tuple(range(m, m + k)),
    )


@dataclass(frozen=True)
class _OriginGroup:
    """Commodities served by one shortest-path computation.

    One tree from ``source`` with ``hop_limit`` rounds covers every member;
    a member's candidate path length adds the length of its prefix edge
    (-1 when there is none). Prefix edges let the expanded instance reuse a
    single tree from the original origin for all private sources attached
    to it.
    """

    source: int
    hop_limit: int
    members: tuple[tuple[int, int, int], ...]  # (commodity index, destination, prefix edge)


def _plain_groups(instance: Instance) -> list[_OriginGroup]:
    by_origin: dict[int, list[tuple[int, int, int]]] = {}
    order: list[int] = []
    for ci, com in enumerate(instance.commodities):
        if com.origin not in by_origin:
            by_origin[com.origin] = []
            order.append(com.origin)
        by_origin[com.origin].append((ci, com.destination, -1))
    return [
        _OriginGroup(v, instance.hop_bound, tuple(by_origin[v])) for v in order
    ]


def _reduction_groups(rmap: ReductionMap) -> list[_OriginGroup]:
    by_origin: dict[int, list[tuple[int, int, int]]] = {}
    order: list[int] = []
    for ci, com in enumerate(rmap.original_instance.commodities):
        if com.origin not in by_origin:
            by_origin[com.origin] = []
            order.append(com.origin)
        by_origin[com.origin].append((ci, com.destination, rmap.source_edges[ci]))
    hop_limit = rmap.original_instance.hop_bound
    return [_OriginGroup(v, hop_limit, tuple(by_origin[v])) for v in order]


def _group_candidates(group: _OriginGroup, tree, lengths: np.ndarray):
    """(candidate length, destination, member) for reachable members."""
    out = []
    for member in group.members:
        _, dest, prefix = member
        d = tree.dist[dest]
        if not np.isfinite(d):
            continue
        cand = float(d) if prefix < 0 else float(d + lengths[prefix])
        out.append((cand, dest, member))
    return out


def solve_unbounded(
    instance: Instance,
    params: FptasParams,
    _groups: list[_OriginGroup] | None = None,
) -> tuple[FlowSolution, np.ndarray, FptasStats]:
    """Run the augmentation scheme on an instance with unbounded demands.

    Returns the feasible solution, the final length function and run
    statistics. The instance should already be preprocessed so that every
    commodity has a hop-bounded route (others are simply never augmented).
    """
    for com in instance.commodities:
        if not is_unbounded(com.demand):
            raise ParameterError("solve_unbounded requires all demands unbounded")
    if params.hop_bound != instance.hop_bound:
        raise ParameterError(
            f"params derived for hop bound {params.hop_bound}, instance has {instance.hop_bound}"
        )

    net = instance.network
    eps, delta, sigma = params.epsilon, params.delta, params.sigma
    groups = _plain_groups(instance) if _groups is None else _groups
    lengths = np.full(net.edge_count, delta)
    capacities = net.capacities
    stats = FptasStats(
        augmentation_bound=net.edge_count * sigma + _AUG_BOUND_SLACK,
        epsilon=eps,
    )
    flows: dict[tuple[int, tuple[int, ...]], list] = {}
    total = 0.0
    best_ub = math.inf
    aug_cap = stats.augmentation_bound
    gap_target = 1.0 / (1.0 - params.omega)
    all_prefixed = all(p >= 0 for g in groups for (_, _, p) in g.members)

    def run_tree(group: _OriginGroup):
        stats.bellman_ford_calls += 1
        return truncated_bellman_ford(net, lengths, group.source, group.hop_limit)

    for r in range(1, params.r_max + 1):
        threshold = min(1.0, delta * (1 + eps) ** r)
        # Smallest candidate seen at each group's exit; lengths only grow,
        # so this is a sound lower bound on the current shortest path
        # length and the end-of-phase dual check costs no extra sweeps.
        alpha_floor = math.inf
        for group in groups:
            if not any(m[2] < 0 or lengths[m[2]] < 1.0 for m in group.members):
                # Every member excluded: all its candidates are >= 1.
                alpha_floor = min(alpha_floor, 1.0)
                continue
            tree = run_tree(group)
            while True:
                full = _group_candidates(group, tree, lengths)
                if not full:
                    break  # nothing reachable, no dual constraint here
                active = [c for c in full if c[2][2] < 0 or lengths[c[2][2]] < 1.0]
                if not active:
                    alpha_floor = min(alpha_floor, min(c[0] for c in full))
                    break
                active.sort(key=lambda c: (c[0], c[1]))
                best_len, _, (ci, dest, prefix) = active[0]
                if best_len >= threshold:
                    alpha_floor = min(alpha_floor, min(c[0] for c in full))
                    break
                verts, edges = tree.path_to(dest)
                if prefix >= 0:
                    verts = (net.edges[prefix].tail,) + verts
                    edges = (prefix,) + edges
                u = float(min(capacities[e] for e in edges))
                for e in edges:
                    lengths[e] *= 1.0 + eps * u / capacities[e]
                amount = u / sigma
                key = (ci, edges)
                entry = flows.get(key)
                if entry is None:
                    flows[key] = [verts, amount]
                else:
                    entry[1] += amount
                total += amount
                stats.augmentations += 1
                if stats.augmentations > aug_cap:
                    raise InternalAssertionError(
                        f"augmentation count {stats.augmentations} exceeds bound {aug_cap}"
                    )
                tree = run_tree(group)
        stats.phases_completed = r
        if total > 0 and math.isfinite(alpha_floor) and alpha_floor > 0:
            dual = float(np.dot(lengths, capacities)) / alpha_floor
            best_ub = min(best_ub, dual)
            if best_ub / total <= gap_target:
                stats.terminated_early = True
                break
        if all_prefixed and groups and all(
            lengths[p] >= 1.0 for g in groups for (_, _, p) in g.members
        ):
            # Every candidate path now has length >= 1: no further
            # augmentation is possible in any remaining phase.
            break

    solution = FlowSolution.from_path_flows(
        PathFlow(ci, tuple(verts), edges, amount)
        for (ci, edges), (verts, amount) in flows.items()
    )

    if groups:
        consistent = _dual_bound_from_groups(net, groups, lengths, stats)
        if consistent is not None:
            best_ub = min(best_ub, consistent)
    stats.final_dual_bound = best_ub if math.isfinite(best_ub) else 0.0
    stats.max_final_length = float(lengths.max()) if net.edge_count else 0.0

    report = validate_solution(instance, solution)
    if not report.feasible:
        raise InternalAssertionError(
            f"approximation produced an infeasible solution: {report.to_dict()}"
        )
    return solution, lengths, stats


def _dual_bound_from_groups(
    net: Network,
    groups: list[_OriginGroup],
    lengths: np.ndarray,
    stats: FptasStats | None = None,
) -> float | None:
    """Consistent dual bound D(lengths)/alpha over the given groups.

    Returns None when no origin-destination pair is reachable (the bound is
    vacuous: the optimum is zero).
    """
    alpha = math.inf
    for group in groups:
        if stats is not None:
            stats.bellman_ford_calls += 1
        tree = truncated_bellman_ford(net, lengths, group.source, group.hop_limit)
        for cand, _, _ in _group_candidates(group, tree, lengths):
            alpha = min(alpha, cand)
    if not math.isfinite(alpha):
        return None
    return float(np.dot(lengths, net.capacities)) / alpha


def dual_upper_bound(
    network: Network,
    commodities,
    hop_bound: int,
    lengths: np.ndarray,
) -> float:
    """Certified upper bound D(lengths)/alpha on the unbounded-demand optimum.

    ``alpha`` is the length of the shortest hop-bounded origin-destination
    path over all commodities; dividing the lengths by it yields a feasible
    dual solution, so the ratio dominates the optimum. Demands are ignored
    (the bound also dominates any demand-capped optimum).
    """
    lengths = np.asarray(lengths, dtype=np.float64)
    if len(lengths) != network.edge_count:
        raise ParameterError("length vector size does not match edge count")
    if not np.all(lengths > 0):
        raise ParameterError("lengths must be strictly positive")
    probe = Instance(network, tuple(Commodity(c.origin, c.destination) for c in commodities), hop_bound)
    bound = _dual_bound_from_groups(network, _plain_groups(probe), lengths)
    if bound is None:
        raise ParameterError(
            "no origin-destination pair is reachable within the hop bound"
        )
    return bound


def solve(
    instance: Instance, omega: float
) -> tuple[FlowSolution, FptasStats, float, float | None]:
    """Full pipeline: prune, reduce demands, approximate, map back.

    Returns ``(solution, stats, upper_bound, omega_prime)`` where
    ``omega_prime = (UB - flow) / UB`` is the a-posteriori gap (None when
    the instance supports no flow at all). The solution is validated
    against the original instance before being returned.
    """
    if not (0 < omega < 1):
        raise ParameterError(f"omega must be in (0, 1), got {omega}")
    pruned, removed = prune_unreachable_pairs(instance)
    if pruned.commodity_count == 0:
        return FlowSolution((), 0.0), FptasStats(), 0.0, None

    kept_indices = [i for i in range(instance.commodity_count) if i not in set(removed)]
    rmap = reduce_finite_demands(pruned)
    params = derive_params(omega, rmap.expanded.hop_bound)
    expanded_solution, _, stats = solve_unbounded(
        rmap.expanded, params, _groups=_reduction_groups(rmap)
    )

    mapped = []
    for pf in expanded_solution.path_flows:
        mapped.append(
            PathFlow(
                kept_indices[pf.commodity_index],
                pf.path[1:],
                pf.edges[1:],
                pf.amount,
            )
        )
    solution = FlowSolution.from_path_flows(mapped)

    report = validate_solution(instance, solution)
    if not report.feasible:
        raise InternalAssertionError(
            f"mapped solution infeasible on the original instance: {report.to_dict()}"
        )

    ub = stats.final_dual_bound
    omega_prime = (ub - solution.total_value) / ub if ub > 0 else None
    return solution, stats, ub, omega_prime
