"""LP formulations of the flow problems, as files and solvable models.

Two models are exported for external solvers:

* ``edge``: the classical edge-flow maximum multicommodity flow LP (per
  commodity edge variables, demand rows, joint capacity rows, conservation
  at interior vertices). It ignores the hop bound entirely, so its optimum
  is an upper bound for the hop-bounded problem.
* ``texp``: a time-expanded layered formulation whose optimum equals the
  hop-bounded optimum. The graph is copied once per layer; movement edges
  realize original edges between consecutive layers and holdover edges let
  flow wait in place. A path of at most ``L`` original edges corresponds to
  a layer-1 origin copy reaching the layer-(L+1) destination copy, so the
  LP uses ``L+1`` layers.

Both can also be solved exactly in rational arithmetic (desk-size models
only), which the test oracle uses for cross-validation.
"""

from __future__ import annotations

import io as _io
from dataclasses import dataclass
from typing import NamedTuple

from . import simplex
from .errors import ParameterError
from .model import Instance, Network, is_unbounded


@dataclass(frozen=True)
class LpRow:
    name: str
    coeffs: tuple[tuple[int, float], ...]  # (variable index, coefficient)
    sense: str  # one of "<=", ">=", "="
    rhs: float


@dataclass(frozen=True)
class LpModel:
    """Named variables with implicit bounds ``x >= 0``, objective and rows."""

    name: str
    variables: tuple[str, ...]
    objective: tuple[tuple[int, float], ...]
    rows: tuple[LpRow, ...]

    def __post_init__(self):
        nvars = len(self.variables)
        for idx, _ in self.objective:
            if not 0 <= idx < nvars:
                raise ParameterError(f"objective references unknown variable {idx}")
        for row in self.rows:
            if row.sense not in ("<=", ">=", "="):
                raise ParameterError(f"row {row.name}: bad sense {row.sense!r}")
            for idx, _ in row.coeffs:
                if not 0 <= idx < nvars:
                    raise ParameterError(f"row {row.name}: unknown variable {idx}")

    @property
    def variable_count(self) -> int:
        return len(self.variables)

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def canonical(self) -> tuple:
        """Name-based structural form, independent of variable ordering."""
        obj = {self.variables[i]: c for i, c in self.objective if c != 0}
        rows = tuple(
            (
                row.name,
                frozenset(
                    (self.variables[i], c) for i, c in row.coeffs if c != 0
                ),
                row.sense,
                row.rhs,
            )
            for row in self.rows
        )
        return (frozenset(self.variables), frozenset(obj.items()), rows)


class ExpandedEdge(NamedTuple):
    tail: int  # expanded vertex id
    head: int  # expanded vertex id
    original_edge: int  # original edge index, or -1 for holdover


@dataclass(frozen=True)
class TimeExpandedNetwork:
    """Layered copy of a network over ``layer_count`` time steps.

    Expanded vertex ids are layer-major: vertex ``v`` in layer ``t``
    (1-based) has id ``(t-1)*n + v``. Between consecutive layers there is
    one movement edge per original edge (tagged with its index) and one
    holdover edge per vertex (tagged -1). Expanded edge ids follow the same
    layout: step ``t`` contributes ids ``(t-1)*(m+n) .. t*(m+n)-1``,
    movement copies first in original edge order, then holdovers in vertex
    order.
    """

    layer_count: int
    base_vertex_count: int
    base_edge_count: int
    edges: tuple[ExpandedEdge, ...]

    @property
    def vertex_count(self) -> int:
        return self.layer_count * self.base_vertex_count

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def vertex_id(self, v: int, layer: int) -> int:
        return (layer - 1) * self.base_vertex_count + v

    def movement_id(self, original_edge: int, step: int) -> int:
        """Expanded id of the copy of ``original_edge`` leaving layer ``step``."""
        return (step - 1) * (self.base_edge_count + self.base_vertex_count) + original_edge

    def holdover_id(self, v: int, step: int) -> int:
        return (
            (step - 1) * (self.base_edge_count + self.base_vertex_count)
            + self.base_edge_count
            + v
        )


def build_time_expanded(network: Network, layer_count: int) -> TimeExpandedNetwork:
    """Construct the layered graph with ``layer_count`` vertex layers."""
    if layer_count < 1:
        raise ParameterError(f"layer count must be >= 1, got {layer_count}")
    n, m = network.vertex_count, network.edge_count
    edges = []
    for step in range(1, layer_count):
        base = step * n
        for j, e in enumerate(network.edges):
            edges.append(ExpandedEdge((step - 1) * n + e.tail, base + e.head, j))
        for v in range(n):
            edges.append(ExpandedEdge((step - 1) * n + v, base + v, -1))
    return TimeExpandedNetwork(layer_count, n, m, tuple(edges))


def export_edge_flow_lp(instance: Instance) -> LpModel:
    """Edge-flow maximum MCF model; optimum upper-bounds the hop-bounded one.

    Variables ``x_<i>_<e>`` carry commodity ``i`` on edge ``e``. Demand rows
    are omitted for unbounded demands. The hop bound plays no role here.
    """
    net = instance.network
    k = instance.commodity_count
    m = net.edge_count

    def var(i: int, e: int) -> int:
        return i * m + e

    variables = tuple(
        f"x_{i}_{e}" for i in range(k) for e in range(m)
    )
    objective = []
    rows = []
    for i, com in enumerate(instance.commodities):
        out_coeffs = [(var(i, e), 1.0) for e in net.out_edges[com.origin]]
        objective.extend(out_coeffs)
        if not is_unbounded(com.demand):
            rows.append(LpRow(f"dem_{i}", tuple(out_coeffs), "<=", com.demand))
    for e in range(m):
        rows.append(
            LpRow(
                f"cap_{e}",
                tuple((var(i, e), 1.0) for i in range(k)),
                "<=",
                net.edges[e].capacity,
            )
        )
    in_edges: list[list[int]] = [[] for _ in range(net.vertex_count)]
    for e_idx, e in enumerate(net.edges):
        in_edges[e.head].append(e_idx)
    for i, com in enumerate(instance.commodities):
        for v in range(net.vertex_count):
            if v in (com.origin, com.destination):
                continue
            coeffs = [(var(i, e), 1.0) for e in in_edges[v]]
            coeffs += [(var(i, e), -1.0) for e in net.out_edges[v]]
            rows.append(LpRow(f"con_{i}_{v}", tuple(coeffs), "=", 0.0))
    return LpModel(
        name=f"edge_flow_k{k}_m{m}",
        variables=variables,
        objective=tuple(objective),
        rows=tuple(rows),
    )


def export_time_expanded_lp(instance: Instance) -> LpModel:
    """Layered model whose optimum equals the hop-bounded optimum.

    Uses ``hop_bound + 1`` layers so origin-to-destination routes traverse
    at most ``hop_bound`` movement edges. For ``hop_bound == 1`` the
    construction degenerates, so the model is emitted directly over the
    origin-destination edges.
    """
    hop_bound = instance.hop_bound
    net = instance.network
    k = instance.commodity_count

    if hop_bound == 1:
        return _direct_hop1_lp(instance)

    texp = build_time_expanded(net, hop_bound + 1)
    layers = texp.layer_count
    n, m = net.vertex_count, net.edge_count
    ecount = texp.edge_count

    def var(i: int, ee: int) -> int:
        return i * ecount + ee

    variables = tuple(f"x_{i}_{ee}" for i in range(k) for ee in range(ecount))
    objective = []
    rows = []

    def source_out(i: int, origin: int) -> list[tuple[int, float]]:
        coeffs = [(var(i, texp.movement_id(e, 1)), 1.0) for e in net.out_edges[origin]]
        coeffs.append((var(i, texp.holdover_id(origin, 1)), 1.0))
        return coeffs

    for i, com in enumerate(instance.commodities):
        coeffs = source_out(i, com.origin)
        objective.extend(coeffs)
        if not is_unbounded(com.demand):
            rows.append(LpRow(f"dem_{i}", tuple(coeffs), "<=", com.demand))

    for e in range(m):
        coeffs = [
            (var(i, texp.movement_id(e, step)), 1.0)
            for i in range(k)
            for step in range(1, layers)
        ]
        rows.append(LpRow(f"cap_{e}", tuple(coeffs), "<=", net.edges[e].capacity))

    in_movement: list[list[int]] = [[] for _ in range(n)]
    for e_idx, e in enumerate(net.edges):
        in_movement[e.head].append(e_idx)

    for i in range(k):
        for t in range(2, layers):
            for w in range(n):
                coeffs = [
                    (var(i, texp.movement_id(e, t - 1)), 1.0) for e in in_movement[w]
                ]
                coeffs.append((var(i, texp.holdover_id(w, t - 1)), 1.0))
                coeffs += [
                    (var(i, texp.movement_id(e, t)), -1.0) for e in net.out_edges[w]
                ]
                coeffs.append((var(i, texp.holdover_id(w, t)), -1.0))
                rows.append(LpRow(f"con_{i}_{t}_{w}", tuple(coeffs), "=", 0.0))

    for i, com in enumerate(instance.commodities):
        for w in range(n):
            if w == com.destination:
                continue
            coeffs = [
                (var(i, texp.movement_id(e, layers - 1)), 1.0) for e in in_movement[w]
            ]
            coeffs.append((var(i, texp.holdover_id(w, layers - 1)), 1.0))
            rows.append(LpRow(f"abs_{i}_{w}", tuple(coeffs), "=", 0.0))

    return LpModel(
        name=f"time_expanded_k{k}_m{m}_L{hop_bound}",
        variables=variables,
        objective=tuple(objective),
        rows=tuple(rows),
    )


def _direct_hop1_lp(instance: Instance) -> LpModel:
    net = instance.network
    variables = []
    var_index: dict[tuple[int, int], int] = {}
    for i, com in enumerate(instance.commodities):
        for e in net.out_edges[com.origin]:
            if net.edges[e].head == com.destination:
                var_index[(i, e)] = len(variables)
                variables.append(f"x_{i}_{e}")
    objective = [(idx, 1.0) for idx in range(len(variables))]
    rows = []
    for i, com in enumerate(instance.commodities):
        coeffs = [(var_index[(i, e)], 1.0) for (ci, e) in var_index if ci == i]
        if coeffs and not is_unbounded(com.demand):
            rows.append(LpRow(f"dem_{i}", tuple(coeffs), "<=", com.demand))
    for e in range(net.edge_count):
        coeffs = [
            (var_index[(i, ee)], 1.0) for (i, ee) in var_index if ee == e
        ]
        if coeffs:
            rows.append(LpRow(f"cap_{e}", tuple(coeffs), "<=", net.edges[e].capacity))
    return LpModel(
        name=f"time_expanded_k{instance.commodity_count}_m{net.edge_count}_L1",
        variables=tuple(variables),
        objective=tuple(objective),
        rows=tuple(rows),
    )


def expected_model_sizes(instance: Instance, model: str) -> tuple[int, int]:
    """Closed-form (variables, rows) counts for ``edge`` or ``texp``."""
    net = instance.network
    n, m, k = net.vertex_count, net.edge_count, instance.commodity_count
    finite = sum(1 for c in instance.commodities if not is_unbounded(c.demand))
    if model == "edge":
        return k * m, finite + m + k * (n - 2)
    if model == "texp":
        L = instance.hop_bound
        if L == 1:
            raise ParameterError("no closed form for the degenerate single-hop model")
        return k * L * (m + n), finite + m + k * n * (L - 1) + k * (n - 1)
    raise ParameterError(f"unknown model {model!r}")


def _format_terms(coeffs, variables) -> list[str]:
    parts = []
    for idx, c in coeffs:
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if mag == 1:
            parts.append(f"{sign} {variables[idx]}")
        else:
            mag_s = str(int(mag)) if float(mag).is_integer() else repr(float(mag))
            parts.append(f"{sign} {mag_s} {variables[idx]}")
    return parts


def _wrap(prefix: str, parts: list[str], width: int = 78) -> list[str]:
    lines = [prefix]
    for part in parts:
        if len(lines[-1]) + 1 + len(part) > width:
            lines.append(" " + part)
        else:
            lines[-1] += " " + part
    return lines


def lp_text(model: LpModel) -> str:
    """Render in LP file format (Maximize / Subject To / Bounds / End)."""
    used = {idx for idx, _ in model.objective}
    for row in model.rows:
        used.update(idx for idx, _ in row.coeffs)

    out = [f"\\ {model.name}", "Maximize"]
    out.extend(_wrap(" obj:", _format_terms(model.objective, model.variables)))
    out.append("Subject To")
    for row in model.rows:
        parts = _format_terms(row.coeffs, model.variables)
        if not parts:
            parts = ["0 " + (model.variables[0] if model.variables else "x")]
        rhs = str(int(row.rhs)) if float(row.rhs).is_integer() else repr(float(row.rhs))
        parts = parts + [row.sense, rhs]
        out.extend(_wrap(f" {row.name}:", parts))
    out.append("Bounds")
    # Lower bounds of zero are implicit; list only variables that appear in
    # no row or objective so every declared variable is present in the file.
    for idx, name in enumerate(model.variables):
        if idx not in used:
            out.append(f" {name} >= 0")
    out.append("End")
    return "\n".join(out) + "\n"


def write_lp_file(model: LpModel, destination) -> str:
    """Write the LP text to a path or file object; returns the text."""
    text = lp_text(model)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="ascii") as fh:
            fh.write(text)
    return text


def parse_lp_text(text: str) -> LpModel:
    """Parse our own LP output (used for round-trip checks).

    Variables are indexed by first appearance; compare models through
    ``LpModel.canonical()``.
    """
    lines = []
    name = "parsed"
    for raw in text.splitlines():
        if raw.startswith("\\"):
            name = raw[1:].strip() or name
            continue
        if raw.strip():
            lines.append(raw)

    section = None
    var_index: dict[str, int] = {}
    variables: list[str] = []
    objective: list[tuple[int, float]] = []
    rows: list[LpRow] = []
    pending: list[str] = []

    def vid(token: str) -> int:
        if token not in var_index:
            var_index[token] = len(variables)
            variables.append(token)
        return var_index[token]

    def parse_terms(tokens: list[str]) -> list[tuple[int, float]]:
        coeffs: list[tuple[int, float]] = []
        sign = 1.0
        coef: float | None = None
        for tok in tokens:
            if tok == "+":
                sign, coef = 1.0, None
            elif tok == "-":
                sign, coef = -1.0, None
            else:
                try:
                    coef = float(tok)
                    continue
                except ValueError:
                    pass
                coeffs.append((vid(tok), sign * (1.0 if coef is None else coef)))
                sign, coef = 1.0, None
        return coeffs

    def flush_pending():
        if not pending:
            return
        joined = " ".join(pending)
        pending.clear()
        label, _, rest = joined.partition(":")
        tokens = rest.split()
        if section == "objective":
            objective.extend(parse_terms(tokens))
            return
        for pos, tok in enumerate(tokens):
            if tok in ("<=", ">=", "="):
                coeffs = parse_terms(tokens[:pos])
                rhs = float(tokens[pos + 1])
                rows.append(LpRow(label.strip(), tuple(coeffs), tok, rhs))
                return
        raise ParameterError(f"constraint without sense: {joined!r}")

    for raw in lines:
        stripped = raw.strip()
        lowered = stripped.lower()
        if lowered in ("maximize", "subject to", "bounds", "end"):
            flush_pending()
            section = {
                "maximize": "objective",
                "subject to": "rows",
                "bounds": "bounds",
                "end": "end",
            }[lowered]
            continue
        if section == "bounds":
            parts = stripped.split()
            if len(parts) == 3 and parts[1] == ">=" and parts[2] == "0":
                vid(parts[0])
                continue
            raise ParameterError(f"unsupported bounds line {stripped!r}")
        if section in ("objective", "rows"):
            if ":" in stripped and pending:
                flush_pending()
            pending.append(stripped)
    flush_pending()

    # Drop synthetic zero-coefficient placeholders from empty rows.
    rows = [
        LpRow(r.name, tuple((i, c) for i, c in r.coeffs if c != 0), r.sense, r.rhs)
        for r in rows
    ]
    objective = [(i, c) for i, c in objective if c != 0]
    return LpModel(
        name=name,
        variables=tuple(variables),
        objective=tuple(objective),
        rows=tuple(rows),
    )


def solve_lp_model_exact(model: LpModel) -> simplex.SimplexSolution:
    """Solve a model in exact rational arithmetic.

    Only the shapes emitted by the exporters are supported: ``<=`` rows
    with nonnegative right-hand sides plus ``=``/``>=`` rows with zero
    right-hand sides (rewritten as inequality pairs so the slack basis
    stays feasible).
    """
    n = model.variable_count
    rows = []
    for row in model.rows:
        dense = [simplex.ZERO] * n
        for idx, c in row.coeffs:
            dense[idx] += simplex.rationalize(c)
        rhs = simplex.rationalize(row.rhs)
        if row.sense == "<=":
            if rhs < 0:
                raise ParameterError(f"row {row.name}: negative rhs unsupported")
            rows.append((dense, rhs))
        elif row.sense == "=":
            if rhs != 0:
                raise ParameterError(f"row {row.name}: nonzero equality rhs unsupported")
            rows.append((dense, rhs))
            rows.append(([-x for x in dense], rhs))
        elif row.sense == ">=":
            if rhs != 0:
                raise ParameterError(f"row {row.name}: nonzero >= rhs unsupported")
            rows.append(([-x for x in dense], rhs))
    objective = [simplex.ZERO] * n
    for idx, c in model.objective:
        objective[idx] += simplex.rationalize(c)
    return simplex.maximize(objective, rows)
