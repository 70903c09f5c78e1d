"""Instance and solution file formats.

Instance files are line-oriented ASCII; ``#`` starts a comment that runs to
the end of the line and blank lines are ignored::

    lbmcf1 1
    n m k L
    <m lines>  tail head capacity
    <k lines>  origin destination demand     (-1 means unbounded)

Vertices are 0-indexed. Duplicate (origin, destination) commodity lines are
merged by summing their demands. Solution files carry one path-flow per
line, ``commodity_index amount v0 v1 ... vh``, followed by a trailer line
``total <value>``.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import InstanceParseError, ParameterError, SolutionFormatError
from .model import (
    REL_TOL,
    UNBOUNDED,
    Commodity,
    Edge,
    FlowSolution,
    Instance,
    Network,
    PathFlow,
    is_unbounded,
    resolve_edges,
)

MAGIC = "lbmcf1"
FORMAT_VERSION = 1


def _logical_lines(text: str) -> list[tuple[int, str]]:
    """Non-empty content lines as (1-based line number, stripped text)."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            out.append((lineno, content))
    return out


def _parse_int(token: str, what: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceParseError(f"{what}: expected integer, got {token!r}", lineno) from None


def _parse_float(token: str, what: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise InstanceParseError(f"{what}: expected number, got {token!r}", lineno) from None
    if not math.isfinite(value):
        raise InstanceParseError(f"{what}: must be finite, got {token!r}", lineno)
    return value


def parse_instance(text: str) -> Instance:
    """Parse an instance document; errors name the offending line."""
    lines = _logical_lines(text)
    if not lines:
        raise InstanceParseError("empty document")
    pos = 0

    lineno, header = lines[pos]
    pos += 1
    parts = header.split()
    if len(parts) != 2 or parts[0] != MAGIC or _parse_int(parts[1], "version", lineno) != FORMAT_VERSION:
        raise InstanceParseError(
            f"expected header {MAGIC!r} {FORMAT_VERSION}, got {header!r}", lineno
        )

    if pos >= len(lines):
        raise InstanceParseError("missing size line 'n m k L'", lineno)
    lineno, sizes = lines[pos]
    pos += 1
    parts = sizes.split()
    if len(parts) != 4:
        raise InstanceParseError(f"size line must be 'n m k L', got {sizes!r}", lineno)
    n, m, k, hop_bound = (_parse_int(p, w, lineno) for p, w in zip(parts, ("n", "m", "k", "L")))
    if n < 1:
        raise InstanceParseError(f"n must be >= 1, got {n}", lineno)
    if m < 0:
        raise InstanceParseError(f"m must be >= 0, got {m}", lineno)
    if k < 1:
        raise InstanceParseError(f"k must be >= 1, got {k}", lineno)
    if hop_bound < 1:
        raise InstanceParseError(f"L must be >= 1, got {hop_bound}", lineno)

    edges = []
    for _ in range(m):
        if pos >= len(lines):
            raise InstanceParseError(f"expected {m} edge lines, found {len(edges)}")
        lineno, line = lines[pos]
        pos += 1
        parts = line.split()
        if len(parts) != 3:
            raise InstanceParseError(f"edge line must be 'tail head capacity', got {line!r}", lineno)
        tail = _parse_int(parts[0], "tail", lineno)
        head = _parse_int(parts[1], "head", lineno)
        capacity = _parse_float(parts[2], "capacity", lineno)
        if not (0 <= tail < n):
            raise InstanceParseError(f"tail {tail} out of range [0, {n})", lineno)
        if not (0 <= head < n):
            raise InstanceParseError(f"head {head} out of range [0, {n})", lineno)
        if tail == head:
            raise InstanceParseError(f"self-loop at vertex {tail}", lineno)
        if capacity <= 0:
            raise InstanceParseError(f"capacity must be positive, got {capacity}", lineno)
        edges.append(Edge(tail, head, capacity))

    merged: dict[tuple[int, int], float] = {}
    order: list[tuple[int, int]] = []
    for _ in range(k):
        if pos >= len(lines):
            raise InstanceParseError(f"expected {k} commodity lines, found {len(order)}")
        lineno, line = lines[pos]
        pos += 1
        parts = line.split()
        if len(parts) != 3:
            raise InstanceParseError(
                f"commodity line must be 'origin destination demand', got {line!r}", lineno
            )
        origin = _parse_int(parts[0], "origin", lineno)
        destination = _parse_int(parts[1], "destination", lineno)
        if not (0 <= origin < n):
            raise InstanceParseError(f"origin {origin} out of range [0, {n})", lineno)
        if not (0 <= destination < n):
            raise InstanceParseError(f"destination {destination} out of range [0, {n})", lineno)
        if origin == destination:
            raise InstanceParseError(f"origin equals destination ({origin})", lineno)
        if parts[2] == "-1":
            demand = UNBOUNDED
        else:
            demand = _parse_float(parts[2], "demand", lineno)
            if demand <= 0:
                raise InstanceParseError(
                    f"demand must be positive or -1 (unbounded), got {parts[2]}", lineno
                )
        pair = (origin, destination)
        if pair in merged:
            merged[pair] += demand
        else:
            merged[pair] = demand
            order.append(pair)

    if pos < len(lines):
        lineno, line = lines[pos]
        raise InstanceParseError(f"unexpected trailing content {line!r}", lineno)

    commodities = tuple(Commodity(s, t, merged[(s, t)]) for s, t in order)
    try:
        return Instance(Network(n, tuple(edges)), commodities, hop_bound)
    except ParameterError as exc:
        raise InstanceParseError(str(exc)) from exc


def _format_number(x: float) -> str:
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def serialize_instance(instance: Instance, header_comments: Iterable[str] = ()) -> str:
    """Render an instance in the file format (round-trips through parse)."""
    net = instance.network
    out = [f"# {c}" for c in header_comments]
    out.append(f"{MAGIC} {FORMAT_VERSION}")
    out.append(
        f"{net.vertex_count} {net.edge_count} {instance.commodity_count} {instance.hop_bound}"
    )
    for e in net.edges:
        out.append(f"{e.tail} {e.head} {_format_number(e.capacity)}")
    for c in instance.commodities:
        demand = "-1" if is_unbounded(c.demand) else _format_number(c.demand)
        out.append(f"{c.origin} {c.destination} {demand}")
    return "\n".join(out) + "\n"


def read_instance(path) -> Instance:
    with open(path, "r", encoding="ascii") as fh:
        return parse_instance(fh.read())


def write_instance(instance: Instance, path, header_comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(serialize_instance(instance, header_comments))


def serialize_solution(solution: FlowSolution) -> str:
    out = []
    for pf in solution.path_flows:
        verts = " ".join(str(v) for v in pf.path)
        out.append(f"{pf.commodity_index} {repr(pf.amount)} {verts}")
    out.append(f"total {repr(solution.total_value)}")
    return "\n".join(out) + "\n"


def parse_solution(text: str, instance: Instance) -> FlowSolution:
    """Parse a solution file against its instance.

    Edge indices are re-derived from the vertex sequences (lowest index wins
    for parallel edges, matching the serialization, which stores vertices
    only). The trailer total is cross-checked against the line sum.
    """
    path_flows: list[PathFlow] = []
    total: float | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        parts = content.split()
        if parts[0] == "total":
            if len(parts) != 2:
                raise SolutionFormatError(f"line {lineno}: malformed trailer {content!r}")
            total = float(parts[1])
            continue
        if total is not None:
            raise SolutionFormatError(f"line {lineno}: content after trailer")
        if len(parts) < 4:
            raise SolutionFormatError(
                f"line {lineno}: expected 'commodity amount v0 v1 ...', got {content!r}"
            )
        try:
            ci = int(parts[0])
            amount = float(parts[1])
            verts = tuple(int(p) for p in parts[2:])
        except ValueError as exc:
            raise SolutionFormatError(f"line {lineno}: {exc}") from None
        edges = resolve_edges(instance.network, verts)
        path_flows.append(PathFlow(ci, verts, edges, amount))
    if total is None:
        raise SolutionFormatError("missing 'total' trailer line")
    s = sum(pf.amount for pf in path_flows)
    if abs(s - total) > REL_TOL * max(abs(s), abs(total), 1.0):
        raise SolutionFormatError(f"trailer total {total} does not match line sum {s}")
    return FlowSolution(tuple(path_flows), total)


def read_solution(path, instance: Instance) -> FlowSolution:
    with open(path, "r", encoding="ascii") as fh:
        return parse_solution(fh.read(), instance)


def write_solution(solution: FlowSolution, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(serialize_solution(solution))
