"""Command-line front end.

Subcommands: ``generate``, ``solve``, ``exact``, ``export-lp``,
``validate``. Reports are machine-readable (JSON by default, CSV with a
fixed column order). Exit codes: 0 ok, 1 infeasible, 2 usage or bad input,
3 internal assertion, 4 oracle cap exceeded, 5 structural mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
import time
from dataclasses import dataclass

from . import fptas, greedy, instgen, io as fileio, lpmodel, oracle
from .errors import (
    InstanceParseError,
    InternalAssertionError,
    OracleSizeError,
    ParameterError,
    SolutionFormatError,
    StructuralError,
)
from .model import FlowSolution, Instance, validate_solution

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3
EXIT_ORACLE_CAP = 4
EXIT_STRUCTURAL = 5

CSV_COLUMNS = [
    "solver",
    "n",
    "m",
    "k",
    "L",
    "total_flow",
    "upper_bound",
    "ub_provenance",
    "omega_prime",
    "wall_time_sec",
    "repeat",
]


@dataclass
class RunReport:
    """Solver outcome in the documented report schema.

    ``omega_prime = (UB - flow) / UB`` is reported only when an upper bound
    is available; its provenance is one of ``exact`` (oracle), ``fptas-dual``
    (the solver's own dual bound), ``external`` (user supplied) or
    ``edge-flow-LP-export-pending`` (no bound yet; export the edge-flow LP
    and solve it externally to obtain one).
    """

    solver: str
    instance: Instance
    total_flow: float
    upper_bound: float | None
    ub_provenance: str | None
    omega_prime: float | None
    wall_time_sec: float
    repeat: int
    stats: dict

    def to_dict(self) -> dict:
        net = self.instance.network
        return {
            "solver": self.solver,
            "instance": {
                "n": net.vertex_count,
                "m": net.edge_count,
                "k": self.instance.commodity_count,
                "L": self.instance.hop_bound,
            },
            "total_flow": self.total_flow,
            "upper_bound": self.upper_bound,
            "ub_provenance": self.ub_provenance,
            "omega_prime": self.omega_prime,
            "wall_time_sec": self.wall_time_sec,
            "repeat": self.repeat,
            "stats": self.stats,
        }

    def to_csv(self) -> str:
        net = self.instance.network
        values = {
            "solver": self.solver,
            "n": net.vertex_count,
            "m": net.edge_count,
            "k": self.instance.commodity_count,
            "L": self.instance.hop_bound,
            "total_flow": self.total_flow,
            "upper_bound": "" if self.upper_bound is None else self.upper_bound,
            "ub_provenance": self.ub_provenance or "",
            "omega_prime": "" if self.omega_prime is None else self.omega_prime,
            "wall_time_sec": self.wall_time_sec,
            "repeat": self.repeat,
        }
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerow(values)
        return buf.getvalue()


def _emit(report: RunReport, fmt: str) -> None:
    if fmt == "csv":
        sys.stdout.write(report.to_csv())
    else:
        print(json.dumps(report.to_dict(), indent=2))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lbmcf",
        description="Hop-bounded maximum multicommodity flow toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a stacked-grid benchmark instance")
    gen.add_argument("--a", type=int, required=True, help="grid side length")
    gen.add_argument("--b", type=int, required=True, help="number of stacked grids")
    gen.add_argument("--k", type=int, required=True, help="number of commodities")
    gen.add_argument(
        "--lambda", dest="congestion", type=float, required=True,
        help="target witness congestion in (0, 1]",
    )
    gen.add_argument("--L", dest="hop_bound", type=int, required=True, help="hop bound")
    gen.add_argument("--seed", type=int, required=True, help="generator seed")
    gen.add_argument("--out", required=True, help="output instance file")
    gen.add_argument(
        "--demand-mode", type=int, default=1, choices=(1, 2),
        help="demand assignment mode (only mode 1 is supported)",
    )

    solve = sub.add_parser("solve", help="run a solver and report")
    solve.add_argument("--algo", required=True, choices=("fptas", "greedy"))
    solve.add_argument("--omega", type=float, help="approximation parameter (fptas)")
    solve.add_argument("--in", dest="infile", required=True, help="instance file")
    solve.add_argument("--solution-out", help="write the solution file here")
    solve.add_argument("--report", default="json", choices=("json", "csv"))
    solve.add_argument(
        "--ub", help="upper bound for omega': a number, or 'exact' to run the oracle"
    )
    solve.add_argument("--threads", type=int, default=1, help="parallel tree fan-out")
    solve.add_argument(
        "--repeat", type=int, default=1, help="run N times, report the median time"
    )

    exact = sub.add_parser("exact", help="exact optimum via the rational oracle")
    exact.add_argument("--in", dest="infile", required=True, help="instance file")
    exact.add_argument("--solution-out", help="write the optimal solution here")
    exact.add_argument("--report", default="json", choices=("json", "csv"))
    exact.add_argument(
        "--path-cap", type=int, default=oracle.DEFAULT_PATH_CAP,
        help="abort when the path catalog exceeds this size",
    )

    export = sub.add_parser("export-lp", help="write an LP-format model file")
    export.add_argument("--in", dest="infile", required=True, help="instance file")
    export.add_argument("--model", required=True, choices=("edge", "texp"))
    export.add_argument(
        "--out", help="output LP file (default: <instance>.<model>.lp)"
    )

    val = sub.add_parser("validate", help="validate a solution file")
    val.add_argument("--in", dest="infile", required=True, help="instance file")
    val.add_argument("--solution", required=True, help="solution file")
    val.add_argument("--report", default="json", choices=("json", "csv"))

    return parser


def _timed_runs(fn, repeat: int):
    """Run ``fn`` ``repeat`` times; return (last result, median seconds)."""
    times = []
    result = None
    for _ in range(max(repeat, 1)):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return result, statistics.median(times)


def _cmd_generate(args) -> int:
    if args.demand_mode != 1:
        print(
            "error: demand mode 2 (proportional concurrent-flow scaling) is not "
            "supported; only mode 1 is implemented",
            file=sys.stderr,
        )
        return EXIT_USAGE
    config = instgen.GridGenConfig(
        a=args.a, b=args.b, k=args.k, congestion=args.congestion,
        hop_bound=args.hop_bound, seed=args.seed,
    )
    instance = instgen.generate_instance(config)
    fileio.write_instance(instance, args.out, config.header_comments())
    net = instance.network
    print(
        json.dumps(
            {
                "out": args.out,
                "n": net.vertex_count,
                "m": net.edge_count,
                "k": instance.commodity_count,
                "L": instance.hop_bound,
            }
        )
    )
    return EXIT_OK


def _resolve_ub(args, instance: Instance) -> tuple[float | None, str | None]:
    if args.ub is None:
        return None, None
    if args.ub == "exact":
        return oracle.exact_optimum(instance).optimum_float, "exact"
    try:
        return float(args.ub), "external"
    except ValueError:
        raise ParameterError(f"--ub must be a number or 'exact', got {args.ub!r}") from None


def _cmd_solve(args) -> int:
    instance = fileio.read_instance(args.infile)
    if args.algo == "fptas":
        if args.omega is None:
            print("error: --algo fptas requires --omega", file=sys.stderr)
            return EXIT_USAGE
        (solution, stats, ub, omega_prime), seconds = _timed_runs(
            lambda: fptas.solve(instance, args.omega), args.repeat
        )
        stats_dict = stats.to_dict()
        upper, provenance = (ub, "fptas-dual") if ub > 0 else (None, None)
    else:
        if args.omega is not None:
            print("error: --omega applies to --algo fptas only", file=sys.stderr)
            return EXIT_USAGE
        (solution, stats), seconds = _timed_runs(
            lambda: greedy.solve_greedy(instance, threads=args.threads), args.repeat
        )
        stats_dict = stats.to_dict()
        upper, provenance = None, "edge-flow-LP-export-pending"
        omega_prime = None

    override, override_prov = _resolve_ub(args, instance)
    if override is not None:
        upper, provenance = override, override_prov
    if upper is not None and upper > 0:
        omega_prime = (upper - solution.total_value) / upper

    report_check = validate_solution(instance, solution)
    if not report_check.feasible:
        print(
            f"internal error: solver emitted an infeasible solution: "
            f"{report_check.to_dict()}",
            file=sys.stderr,
        )
        return EXIT_INTERNAL

    if args.solution_out:
        fileio.write_solution(solution, args.solution_out)

    _emit(
        RunReport(
            solver=args.algo,
            instance=instance,
            total_flow=solution.total_value,
            upper_bound=upper,
            ub_provenance=provenance,
            omega_prime=omega_prime,
            wall_time_sec=seconds,
            repeat=args.repeat,
            stats=stats_dict,
        ),
        args.report,
    )
    return EXIT_OK


def _cmd_exact(args) -> int:
    instance = fileio.read_instance(args.infile)
    try:
        result, seconds = _timed_runs(
            lambda: oracle.exact_optimum(instance, path_cap=args.path_cap), 1
        )
    except OracleSizeError as exc:
        print(
            f"error: {exc}\nhint: use 'lbmcf export-lp --model texp' and an external "
            "LP solver for instances beyond the oracle cap",
            file=sys.stderr,
        )
        return EXIT_ORACLE_CAP
    if args.solution_out:
        fileio.write_solution(result.solution, args.solution_out)
    report = RunReport(
        solver="exact",
        instance=instance,
        total_flow=result.optimum_float,
        upper_bound=result.optimum_float,
        ub_provenance="exact",
        omega_prime=0.0,
        wall_time_sec=seconds,
        repeat=1,
        stats={"optimum_rational": result.optimum_str, "lp_pivots": result.lp_pivots},
    )
    _emit(report, args.report)
    return EXIT_OK


def _cmd_export_lp(args) -> int:
    instance = fileio.read_instance(args.infile)
    if args.model == "edge":
        model = lpmodel.export_edge_flow_lp(instance)
        note = "hop bound ignored: the edge-flow optimum upper-bounds the hop-bounded one"
    else:
        model = lpmodel.export_time_expanded_lp(instance)
        note = None
    out = args.out or f"{args.infile}.{args.model}.lp"
    lpmodel.write_lp_file(model, out)
    payload = {
        "out": out,
        "model": args.model,
        "variables": model.variable_count,
        "rows": model.row_count,
    }
    if note:
        payload["note"] = note
    print(json.dumps(payload))
    return EXIT_OK


def _cmd_validate(args) -> int:
    instance = fileio.read_instance(args.infile)
    solution: FlowSolution = fileio.read_solution(args.solution, instance)
    report = validate_solution(instance, solution)
    if args.report == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf, fieldnames=list(report.to_dict().keys()), lineterminator="\n"
        )
        writer.writeheader()
        writer.writerow(report.to_dict())
        sys.stdout.write(buf.getvalue())
    else:
        print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "solve": _cmd_solve,
        "exact": _cmd_exact,
        "export-lp": _cmd_export_lp,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except (InstanceParseError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StructuralError, SolutionFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURAL
    except OracleSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE_CAP
    except InternalAssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
