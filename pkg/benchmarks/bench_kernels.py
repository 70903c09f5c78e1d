#!/usr/bin/env python3
"""Benchmark the compiled shortest-path kernel against the numpy fallback.

The hop-bounded Bellman-Ford table is the hot inner loop of both solvers
(the approximation scheme calls it once per augmentation), so the backend
choice dominates end-to-end runtime. Run after installing the package:

    python benchmarks/bench_kernels.py --a 6 --b 8 --L 9 --reps 200
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from lbmcf import _kernels_py
from lbmcf.instgen import GridGenConfig, generate_grid_network

try:
    from lbmcf import _speedups
except ImportError:
    _speedups = None


def time_backend(impl, net, lengths, sources, hop_limit, reps):
    times = []
    for rep in range(reps):
        src = sources[rep % len(sources)]
        t0 = time.perf_counter()
        impl.bellman_ford_table(
            net.vertex_count, net.tails, net.heads, lengths, src, hop_limit
        )
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def bench_solvers(instance, threads):
    from lbmcf import fptas
    from lbmcf.greedy import solve_greedy

    t0 = time.perf_counter()
    _, stats, _, _ = fptas.solve(instance, 0.2)
    t_fptas = time.perf_counter() - t0
    t0 = time.perf_counter()
    _, gstats = solve_greedy(instance, threads=threads)
    t_greedy = time.perf_counter() - t0
    return t_fptas, stats.bellman_ford_calls, t_greedy, gstats.tree_builds


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", type=int, default=6)
    ap.add_argument("--b", type=int, default=8)
    ap.add_argument("--k", type=int, default=15)
    ap.add_argument("--L", type=int, default=9)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument(
        "--end-to-end", action="store_true",
        help="also time full solver runs under each backend",
    )
    args = ap.parse_args()

    cfg = GridGenConfig(
        a=args.a, b=args.b, k=args.k, congestion=0.6, hop_bound=args.L, seed=args.seed
    )
    net = generate_grid_network(cfg)
    rng = np.random.default_rng(0)
    lengths = rng.uniform(0.1, 1.0, net.edge_count)
    sources = list(rng.integers(0, net.vertex_count, size=32))

    print(f"grid a={args.a} b={args.b}: n={net.vertex_count} m={net.edge_count} L={args.L}")
    backends = [("python", _kernels_py)]
    if _speedups is not None:
        backends.append(("cython", _speedups))
    else:
        print("compiled extension not available; benchmarking fallback only")

    results = {}
    for name, impl in backends:
        med = time_backend(impl, net, lengths, sources, args.L, args.reps)
        results[name] = med
        print(f"  {name:>7}: {med * 1e6:9.1f} us per bellman_ford_table call")
    if len(results) == 2:
        print(f"  speedup: {results['python'] / results['cython']:.1f}x")

    if args.end_to_end:
        import lbmcf.kernels as kernels
        from lbmcf.instgen import generate_instance

        instance = generate_instance(cfg)
        original = kernels.bellman_ford_table
        try:
            for name, impl in backends:
                # paths.py resolves the kernel through the module attribute
                # at call time, so swapping it re-routes every solver call.
                kernels.bellman_ford_table = impl.bellman_ford_table
                tf, bf, tg, trees = bench_solvers(instance, args.threads)
                print(
                    f"  {name:>7}: fptas {tf:7.2f}s ({bf} shortest-path calls) | "
                    f"greedy {tg:6.2f}s ({trees} tree builds)"
                )
        finally:
            kernels.bellman_ford_table = original


if __name__ == "__main__":
    main()
