#!/usr/bin/env python3
"""Benchmark the compiled kernel lane against the pure-Python lane.

The hot loop is the descent-path stepper (predictor plus Newton corrector),
so the benchmark traces full descent trees for a deterministic corpus with
each lane and reports wall times and speedups.

Usage: python benchmarks/bench_backends.py [--instances 40] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

from polydescent.backend import available_backends
from polydescent.randomgen import blaschke_corpus, polynomial_corpus
from polydescent.targets import PolynomialTarget
from polydescent.tracer import DEFAULT_SETTINGS, _trace_from, _seed_branch, descent_directions
from polydescent.blaschke import BlaschkeTarget


def _trace_tree_with(lane, target) -> int:
    """Trace every branch of every critical point through a specific lane."""
    import polydescent.tracer as tracer_mod
    import polydescent.backend as backend_mod

    saved_tracer = tracer_mod.kernels
    saved_backend = backend_mod.kernels
    tracer_mod.kernels = lane
    backend_mod.kernels = lane
    samples = 0
    try:
        for loc, m in target.criticals.points:
            model = target.branch_model(loc, m)
            seeds = descent_directions(target, (loc, m))
            for seed in seeds:
                t0, z0 = _seed_branch(
                    target, loc, m, seed.direction, 1.0, DEFAULT_SETTINGS, model
                )
                path = _trace_from(
                    target,
                    loc,
                    model.base_value,
                    t0,
                    z0,
                    DEFAULT_SETTINGS,
                    prefix=([1.0], [loc]),
                )
                samples += path.zs.size
    finally:
        tracer_mod.kernels = saved_tracer
        backend_mod.kernels = saved_backend
    return samples


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instances", type=int, default=40)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    lanes = available_backends()
    if "compiled" not in lanes:
        print("compiled lane not built; run `python setup.py build_ext --inplace`")

    poly_targets = [
        PolynomialTarget(p)
        for p in polynomial_corpus(
            seed=1234, count=args.instances, max_s=6, max_degree=12
        )
    ]
    bl_targets = [
        BlaschkeTarget(b)
        for b in blaschke_corpus(seed=1234, count=args.instances // 2, max_s=5)
    ]

    print(f"{'suite':<22}{'lane':<10}{'best (s)':>10}{'samples':>10}")
    results: dict[tuple[str, str], float] = {}
    for suite, targets in (
        ("polynomial trees", poly_targets),
        ("blaschke trees", bl_targets),
    ):
        for name, lane in sorted(lanes.items()):
            best = float("inf")
            samples = 0
            for _ in range(args.repeat):
                start = time.perf_counter()
                samples = sum(_trace_tree_with(lane, t) for t in targets)
                best = min(best, time.perf_counter() - start)
            results[(suite, name)] = best
            print(f"{suite:<22}{name:<10}{best:>10.3f}{samples:>10}")
        if "compiled" in lanes and "pure" in lanes:
            speedup = results[(suite, "pure")] / results[(suite, "compiled")]
            print(f"{suite:<22}{'speedup':<10}{speedup:>9.1f}x")


if __name__ == "__main__":
    main()
