"""Random-corpus exploration of edge-length ratios against the geometric
bounds, probing whether a bound independent of multiplicities could hold
for interior endpoint roots as well."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import geometry
from .blaschke import BlaschkeTarget
from .errors import PolydescentError
from .randomgen import InstanceSpec, random_blaschke, random_polynomial
from .targets import PolynomialTarget
from .tracer import TraceSettings
from .tree import build_descent_tree

CSV_SCHEMA = (
    "seed,index,kind,s,p,N,R,max_edge_length,ratio_pi_N_R,ratio_two_pi_s_R,"
    "endpoint_boundary,has_interior_root,failed"
)
CSV_HEADER = f"# polydescent explore v1: {CSV_SCHEMA}"

THREADS_ENV = "POLYDESCENT_THREADS"


@dataclass(frozen=True)
class ExplorationRow:
    seed: int
    index: int
    kind: str
    s: int
    p: int
    degree: int
    radius: float
    max_edge_length: float
    ratio_pi_n_r: float
    ratio_two_pi_s_r: float
    endpoint_boundary: bool
    has_interior_root: bool
    failed: bool
    failure: str = ""

    def csv_line(self) -> str:
        return ",".join(
            [
                str(self.seed),
                str(self.index),
                self.kind,
                str(self.s),
                str(self.p),
                str(self.degree),
                f"{self.radius:.17g}",
                f"{self.max_edge_length:.17g}",
                f"{self.ratio_pi_n_r:.17g}",
                f"{self.ratio_two_pi_s_r:.17g}",
                str(int(self.endpoint_boundary)),
                str(int(self.has_interior_root)),
                str(int(self.failed)),
            ]
        )


def _explore_one(
    spec: InstanceSpec, index: int, settings: TraceSettings | None
) -> ExplorationRow:
    try:
        if spec.kind == "blaschke":
            product = random_blaschke(spec, index)
            target = BlaschkeTarget(product)
            locations = [complex(z) for z, _ in product.zeros]
            s = product.s
            degree = product.degree
            radius = 1.0
        else:
            poly = random_polynomial(spec, index)
            target = PolynomialTarget(poly)
            locations = [complex(a) for a in poly.locations]
            s = poly.s
            degree = poly.degree
            radius = target.disk.radius
        hull = geometry.convex_hull(locations)
        tree = build_descent_tree(target, settings)
        p = tree.critical_count

        best_len = 0.0
        best_edge = None
        for e in tree.edges:
            if e.path.arc_length > best_len:
                best_len = e.path.arc_length
                best_edge = e
        endpoint_boundary = False
        if best_edge is not None:
            vert = tree.vertices[best_edge.target]
            endpoint_boundary = (
                vert.kind == "root"
                and geometry.hull_membership(hull, vert.location)
                == geometry.BOUNDARY
            )
        has_interior = any(
            geometry.hull_membership(hull, z) == geometry.INTERIOR
            for z in locations
        )
        return ExplorationRow(
            seed=spec.seed,
            index=index,
            kind=spec.kind,
            s=s,
            p=p,
            degree=degree,
            radius=radius,
            max_edge_length=best_len,
            ratio_pi_n_r=best_len / (math.pi * degree * radius),
            ratio_two_pi_s_r=best_len / (2.0 * math.pi * s * radius),
            endpoint_boundary=endpoint_boundary,
            has_interior_root=has_interior,
            failed=False,
        )
    except (PolydescentError, ValueError, RuntimeError) as exc:
        # recorded, never dropped: failures are data too
        return ExplorationRow(
            seed=spec.seed,
            index=index,
            kind=spec.kind,
            s=0,
            p=0,
            degree=0,
            radius=float("nan"),
            max_edge_length=float("nan"),
            ratio_pi_n_r=float("nan"),
            ratio_two_pi_s_r=float("nan"),
            endpoint_boundary=False,
            has_interior_root=False,
            failed=True,
            failure=f"{type(exc).__name__}: {exc}",
        )


def thread_budget(requested: int | None = None) -> int:
    if requested is not None and requested >= 1:
        return requested
    env = os.environ.get(THREADS_ENV, "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def explore_lengths(
    spec: InstanceSpec,
    count: int,
    settings: TraceSettings | None = None,
    threads: int | None = None,
) -> list[ExplorationRow]:
    """Generate `count` instances and measure their worst edge-length ratios.

    Instances are independent (each derives its own counter stream from
    (seed, index)), so concurrent execution cannot change any row; rows come
    back ordered by index regardless of completion order.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    workers = min(thread_budget(threads), count)
    if workers == 1:
        return [_explore_one(spec, i, settings) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_explore_one, spec, i, settings) for i in range(count)
        ]
        return [f.result() for f in futures]


def rows_to_csv(rows: list[ExplorationRow]) -> str:
    return "\n".join([CSV_HEADER] + [r.csv_line() for r in rows]) + "\n"


def summarize(rows: list[ExplorationRow]) -> dict:
    """Worst ratios over the corpus, split by endpoint boundary class."""
    ok = [r for r in rows if not r.failed]
    boundary = [r for r in ok if r.endpoint_boundary]
    interior = [r for r in ok if not r.endpoint_boundary]
    return {
        "instances": len(rows),
        "failed": sum(r.failed for r in rows),
        "max_ratio_pi_N_R": max((r.ratio_pi_n_r for r in ok), default=0.0),
        "max_ratio_two_pi_s_R": max((r.ratio_two_pi_s_r for r in ok), default=0.0),
        "max_ratio_two_pi_s_R_boundary": max(
            (r.ratio_two_pi_s_r for r in boundary), default=0.0
        ),
        "max_ratio_two_pi_s_R_interior": max(
            (r.ratio_two_pi_s_r for r in interior), default=0.0
        ),
    }
