"""Sublevel-set component counting, separation witnesses, and the
two-edge-route integral bound.

The strict sublevel region {|f| < r} is rasterized on a square grid and its
4-connected components are labeled; the count is cross-checked against the
classical prediction: one more than the number of critical points, with
multiplicity, whose critical value is at least r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from . import geometry
from .errors import NearCriticalValue
from .poly import CriticalPointSet, FactoredPolynomial, critical_points, evaluate
from .tree import DescentTree, TreeRoute, tree_route

# Margin of the grid box beyond the enclosing disk.
BOX_MARGIN = 1.2

# Reject thresholds within this relative distance of a critical value.
CRITICAL_VALUE_GUARD_REL = 0.01

_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=np.int8)

_GL_NODES = 32


@dataclass(frozen=True)
class LevelSetGrid:
    """Rasterized sublevel region with 4-connected component labels."""

    center: complex
    half_width: float
    resolution: int
    threshold: float
    inside: np.ndarray  # bool, shape (resolution, resolution), [iy, ix]
    labels: np.ndarray  # int32 component ids, 0 = outside
    component_count: int

    def cell_of(self, z: complex) -> tuple[int, int]:
        step = 2.0 * self.half_width / self.resolution
        ix = int((z.real - (self.center.real - self.half_width)) / step)
        iy = int((z.imag - (self.center.imag - self.half_width)) / step)
        ix = min(max(ix, 0), self.resolution - 1)
        iy = min(max(iy, 0), self.resolution - 1)
        return iy, ix

    def label_of(self, z: complex) -> int:
        iy, ix = self.cell_of(z)
        return int(self.labels[iy, ix])


@dataclass(frozen=True)
class ComponentReport:
    r: float
    grid_components: int
    predicted_components: int
    root_component_ids: tuple[int, ...]
    resolution: int

    @property
    def agrees(self) -> bool:
        return self.grid_components == self.predicted_components

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "grid_components": self.grid_components,
            "predicted_components": self.predicted_components,
            "root_component_ids": list(self.root_component_ids),
            "resolution": self.resolution,
            "agrees": self.agrees,
        }


@dataclass(frozen=True)
class SeparationReport:
    critical_location: complex
    critical_value_abs: float
    r: float
    root_vertices: tuple[int, ...]
    component_ids: tuple[int, ...]
    separated: bool
    witnessed_lower_bound: float

    def to_json_dict(self) -> dict:
        return {
            "critical": {
                "re": self.critical_location.real,
                "im": self.critical_location.imag,
            },
            "critical_value_abs": self.critical_value_abs,
            "r": self.r,
            "root_vertices": list(self.root_vertices),
            "component_ids": list(self.component_ids),
            "separated": self.separated,
            "witnessed_lower_bound": self.witnessed_lower_bound,
        }


@dataclass(frozen=True)
class IntegralReport:
    value: complex
    abs_value: float
    bound: float
    bound_ok: bool
    sharpened_applicable: bool
    sharpened_bound: float
    sharpened_ok: bool | None
    margin_factor: float
    critical_value_abs: float
    radius_from_origin: float

    def to_json_dict(self) -> dict:
        return {
            "value": {"re": self.value.real, "im": self.value.imag},
            "abs_value": self.abs_value,
            "bound": self.bound,
            "bound_ok": self.bound_ok,
            "sharpened_applicable": self.sharpened_applicable,
            "sharpened_bound": self.sharpened_bound,
            "sharpened_ok": self.sharpened_ok,
            "margin_factor": self.margin_factor,
            "critical_value_abs": self.critical_value_abs,
            "radius_from_origin": self.radius_from_origin,
        }


def critical_values(
    poly: FactoredPolynomial, criticals: CriticalPointSet | None = None
) -> np.ndarray:
    """Sorted |f| at the critical points (one entry per distinct point)."""
    criticals = criticals if criticals is not None else critical_points(poly)
    vals = [abs(evaluate(poly, loc)) for loc, _ in criticals.points]
    return np.array(sorted(vals))


def predicted_component_count(
    poly: FactoredPolynomial, r: float, criticals: CriticalPointSet | None = None
) -> int:
    """1 + sum of multiplicities of critical points with |f| >= r."""
    criticals = criticals if criticals is not None else critical_points(poly)
    outside = 0
    for loc, m in criticals.points:
        if abs(evaluate(poly, loc)) >= r:
            outside += m
    return 1 + outside


def log_abs_grid(
    poly: FactoredPolynomial, center: complex, half_width: float, resolution: int
) -> np.ndarray:
    """log|f| on the cell centers of the grid box (rows run along Im)."""
    step = 2.0 * half_width / resolution
    xs = center.real - half_width + step * (np.arange(resolution) + 0.5)
    ys = center.imag - half_width + step * (np.arange(resolution) + 0.5)
    zs = xs[None, :] + 1j * ys[:, None]
    acc = np.zeros((resolution, resolution))
    with np.errstate(divide="ignore"):
        for loc, mult in poly.roots:
            acc += mult * np.log(np.abs(zs - loc))
    return acc


def build_level_grid(
    poly: FactoredPolynomial,
    r: float,
    resolution: int,
    disk: geometry.EnclosingDisk | None = None,
    log_abs: np.ndarray | None = None,
) -> LevelSetGrid:
    """Rasterize {|f| < r} and label its 4-connected components.

    Cells containing a root are always marked inside (the root's component
    exists for every r > 0 even when its lobe is below grid resolution).
    """
    if r <= 0:
        raise ValueError("threshold r must be positive")
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    if disk is None:
        disk = geometry.smallest_enclosing_disk(
            [complex(a) for a in poly.locations]
        )
    half_width = BOX_MARGIN * (disk.radius if disk.radius > 0 else 1.0)
    if log_abs is None:
        log_abs = log_abs_grid(poly, disk.center, half_width, resolution)
    inside = log_abs < math.log(r)
    grid = LevelSetGrid(
        disk.center, half_width, resolution, r, inside, np.zeros(0), 0
    )
    for loc, _ in poly.roots:
        iy, ix = grid.cell_of(loc)
        inside[iy, ix] = True
    labels, count = ndimage.label(inside, structure=_FOUR_CONNECTED)
    return LevelSetGrid(
        disk.center, half_width, resolution, r, inside, labels, int(count)
    )


def _guard_r(r: float, values: np.ndarray, exempt: float | None = None) -> None:
    for v in values:
        if exempt is not None and abs(v - exempt) <= 1e-12 * max(v, 1.0):
            continue
        if abs(r - v) < CRITICAL_VALUE_GUARD_REL * v:
            raise NearCriticalValue(
                f"threshold {r:.6g} is within 1% of critical value {v:.6g}"
            )


def count_level_components(
    poly: FactoredPolynomial,
    r: float,
    resolution: int = 512,
    criticals: CriticalPointSet | None = None,
    log_abs: np.ndarray | None = None,
) -> ComponentReport:
    """Grid component count of {|f| < r} plus the predicted count.

    Raises NearCriticalValue when r sits within 1% of a critical value,
    where grid topology at the pinch is unreliable.
    """
    criticals = criticals if criticals is not None else critical_points(poly)
    _guard_r(r, critical_values(poly, criticals))
    grid = build_level_grid(poly, r, resolution, log_abs=log_abs)
    root_ids = tuple(grid.label_of(loc) for loc, _ in poly.roots)
    return ComponentReport(
        r=r,
        grid_components=grid.component_count,
        predicted_components=predicted_component_count(poly, r, criticals),
        root_component_ids=root_ids,
        resolution=resolution,
    )


def separation_witness(
    poly: FactoredPolynomial,
    tree: DescentTree,
    critical_vertex: int,
    resolution: int = 512,
    criticals: CriticalPointSet | None = None,
) -> SeparationReport:
    """Witness that the branch-endpoint roots of a critical point fall in
    distinct components of {|f| < r} for r just below the critical value.

    r is fixed at (1 - 1e-3) |f(b)|, which necessarily sits inside the
    guard band of b's own critical value; the guard therefore applies to
    the other critical values only (NearCriticalValue propagates for them).
    """
    vert = tree.vertices[critical_vertex]
    if vert.kind != "critical":
        raise ValueError(f"vertex {critical_vertex} is not a critical vertex")
    criticals = criticals if criticals is not None else critical_points(poly)
    v_here = abs(evaluate(poly, vert.location))
    r = v_here * (1.0 - 1e-3)
    _guard_r(r, critical_values(poly, criticals), exempt=v_here)

    targets = sorted(
        {
            e.target
            for e in tree.edges
            if e.source == critical_vertex and tree.vertices[e.target].kind == "root"
        }
    )
    if len(targets) < 2:
        raise ValueError(
            f"critical vertex {critical_vertex} needs at least two root endpoints"
        )
    grid = build_level_grid(poly, r, resolution)
    ids = tuple(grid.label_of(tree.vertices[t].location) for t in targets)
    separated = len(set(ids)) == len(ids) and all(i > 0 for i in ids)
    return SeparationReport(
        critical_location=vert.location,
        critical_value_abs=v_here,
        r=r,
        root_vertices=tuple(targets),
        component_ids=ids,
        separated=separated,
        witnessed_lower_bound=v_here,
    )


def _gauss_legendre_route_integral(
    poly: FactoredPolynomial, zs: np.ndarray, nodes: int = _GL_NODES
) -> complex:
    """Composite Gauss-Legendre quadrature of f(z) e^{-z} dz per segment."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    a = zs[:-1]
    dz = np.diff(zs)
    pts = a[:, None] + (x[None, :] + 1.0) * 0.5 * dz[:, None]
    flat = pts.ravel()
    vals = np.prod(
        (flat[:, None] - poly.locations[None, :]) ** poly.multiplicities[None, :],
        axis=1,
    ) * np.exp(-flat)
    vals = vals.reshape(pts.shape)
    return complex(((vals * w[None, :]).sum(axis=1) * 0.5 * dz).sum())


def integral_bound_check(
    poly: FactoredPolynomial,
    tree: DescentTree,
    root_a: int,
    root_b: int,
    hull: geometry.ConvexHull | None = None,
    nodes: int = _GL_NODES,
) -> IntegralReport:
    """|integral of f e^{-z}| along the two-edge route, against its bound.

    The bound takes the disk centered at the origin: R0 = max |root|, giving
    2 pi N R0 e^{R0} |f(b)| with b the middle critical vertex; when both
    endpoint roots are hull-boundary, N sharpens to 2s.
    """
    route: TreeRoute = tree_route(tree, root_a, root_b)
    if len(route.critical_indices) != 1:
        raise ValueError(
            f"route from {root_a} to {root_b} is not a two-edge route "
            f"(criticals traversed: {len(route.critical_indices)})"
        )
    beta = tree.vertices[route.critical_indices[0]].location
    f_beta_abs = abs(evaluate(poly, beta))
    value = _gauss_legendre_route_integral(poly, route.zs, nodes)
    r0 = float(np.abs(poly.locations).max())
    bound = 2.0 * math.pi * poly.degree * r0 * math.exp(r0) * f_beta_abs
    if hull is None:
        hull = geometry.convex_hull([complex(a) for a in poly.locations])
    both_boundary = all(
        geometry.hull_membership(hull, tree.vertices[v].location)
        == geometry.BOUNDARY
        for v in (root_a, root_b)
    )
    sharpened = 4.0 * math.pi * poly.s * r0 * math.exp(r0) * f_beta_abs
    abs_value = abs(value)
    return IntegralReport(
        value=value,
        abs_value=abs_value,
        bound=bound,
        bound_ok=abs_value <= bound,
        sharpened_applicable=both_boundary,
        sharpened_bound=sharpened,
        sharpened_ok=(abs_value <= sharpened) if both_boundary else None,
        margin_factor=bound / abs_value if abs_value > 0 else math.inf,
        critical_value_abs=f_beta_abs,
        radius_from_origin=r0,
    )
