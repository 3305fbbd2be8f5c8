"""Convex hull of a point set, smallest enclosing disk, and membership tests.

Only the primitives the rest of the package needs; inputs are tiny (root
sets), so the implementations favor robustness and determinism over speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"

# Boundary band half-width, relative to the enclosing radius.
MEMBERSHIP_BAND_REL = 1e-9

# Orientation predicate slack, relative to the squared coordinate span.
_ORIENT_EPS_REL = 1e-12


@dataclass(frozen=True)
class ConvexHull:
    """Convex hull vertices in counterclockwise order.

    ``degenerate`` is set when the input is collinear (vertices hold the two
    extreme points) or a single point.  ``scale`` is the radius of the
    smallest disk enclosing the input, used to size tolerance bands.
    """

    vertices: tuple[complex, ...]
    degenerate: bool
    scale: float


@dataclass(frozen=True)
class EnclosingDisk:
    center: complex
    radius: float

    def contains(self, z: complex, slack: float = 1e-12) -> bool:
        return abs(z - self.center) <= self.radius * (1.0 + slack) + slack


def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def convex_hull(points: Sequence[complex]) -> ConvexHull:
    """Andrew monotone chain; collinear inputs collapse to a segment."""
    if len(points) == 0:
        raise ValueError("convex_hull needs at least one point")
    pts = sorted({(complex(p).real, complex(p).imag) for p in points})
    scale = smallest_enclosing_disk(points).radius
    if len(pts) == 1:
        return ConvexHull((complex(*pts[0]),), True, scale)

    span = max(
        max(x for x, _ in pts) - min(x for x, _ in pts),
        max(y for _, y in pts) - min(y for _, y in pts),
    )
    eps = _ORIENT_EPS_REL * span * span

    def chain(seq):
        out: list[tuple[float, float]] = []
        for p in seq:
            while len(out) >= 2 and _cross(
                complex(*out[-2]), complex(*out[-1]), complex(*p)
            ) <= eps:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    verts = [complex(*p) for p in lower[:-1] + upper[:-1]]
    if len(verts) <= 2:
        # collinear: keep the two extreme points of the sorted order
        return ConvexHull((complex(*pts[0]), complex(*pts[-1])), True, scale)
    return ConvexHull(tuple(verts), False, scale)


def _disk_from(points: list[complex], boundary: list[complex]) -> EnclosingDisk:
    if len(boundary) == 0:
        c, r = 0j, 0.0
    elif len(boundary) == 1:
        c, r = boundary[0], 0.0
    elif len(boundary) == 2:
        c = (boundary[0] + boundary[1]) / 2
        r = abs(boundary[0] - boundary[1]) / 2
    else:
        c, r = _circumcircle(boundary[0], boundary[1], boundary[2])
    return EnclosingDisk(c, r)


def _circumcircle(a: complex, b: complex, c: complex) -> tuple[complex, float]:
    d = 2.0 * _cross(a, b, c)
    if d == 0.0:
        # collinear triple: widest diameter pair
        pairs = [(a, b), (a, c), (b, c)]
        p, q = max(pairs, key=lambda pq: abs(pq[0] - pq[1]))
        return (p + q) / 2, abs(p - q) / 2
    ux = (
        (abs(a) ** 2) * (b.imag - c.imag)
        + (abs(b) ** 2) * (c.imag - a.imag)
        + (abs(c) ** 2) * (a.imag - b.imag)
    ) / d
    uy = (
        (abs(a) ** 2) * (c.real - b.real)
        + (abs(b) ** 2) * (a.real - c.real)
        + (abs(c) ** 2) * (b.real - a.real)
    ) / d
    center = complex(ux, uy)
    radius = max(abs(center - a), abs(center - b), abs(center - c))
    return center, radius


def smallest_enclosing_disk(points: Sequence[complex]) -> EnclosingDisk:
    """Minimal-radius disk covering all points (Welzl-style incremental).

    Deterministic: points are processed in the given order, so repeated calls
    return bit-identical disks.  Expected cost is fine for the small inputs
    this package sees.
    """
    pts = [complex(p) for p in points]
    if not pts:
        raise ValueError("smallest_enclosing_disk needs at least one point")
    disk = EnclosingDisk(pts[0], 0.0)
    for i, p in enumerate(pts):
        if disk.contains(p):
            continue
        disk = EnclosingDisk(p, 0.0)
        for j in range(i):
            q = pts[j]
            if disk.contains(q):
                continue
            disk = EnclosingDisk((p + q) / 2, abs(p - q) / 2)
            for k in range(j):
                s = pts[k]
                if disk.contains(s):
                    continue
                c, r = _circumcircle(p, q, s)
                disk = EnclosingDisk(c, r)
    return disk


def hull_signed_distance(hull: ConvexHull, z: complex) -> float:
    """Signed distance to the hull boundary: positive inside, negative outside.

    For a convex polygon this is the minimum over edges of the signed distance
    to each edge line (exact inside; a mild underestimate of the true exterior
    distance near vertices, which only makes exterior checks more lenient).
    Degenerate hulls (segment or point) are all boundary, so the value is
    the negated distance to the segment/point.
    """
    z = complex(z)
    verts = hull.vertices
    if hull.degenerate:
        if len(verts) == 1:
            return -abs(z - verts[0])
        return -_point_segment_distance(z, verts[0], verts[1])
    best = math.inf
    n = len(verts)
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        d = _cross(a, b, z) / abs(b - a)
        if d < best:
            best = d
    return best


def hull_signed_distances(hull: ConvexHull, zs) -> "np.ndarray":
    """Vectorized hull_signed_distance over an array of points."""
    import numpy as np

    zs = np.asarray(zs, dtype=np.complex128)
    verts = hull.vertices
    if hull.degenerate:
        if len(verts) == 1:
            return -np.abs(zs - verts[0])
        a, b = verts
        ab = b - a
        t = np.clip(((zs - a) * ab.conjugate()).real / abs(ab) ** 2, 0.0, 1.0)
        return -np.abs(zs - (a + t * ab))
    out = np.full(zs.shape, math.inf)
    n = len(verts)
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        e = b - a
        d = ((e.conjugate() * (zs - a)).imag) / abs(e)
        np.minimum(out, d, out=out)
    return out


def _point_segment_distance(z: complex, a: complex, b: complex) -> float:
    ab = b - a
    denom = (ab * ab.conjugate()).real
    if denom == 0.0:
        return abs(z - a)
    t = ((z - a) * ab.conjugate()).real / denom
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * ab))


def hull_membership(hull: ConvexHull, z: complex) -> str:
    """Classify z as interior / boundary / exterior with a tolerance band.

    The band half-width is MEMBERSHIP_BAND_REL times the enclosing radius
    (1.0 when the hull collapses to a point).  Every point of a degenerate
    hull is boundary.
    """
    band = MEMBERSHIP_BAND_REL * (hull.scale if hull.scale > 0 else 1.0)
    d = hull_signed_distance(hull, z)
    if d > band:
        return INTERIOR
    if d < -band:
        return EXTERIOR
    return BOUNDARY
