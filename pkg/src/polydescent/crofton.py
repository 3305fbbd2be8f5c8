"""Crofton-style length estimation and line-crossing statistics.

The length of a rectifiable curve equals one quarter of the integral, over
directions, of its crossing count with the family of perpendicular lines.
For a polyline the inner integral over line offsets is exactly the total
variation of the directional projection, so only the direction average is
discretized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .poly import FactoredPolynomial
from .tracer import DescentPath

DEFAULT_N_THETA = 720

# A line is near-tangent to a segment when the projected direction is
# smaller than this; such angles get shifted by half a grid step.
_TANGENT_TOL = 1e-9


@dataclass(frozen=True)
class CroftonEstimate:
    """Quarter-average over directions of the projected total variation."""

    length: float
    theta_samples: int
    variations: np.ndarray  # per-theta total variation of Re(z e^{-i theta})


@dataclass(frozen=True)
class CrossingProfile:
    """Counts of transversal polyline crossings for a grid of lines.

    The line for (r, theta) passes through r e^{i theta} with direction
    i e^{i theta}; theta runs over [0, pi) so each line appears once.
    """

    thetas: np.ndarray
    rs: np.ndarray
    counts: np.ndarray  # shape (n_theta, n_r)
    max_count: int


@dataclass(frozen=True)
class BoundReport:
    """Measured path lengths and crossings against the geometric bounds."""

    arc_length: float
    crofton_length: float
    pi_n_r: float
    two_pi_s_r: float
    degree: int
    distinct_roots: int
    radius: float
    anchor_in_hull: bool
    endpoint_kind: str
    endpoint_membership: str
    length_le_pi_n_r: bool
    boundary_endpoint: bool
    length_le_two_pi_s_r: bool | None
    max_crossings: int
    crossings_le_degree: bool
    crossings_le_two_s: bool | None

    def to_json_dict(self) -> dict:
        return {
            "arc_length": self.arc_length,
            "crofton": self.crofton_length,
            "pi_N_R": self.pi_n_r,
            "two_pi_s_R": self.two_pi_s_r,
            "degree": self.degree,
            "distinct_roots": self.distinct_roots,
            "radius": self.radius,
            "anchor_in_hull": self.anchor_in_hull,
            "endpoint_kind": self.endpoint_kind,
            "endpoint_membership": self.endpoint_membership,
            "length_le_pi_N_R": self.length_le_pi_n_r,
            "boundary_endpoint": self.boundary_endpoint,
            "length_le_two_pi_s_R": self.length_le_two_pi_s_r,
            "max_crossings": self.max_crossings,
            "crossings_le_degree": self.crossings_le_degree,
            "crossings_le_two_s": self.crossings_le_two_s,
        }


def _polyline(path) -> np.ndarray:
    zs = path.zs if isinstance(path, DescentPath) else np.asarray(path)
    return np.asarray(zs, dtype=np.complex128)


def directional_variation(zs: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Total variation of Re(z e^{-i theta}) along the polyline, per theta.

    This equals the exact line-offset integral of the crossing count for
    each direction, with no discretization in the offset variable.
    """
    dz = np.diff(zs)
    if dz.size == 0:
        return np.zeros(len(thetas))
    rot = np.exp(-1j * thetas)
    return np.abs(np.real(rot[:, None] * dz[None, :])).sum(axis=1)


def crofton_length(path, n_theta: int = DEFAULT_N_THETA) -> CroftonEstimate:
    """Crofton length estimate of a sampled path over n_theta directions.

    Uniform trapezoid rule over the periodic direction variable; converges
    to the polyline arc length as n_theta grows.
    """
    if n_theta < 4:
        raise ValueError("n_theta must be at least 4")
    zs = _polyline(path)
    thetas = 2.0 * math.pi * np.arange(n_theta) / n_theta
    variations = directional_variation(zs, thetas)
    dtheta = 2.0 * math.pi / n_theta
    length = 0.25 * float((dtheta * variations).sum())
    return CroftonEstimate(length, n_theta, variations)


def max_crossings(
    path,
    n_theta: int,
    n_r: int,
    r_max: float | None = None,
) -> CrossingProfile:
    """Transversal crossing counts for a grid of lines over the path.

    The offset grid spans [-r_max, r_max] with a 5% margin beyond the
    farthest sample by default, so every line family covers the curve.
    """
    if n_theta < 1 or n_r < 1:
        raise ValueError("grids must be nonempty")
    zs = _polyline(path)
    if r_max is None:
        r_max = 1.05 * float(np.abs(zs).max()) + 1e-12
    thetas = math.pi * np.arange(n_theta) / n_theta
    rs = np.linspace(-r_max, r_max, n_r)
    dtheta = math.pi / max(n_theta, 1)

    dz = np.diff(zs)
    seg_dirs = dz[np.abs(dz) > 0]
    counts = np.zeros((n_theta, n_r), dtype=np.int64)
    span = float(np.abs(zs).max()) + 1e-30
    for k, theta in enumerate(thetas):
        if seg_dirs.size:
            # tangency: segment parallel to the line direction i e^{i theta}
            align = np.abs(np.real(seg_dirs * np.exp(-1j * theta))) / np.abs(seg_dirs)
            if align.min() < _TANGENT_TOL:
                theta = theta + 0.5 * dtheta
        proj = np.real(zs * np.exp(-1j * theta))
        r_here = rs.copy()
        exact = np.isin(r_here, proj)
        if exact.any():
            r_here[exact] += 1e-12 * span
        diff = proj[None, :] - r_here[:, None]
        sign_flips = (diff[:, :-1] * diff[:, 1:]) < 0
        counts[k] = sign_flips.sum(axis=1)
    return CrossingProfile(thetas, rs, counts, int(counts.max()))


def verify_length_bounds(
    path: DescentPath,
    poly: FactoredPolynomial,
    hull: geometry.ConvexHull,
    disk: geometry.EnclosingDisk,
    n_theta: int = DEFAULT_N_THETA,
    crossing_grid: tuple[int, int] = (60, 48),
) -> BoundReport:
    """Check a traced path against the pi*N*R bound, the 2*pi*s*R bound for
    hull-boundary endpoints, and the corresponding crossing-count ceilings."""
    n = poly.degree
    s = poly.s
    radius = disk.radius
    slack = 1.0 + 1e-3
    arc = path.arc_length
    cro = crofton_length(path, n_theta).length
    pi_n_r = math.pi * n * radius
    two_pi_s_r = 2.0 * math.pi * s * radius
    anchor_in_hull = geometry.hull_membership(hull, path.anchor) != geometry.EXTERIOR
    endpoint_membership = geometry.hull_membership(hull, path.endpoint_location)
    boundary_endpoint = (
        path.endpoint_kind == "root" and endpoint_membership == geometry.BOUNDARY
    )
    profile = max_crossings(path, *crossing_grid)
    return BoundReport(
        arc_length=arc,
        crofton_length=cro,
        pi_n_r=pi_n_r,
        two_pi_s_r=two_pi_s_r,
        degree=n,
        distinct_roots=s,
        radius=radius,
        anchor_in_hull=anchor_in_hull,
        endpoint_kind=path.endpoint_kind,
        endpoint_membership=endpoint_membership,
        length_le_pi_n_r=arc <= pi_n_r * slack,
        boundary_endpoint=boundary_endpoint,
        length_le_two_pi_s_r=(arc <= two_pi_s_r * slack) if boundary_endpoint else None,
        max_crossings=profile.max_count,
        crossings_le_degree=profile.max_count <= n,
        crossings_le_two_s=(profile.max_count <= 2 * s) if boundary_endpoint else None,
    )
