"""Crofton length estimates, crossing profiles, and length-bound reports."""

from __future__ import annotations

import cmath
import math

import numpy as np

from polydescent import (
    FactoredPolynomial,
    PolynomialTarget,
    convex_hull,
    smallest_enclosing_disk,
    trace_all_branches,
)
from polydescent.crofton import crofton_length, max_crossings, verify_length_bounds
from polydescent.randomgen import CounterRng
from polydescent.tracer import DescentPath

OMEGA = cmath.exp(2j * math.pi / 3)


def _segment_path(a: complex, b: complex, n: int = 50) -> DescentPath:
    ts = np.linspace(1.0, 0.0, n)
    zs = a + (b - a) * (1 - ts)
    return DescentPath(
        anchor=a,
        anchor_value=1 + 0j,
        ts=ts,
        zs=zs,
        endpoint_location=b,
        endpoint_kind="root",
    )


def test_unit_segment_crofton():
    path = _segment_path(0, 1)
    est = crofton_length(path, 3600)
    assert abs(est.length - 1.0) <= 5e-4
    assert est.theta_samples == 3600
    # the stored length is exactly the quarter-sum of the variations
    assert est.length == 0.25 * float(((2 * math.pi / 3600) * est.variations).sum())


def test_single_point_path_has_zero_length():
    path = DescentPath(
        anchor=0j,
        anchor_value=1 + 0j,
        ts=[1.0],
        zs=[0.25 + 0.25j],
        endpoint_location=0.25 + 0.25j,
        endpoint_kind="unresolved",
    )
    assert crofton_length(path, 720).length == 0.0


def test_crofton_matches_traced_branch():
    poly = FactoredPolynomial([(1, 1), (OMEGA, 1), (OMEGA.conjugate(), 1)])
    target = PolynomialTarget(poly)
    paths = trace_all_branches(target, (0, 2))
    for path in paths:
        est = crofton_length(path, 3600)
        assert abs(est.length - path.arc_length) <= 5e-3 * path.arc_length


def test_crofton_rigid_motion_invariance():
    rng = CounterRng(31)
    zs = np.cumsum([rng.complex_in_disk(0.2) for _ in range(40)])
    base = crofton_length(zs, 720).length
    for _ in range(5):
        shift = rng.complex_in_disk(5.0)
        # translation leaves the segment differences untouched: exact
        moved = crofton_length(zs + shift, 720).length
        assert abs(moved - base) <= 1e-9 * max(base, 1.0)
        # rotation shifts the integrand's kinks across the fixed theta grid,
        # so agreement is limited by the O(1/n^2) quadrature error
        rot = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        rotated = crofton_length(rot * zs + shift, 720).length
        assert abs(rotated - base) <= 2e-4 * max(base, 1.0)


def test_crossings_unit_segment():
    path = _segment_path(0, 1)
    profile = max_crossings(path, 90, 41)
    assert profile.max_count == 1
    assert profile.counts.shape == (90, 41)
    assert (profile.counts <= len(path.zs) - 1).all()


def test_crossings_real_branches_of_z2z1():
    poly = FactoredPolynomial([(0, 2), (1, 1)])
    target = PolynomialTarget(poly)
    paths = trace_all_branches(target, (2 / 3, 1))
    for path in paths:
        profile = max_crossings(path, 120, 60)
        assert profile.max_count == 1
        assert profile.max_count <= poly.degree


def test_bound_report_cube():
    poly = FactoredPolynomial([(1, 1), (OMEGA, 1), (OMEGA.conjugate(), 1)])
    target = PolynomialTarget(poly)
    hull = convex_hull([complex(a) for a in poly.locations])
    disk = smallest_enclosing_disk([complex(a) for a in poly.locations])
    assert abs(disk.radius - 1.0) < 1e-12
    for path in trace_all_branches(target, (0, 2)):
        report = verify_length_bounds(path, poly, hull, disk)
        assert abs(report.pi_n_r - math.pi * 3) < 1e-12
        assert abs(report.two_pi_s_r - 2 * math.pi * 3) < 1e-12
        assert report.length_le_pi_n_r
        assert report.endpoint_membership == "boundary"
        assert report.boundary_endpoint
        assert report.length_le_two_pi_s_r
        assert report.crossings_le_degree
        assert report.crossings_le_two_s
        assert report.anchor_in_hull


def test_crossing_counts_match_slow_reference():
    rng = CounterRng(515)
    for _ in range(3):
        zs = np.cumsum([rng.complex_in_disk(0.3) for _ in range(60)])
        path = DescentPath(
            anchor=zs[0],
            anchor_value=1 + 0j,
            ts=np.linspace(1, 0.01, len(zs)),
            zs=zs,
            endpoint_location=zs[-1],
            endpoint_kind="unresolved",
        )
        prof = max_crossings(path, 24, 17)
        ref = np.zeros_like(prof.counts)
        for k, th in enumerate(prof.thetas):
            proj = [(z * np.exp(-1j * th)).real for z in zs]
            for i, r in enumerate(prof.rs):
                ref[k, i] = sum(
                    (a - r) * (b - r) < 0 for a, b in zip(proj, proj[1:])
                )
        assert (prof.counts == ref).all()


def test_crossing_counts_bounded_by_degree_on_corpus():
    from polydescent.randomgen import polynomial_corpus
    from polydescent.tree import build_descent_tree

    for poly in polynomial_corpus(seed=606, count=12, max_s=6, max_degree=12):
        target = PolynomialTarget(poly)
        tree = build_descent_tree(target)
        for e in tree.edges:
            profile = max_crossings(e.path, 60, 40)
            assert profile.max_count <= poly.degree, (poly.roots, profile.max_count)


def test_bound_report_degenerate_hull():
    poly = FactoredPolynomial([(0, 2), (1, 1)])
    target = PolynomialTarget(poly)
    hull = convex_hull([complex(a) for a in poly.locations])
    disk = smallest_enclosing_disk([complex(a) for a in poly.locations])
    assert hull.degenerate
    assert abs(disk.radius - 0.5) < 1e-12
    paths = trace_all_branches(target, (2 / 3, 1))
    by_end = {round(p.endpoint_location.real): p for p in paths}
    report = verify_length_bounds(by_end[0], poly, hull, disk)
    # pi N R = 3 pi / 2; the 2/3-length path fits easily
    assert abs(report.pi_n_r - 1.5 * math.pi) < 1e-12
    assert report.length_le_pi_n_r
    # every point of a degenerate hull is boundary
    assert report.endpoint_membership == "boundary"
    assert report.length_le_two_pi_s_r
