"""Convex hull, smallest enclosing disk, and membership classification."""

from __future__ import annotations

import cmath
import math

import pytest

from polydescent import convex_hull, hull_membership, smallest_enclosing_disk
from polydescent.geometry import hull_signed_distance
from polydescent.randomgen import CounterRng


def test_hull_triangle():
    hull = convex_hull([-1, 1, 1j])
    assert not hull.degenerate
    assert set(hull.vertices) == {(-1 + 0j), (1 + 0j), 1j}
    # counterclockwise orientation: positive signed area
    area = 0.0
    v = hull.vertices
    for i in range(len(v)):
        a, b = v[i], v[(i + 1) % len(v)]
        area += a.real * b.imag - b.real * a.imag
    assert area > 0


def test_hull_segment_cases():
    hull = convex_hull([0, 1])
    assert hull.degenerate
    assert set(hull.vertices) == {0j, 1 + 0j}

    hull = convex_hull([0, 1, 0.5])  # collinear midpoint absorbed
    assert hull.degenerate
    assert set(hull.vertices) == {0j, 1 + 0j}


def test_enclosing_disk_desk_cases():
    d = smallest_enclosing_disk([-1, 1, 1j])
    assert abs(d.center) < 1e-12
    assert abs(d.radius - 1) < 1e-12

    d = smallest_enclosing_disk([0, 1])
    assert abs(d.center - 0.5) < 1e-12
    assert abs(d.radius - 0.5) < 1e-12

    w = cmath.exp(2j * math.pi / 3)
    d = smallest_enclosing_disk([1, w, w.conjugate()])
    assert abs(d.center) < 1e-12
    assert abs(d.radius - 1) < 1e-12


def test_enclosing_disk_bounds_on_random_inputs():
    rng = CounterRng(5)
    for trial in range(50):
        pts = [rng.complex_in_disk(2.0) for _ in range(2 + trial % 9)]
        d = smallest_enclosing_disk(pts)
        maxpair = max(abs(p - q) for p in pts for q in pts)
        assert d.radius <= maxpair + 1e-12
        assert d.radius >= maxpair / 2 - 1e-12
        for p in pts:
            assert abs(p - d.center) <= d.radius * (1 + 1e-12) + 1e-12


def test_membership_desk_cases():
    hull = convex_hull([-1, 1, 1j])
    assert hull_membership(hull, 0.1 + 0.1j) == "interior"
    assert hull_membership(hull, 1j) == "boundary"
    assert hull_membership(hull, 2) == "exterior"

    seg = convex_hull([0, 1])
    assert hull_membership(seg, 0.5) == "boundary"
    assert hull_membership(seg, 0.5 + 0.1j) == "exterior"


def test_membership_rigid_motion_invariance():
    rng = CounterRng(17)
    base = [rng.complex_in_disk(1.0) for _ in range(7)]
    probes = [rng.complex_in_disk(1.5) for _ in range(25)]
    hull = convex_hull(base)
    baseline = [hull_membership(hull, z) for z in probes]
    for _ in range(10):
        rot = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        shift = rng.complex_in_disk(3.0)
        moved_hull = convex_hull([rot * p + shift for p in base])
        moved = [hull_membership(moved_hull, rot * z + shift) for z in probes]
        # classifications may only flip inside the tolerance band; compare
        # signed distances instead, which must be rigid-motion invariant
        for z, m0, m1 in zip(probes, baseline, moved):
            d0 = hull_signed_distance(hull, z)
            d1 = hull_signed_distance(moved_hull, rot * z + shift)
            assert abs(d0 - d1) < 1e-9
            if abs(d0) > 1e-8:
                assert m0 == m1


def test_own_roots_never_exterior():
    rng = CounterRng(23)
    for _ in range(30):
        pts = [rng.complex_in_disk(1.0) for _ in range(2 + rng.integer(6))]
        hull = convex_hull(pts)
        for p in pts:
            assert hull_membership(hull, p) != "exterior"


def test_vectorized_signed_distances_match_scalar():
    import numpy as np

    from polydescent.geometry import hull_signed_distances

    rng = CounterRng(41)
    for pts in ([-1, 1, 1j], [0, 1], [0.5 + 0.5j]):
        hull = convex_hull(pts)
        zs = np.array([rng.complex_in_disk(2.0) for _ in range(40)])
        vec = hull_signed_distances(hull, zs)
        ref = np.array([hull_signed_distance(hull, z) for z in zs])
        assert np.abs(vec - ref).max() < 1e-14


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        convex_hull([])
    with pytest.raises(ValueError):
        smallest_enclosing_disk([])
