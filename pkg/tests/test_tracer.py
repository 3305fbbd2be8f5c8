"""Descent-path tracing against closed-form and bisection oracles."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from polydescent import (
    FactoredPolynomial,
    PolynomialTarget,
    TraceSettings,
    arc_length,
    descent_directions,
    trace_all_branches,
    trace_descent,
)
from polydescent.randomgen import polynomial_corpus
from polydescent.tracer import min_interior_separation

OMEGA = cmath.exp(2j * math.pi / 3)

P_PM1 = FactoredPolynomial([(-1, 1), (1, 1)])
P_CUBE = FactoredPolynomial([(1, 1), (OMEGA, 1), (OMEGA.conjugate(), 1)])
P_Z2Z1 = FactoredPolynomial([(0, 2), (1, 1)])


@pytest.fixture(scope="module")
def t_pm1():
    return PolynomialTarget(P_PM1)


@pytest.fixture(scope="module")
def t_cube():
    return PolynomialTarget(P_CUBE)


@pytest.fixture(scope="module")
def t_z2z1():
    return PolynomialTarget(P_Z2Z1)


def assert_path_invariants(target, path):
    """Residual, monotone |f|, and step-cap invariants of a sampled path."""
    w = path.anchor_value
    values = np.array([target.value(z) for z in path.zs])
    resid = np.abs(values - path.ts * w)
    bound = 1e-9 * np.maximum(abs(w), np.abs(values))
    assert (resid <= bound + 1e-300).all()
    mods = np.abs(values)
    assert (np.diff(mods) < 0).all()
    gaps = np.abs(np.diff(path.zs))
    assert gaps.max() <= 0.01 * target.scale * (1 + 1e-9)
    assert (np.diff(path.ts) < 0).all()


def test_trace_to_root_straight_line(t_pm1):
    # closed form z(t) = sqrt(1 - 0.75 t): from 0.5 to root 1 along the reals
    path = trace_descent(t_pm1, 0.5)
    assert path.endpoint_kind == "root"
    assert path.endpoint_location == 1
    assert abs(path.arc_length - 0.5) < 1e-6
    assert np.abs(path.zs.imag).max() < 1e-9
    for t, z in zip(path.ts, path.zs):
        assert abs(z - math.sqrt(1 - 0.75 * t)) < 1e-9
    assert_path_invariants(t_pm1, path)


def test_trace_into_critical_point(t_pm1):
    # closed form z(t) = i sqrt(2t - 1): from i straight into the saddle at 0
    path = trace_descent(t_pm1, 1j)
    assert path.endpoint_kind == "critical"
    assert path.endpoint_location == 0
    assert abs(path.arc_length - 1.0) < 1e-6
    assert abs(path.ts[-1] - 0.5) < 1e-9
    assert np.abs(path.zs.real).max() < 1e-9  # stays on the imaginary axis
    for t, z in zip(path.ts, path.zs):
        if abs(z) < 1e-5:
            continue  # positional conditioning ~ 1/|f'| collapses at the saddle
        tol = 1e-9 + 4e-12 / abs(z)
        assert abs(z - 1j * math.sqrt(max(2 * t - 1, 0.0))) < tol
    assert_path_invariants(t_pm1, path)


def test_trace_along_ray_to_omega(t_cube):
    # closed form z(t) = omega (1 - t (1 - 0.125))**(1/3)
    path = trace_descent(t_cube, 0.5 * OMEGA)
    assert path.endpoint_kind == "root"
    assert abs(path.endpoint_location - OMEGA) < 1e-12
    assert abs(path.arc_length - 0.5) < 1e-6
    for t, z in zip(path.ts, path.zs):
        oracle = OMEGA * (1 - t * (1 - 0.125)) ** (1 / 3)
        assert abs(z - oracle) < 1e-9
    assert_path_invariants(t_cube, path)


def test_trace_rejects_bad_anchors(t_pm1):
    with pytest.raises(ValueError):
        trace_descent(t_pm1, 1)  # a root
    with pytest.raises(ValueError):
        trace_descent(t_pm1, 0)  # the critical point


def test_directions_symmetric_pair(t_pm1):
    seeds = descent_directions(t_pm1, (0, 1))
    assert len(seeds) == 2
    dirs = sorted((s.direction for s in seeds), key=lambda d: d.real)
    assert abs(dirs[0] + 1) < 1e-9
    assert abs(dirs[1] - 1) < 1e-9


def test_directions_cube(t_cube):
    seeds = descent_directions(t_cube, (0, 2))
    assert len(seeds) == 3
    phases = sorted(cmath.phase(s.direction) % (2 * math.pi) for s in seeds)
    expected = [0.0, 2 * math.pi / 3, 4 * math.pi / 3]
    for got, want in zip(phases, expected):
        assert abs(got - want) < 1e-7
    # pairwise gaps exactly 2 pi / ell up to representation error
    gaps = np.diff(phases + [phases[0] + 2 * math.pi])
    assert np.abs(gaps - 2 * math.pi / 3).max() < 1e-12


def test_directions_z2z1(t_z2z1):
    seeds = descent_directions(t_z2z1, (2 / 3, 1))
    dirs = sorted((s.direction for s in seeds), key=lambda d: d.real)
    assert abs(dirs[0] + 1) < 1e-7
    assert abs(dirs[1] - 1) < 1e-7


def test_branches_cube_three_unit_spokes(t_cube):
    paths = trace_all_branches(t_cube, (0, 2))
    assert len(paths) == 3
    ends = set()
    for path in paths:
        assert path.endpoint_kind == "root"
        ends.add(complex(path.endpoint_location))
        assert abs(path.arc_length - 1.0) < 1e-6
        # straight spokes: every sample lies on the ray to the endpoint
        ray = path.endpoint_location / abs(path.endpoint_location)
        devs = np.abs(path.zs - ray * np.abs(path.zs))
        assert devs.max() < 1e-6
        assert_path_invariants(t_cube, path)
    assert len(ends) == 3


def _bisect_real(fn, lo, hi, target, iters=200):
    flo = fn(lo) - target
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fn(mid) - target
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_branches_z2z1_bisection_oracle(t_z2z1):
    # descent from 2/3 stays on the real axis; x(t) solves x^2(x-1) = -4t/27
    paths = trace_all_branches(t_z2z1, (2 / 3, 1))
    assert len(paths) == 2
    by_end = {round(path.endpoint_location.real): path for path in paths}
    assert set(by_end) == {0, 1}

    g = lambda x: x * x * (x - 1)

    def tol(z):
        # corrector residual 1e-12|w| maps to position error via 1/|f'|
        fprime = abs(z) * abs(3 * z - 2)
        return 1e-9 + 3e-13 / max(fprime, 3e-13)

    path0 = by_end[0]
    assert abs(path0.arc_length - 2 / 3) < 1e-6
    for t, z in list(zip(path0.ts, path0.zs))[1:]:
        if t <= 0:
            continue  # appended endpoint sample, checked via by_end
        x = _bisect_real(g, 0.0, 2 / 3, -4 * t / 27)
        assert abs(z - x) < tol(z)

    path1 = by_end[1]
    assert abs(path1.arc_length - 1 / 3) < 1e-6
    for t, z in list(zip(path1.ts, path1.zs))[1:]:
        if t <= 0:
            continue
        x = _bisect_real(g, 1.0, 2 / 3, -4 * t / 27)
        assert abs(z - x) < tol(z)

    for path in paths:
        assert_path_invariants(t_z2z1, path)


def test_branches_pm1(t_pm1):
    paths = trace_all_branches(t_pm1, (0, 1))
    assert {complex(p.endpoint_location) for p in paths} == {-1 + 0j, 1 + 0j}
    for path in paths:
        assert abs(path.arc_length - 1.0) < 1e-6


def test_initial_tangents_match_seed_directions(t_cube, t_z2z1):
    for target, crit in ((t_cube, (0, 2)), (t_z2z1, (2 / 3, 1))):
        seeds = descent_directions(target, crit)
        paths = trace_all_branches(target, crit)
        for seed, path in zip(seeds, paths):
            tangent = path.zs[1] - path.zs[0]
            ang = abs(cmath.phase(tangent / seed.direction))
            assert ang < 1e-3


def test_continue_through_critical(t_pm1):
    settings = TraceSettings(continue_through_critical=True)
    path = trace_descent(t_pm1, 1j, settings)
    assert path.endpoint_kind == "root"
    # i -> 0 -> one of the two roots, each leg of length 1
    assert abs(path.arc_length - 2.0) < 1e-5
    assert complex(path.endpoint_location) in {-1 + 0j, 1 + 0j}


def test_arc_length_two_samples():
    from polydescent.tracer import DescentPath

    path = DescentPath(
        anchor=0j,
        anchor_value=1 + 0j,
        ts=[1.0, 0.0],
        zs=[0j, 1 + 0j],
        endpoint_location=1 + 0j,
        endpoint_kind="root",
    )
    assert arc_length(path) == 1.0


def test_unresolved_reported_not_silently_accepted(t_pm1):
    # impossible budget: the stepper must refuse rather than fabricate a path
    from polydescent.errors import StalledCorrection

    settings = TraceSettings(max_steps=3)
    with pytest.raises(StalledCorrection):
        trace_descent(t_pm1, 0.5 + 0.5j, settings)


def test_trace_from_outside_the_hull(t_pm1):
    # anchors outside the hull are legal; no containment claim applies
    path = trace_descent(t_pm1, 3.0)
    assert path.endpoint_kind == "root"
    assert path.endpoint_location == 1
    assert abs(path.arc_length - 2.0) < 1e-6
    assert_path_invariants(t_pm1, path)


def test_mixed_multiplicity_tree():
    from polydescent.tree import build_descent_tree, verify_tree

    poly = FactoredPolynomial([(-0.5, 2), (0.5, 3)])
    target = PolynomialTarget(poly)
    tree = build_descent_tree(target)
    report = verify_tree(tree)
    assert report.passed, report
    # one free critical zero between the roots: f'/f = 2/(z+.5)+3/(z-.5)
    crit = [v for v in tree.vertices if v.kind == "critical"]
    assert len(crit) == 1
    assert abs(crit[0].location - (-0.1)) < 1e-12
    for e in tree.edges:
        assert_path_invariants(target, e.path)


def test_random_corpus_residuals_and_endpoints():
    polys = polynomial_corpus(seed=300, count=10, max_s=5, max_degree=8)
    for poly in polys:
        target = PolynomialTarget(poly)
        for loc, m in target.criticals.points:
            for path in trace_all_branches(target, (loc, m)):
                assert_path_invariants(target, path)
                assert path.endpoint_kind in ("root", "critical")
                d = np.abs(target.sp_locs - path.endpoint_location).min()
                assert d <= 1e-8 * target.scale


def test_cross_validation_against_adaptive_ode_integration():
    # independent reference: integrate dz/dt = w/f'(z) with scipy RK45 and
    # compare endpoint and (tail-corrected) length; the reference stops at
    # t=1e-9, sitting (t w / g)^(1/n) short of a multiplicity-n root
    from scipy.integrate import solve_ivp

    from polydescent.randomgen import polynomial_corpus

    def ode_trace(target, beta):
        w = target.value(beta)

        def rhs(t, y):
            z = complex(y[0], y[1])
            dz = w / (target.value(z) * target.log_derivative(z))
            return [dz.real, dz.imag]

        sol = solve_ivp(
            rhs,
            (1.0, 1e-9),
            [beta.real, beta.imag],
            rtol=1e-11,
            atol=1e-13,
            max_step=0.01,
        )
        zs = sol.y[0] + 1j * sol.y[1]
        return zs, float(np.abs(np.diff(zs)).sum())

    checked = 0
    for poly in polynomial_corpus(seed=777, count=8, max_s=5, max_degree=8, max_mult=2):
        target = PolynomialTarget(poly)
        beta = complex(target.disk.center) + 0.37 * target.disk.radius * cmath.exp(0.6j)
        if abs(target.value(beta)) < 1e-6 or np.abs(target.sp_locs - beta).min() < 0.05:
            continue
        path = trace_descent(target, beta)
        if path.endpoint_kind != "root":
            continue
        zs_ode, len_ode = ode_trace(target, beta)
        hop = abs(zs_ode[-1] - path.endpoint_location)
        assert hop < 1e-4 * target.scale  # both ended at the same root
        assert abs(len_ode + hop - path.arc_length) <= 1e-5 * path.arc_length
        checked += 1
    assert checked >= 5


def test_interior_separation_excludes_shared_vertices(t_cube):
    paths = trace_all_branches(t_cube, (0, 2))
    d = min_interior_separation(paths[0], paths[1], t_cube.scale)
    # spokes at 120 degrees separate quickly away from the shared anchor
    assert d > 0.05
