"""Descent-tree assembly, verification, and routing."""

from __future__ import annotations

import cmath
import math

import pytest

from polydescent import FactoredPolynomial, PolynomialTarget
from polydescent.randomgen import polynomial_corpus
from polydescent.tree import (
    DescentTree,
    TreeEdge,
    build_descent_tree,
    to_dot,
    tree_route,
    verify_tree,
)

OMEGA = cmath.exp(2j * math.pi / 3)


@pytest.fixture(scope="module")
def cube_tree():
    poly = FactoredPolynomial([(1, 1), (OMEGA, 1), (OMEGA.conjugate(), 1)])
    return build_descent_tree(PolynomialTarget(poly))


def test_cube_tree_shape(cube_tree):
    tree = cube_tree
    assert len(tree.vertices) == 4
    assert len(tree.edges) == 3
    kinds = sorted(v.kind for v in tree.vertices)
    assert kinds == ["critical", "root", "root", "root"]
    crit = [i for i, v in enumerate(tree.vertices) if v.kind == "critical"][0]
    assert abs(tree.vertices[crit].location) < 1e-9
    for e in tree.edges:
        assert e.source == crit
        assert tree.vertices[e.target].kind == "root"
        assert abs(e.path.arc_length - 1.0) < 1e-6
    assert len({e.target for e in tree.edges}) == 3


def test_cube_tree_verifies(cube_tree):
    report = verify_tree(cube_tree)
    assert report.edge_count == 3
    assert report.expected_edge_count == 3
    assert report.vertex_count == 4
    assert report.connected
    assert report.acyclic
    assert report.passed
    assert report.duplicate_branch_targets == ()


def test_pm1_tree():
    poly = FactoredPolynomial([(-1, 1), (1, 1)])
    tree = build_descent_tree(PolynomialTarget(poly))
    assert len(tree.vertices) == 3
    assert len(tree.edges) == 2
    assert verify_tree(tree).passed


def test_z2z1_tree():
    poly = FactoredPolynomial([(0, 2), (1, 1)])
    tree = build_descent_tree(PolynomialTarget(poly))
    locs = sorted((v.location.real, v.kind) for v in tree.vertices)
    assert [k for _, k in locs] == ["root", "critical", "root"]
    lengths = sorted(e.path.arc_length for e in tree.edges)
    assert abs(lengths[0] - 1 / 3) < 1e-6
    assert abs(lengths[1] - 2 / 3) < 1e-6
    assert verify_tree(tree).passed


def test_duplicated_edge_detected_as_cycle(cube_tree):
    tree = cube_tree
    e = tree.edges[0]
    broken = DescentTree(
        list(tree.vertices),
        list(tree.edges) + [TreeEdge(e.source, e.target, 99, e.path)],
        tree.scale,
    )
    report = verify_tree(broken)
    assert not report.acyclic
    assert report.edge_count != report.expected_edge_count
    assert not report.passed


def test_route_pm1(cube_tree):
    poly = FactoredPolynomial([(-1, 1), (1, 1)])
    tree = build_descent_tree(PolynomialTarget(poly))
    i_minus = tree.vertex_index(-1)
    i_plus = tree.vertex_index(1)
    route = tree_route(tree, i_minus, i_plus)
    assert abs(route.length - 2.0) < 1e-5
    assert abs(route.peak_abs_value - 1.0) < 1e-12
    assert len(route.critical_indices) == 1
    # polyline runs -1 -> 0 -> 1
    assert abs(route.zs[0] - (-1)) < 1e-12
    assert abs(route.zs[-1] - 1) < 1e-12


def test_route_cube(cube_tree):
    tree = cube_tree
    a = tree.vertex_index(1)
    b = tree.vertex_index(OMEGA)
    route = tree_route(tree, a, b)
    assert abs(route.length - 2.0) < 1e-5
    assert abs(route.peak_abs_value - 1.0) < 1e-12


def test_route_z2z1():
    poly = FactoredPolynomial([(0, 2), (1, 1)])
    tree = build_descent_tree(PolynomialTarget(poly))
    route = tree_route(tree, tree.vertex_index(0), tree.vertex_index(1))
    assert abs(route.length - 1.0) < 1e-5
    assert abs(route.peak_abs_value - 4 / 27) < 1e-12


def test_route_peak_value_at_middle_critical(cube_tree):
    # the two-edge route attains max |f| exactly at its critical vertex
    tree = cube_tree
    a = tree.vertex_index(1)
    b = tree.vertex_index(OMEGA.conjugate())
    route = tree_route(tree, a, b)
    crit = tree.vertices[route.critical_indices[0]]
    assert abs(crit.location) < 1e-9
    assert abs(route.peak_abs_value - 1.0) <= 1e-9


def test_route_validation(cube_tree):
    tree = cube_tree
    crit = [i for i, v in enumerate(tree.vertices) if v.kind == "critical"][0]
    root = [i for i, v in enumerate(tree.vertices) if v.kind == "root"][0]
    with pytest.raises(ValueError):
        tree_route(tree, crit, root)  # source must be a root vertex
    with pytest.raises(ValueError):
        tree_route(tree, root, root)
    with pytest.raises(ValueError):
        tree_route(tree, root, 99)


def test_dot_export(cube_tree):
    dot = to_dot(cube_tree)
    assert dot.startswith("graph descent_tree {")
    assert "r0" in dot and "c0" in dot
    assert dot.count(" -- ") == 3


@pytest.mark.parametrize("order", [4, 5, 6])
def test_symmetric_fan_trees(order):
    # all critical mass at the origin: one fan of `order` unit spokes
    poly = FactoredPolynomial(
        [(cmath.exp(2j * math.pi * k / order), 1) for k in range(order)]
    )
    tree = build_descent_tree(PolynomialTarget(poly))
    report = verify_tree(tree)
    assert report.edge_count == order
    assert report.passed, report
    for e in tree.edges:
        assert abs(e.path.arc_length - 1.0) < 1e-6


def test_high_multiplicity_root_tree():
    poly = FactoredPolynomial([(0, 4), (1, 1)])  # f' has its free zero at 4/5
    tree = build_descent_tree(PolynomialTarget(poly))
    crit = [v for v in tree.vertices if v.kind == "critical"]
    assert len(crit) == 1
    assert abs(crit[0].location - 0.8) < 1e-12
    lengths = sorted(e.path.arc_length for e in tree.edges)
    assert abs(lengths[0] - 0.2) < 1e-6
    assert abs(lengths[1] - 0.8) < 1e-6
    assert verify_tree(tree).passed


def test_random_corpus_trees():
    for poly in polynomial_corpus(seed=88, count=15, max_s=6, max_degree=12):
        tree = build_descent_tree(PolynomialTarget(poly))
        report = verify_tree(tree)
        assert report.edge_count == report.expected_edge_count
        assert report.connected
        assert report.acyclic
        assert report.passed, report
        # distinct branches from one critical point reach distinct vertices
        assert report.duplicate_branch_targets == ()
