"""Shared corpus fixtures.

The acceptance corpus (seed 42) is traced once per session and reused by
every criterion that does not time its own tracing.
"""

from __future__ import annotations

import pytest

from polydescent import PolynomialTarget, convex_hull
from polydescent.randomgen import blaschke_corpus, polynomial_corpus
from polydescent.tree import build_descent_tree


@pytest.fixture(scope="session")
def corpus200():
    return polynomial_corpus(seed=42, count=200, max_s=6, max_degree=12, max_mult=4)


@pytest.fixture(scope="session")
def corpus_trees(corpus200):
    out = []
    for poly in corpus200:
        target = PolynomialTarget(poly)
        tree = build_descent_tree(target)
        hull = convex_hull([complex(a) for a in poly.locations])
        out.append((poly, target, tree, hull))
    return out


@pytest.fixture(scope="session")
def blaschke100():
    return blaschke_corpus(seed=42, count=100, max_s=5, max_mult=3)
