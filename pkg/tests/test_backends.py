"""Parity between the compiled kernel lane and the pure-Python lane."""

from __future__ import annotations

import numpy as np
import pytest

from polydescent import FactoredPolynomial, PolynomialTarget
from polydescent.backend import available_backends
from polydescent.blaschke import BlaschkeTarget, make_blaschke
from polydescent.randomgen import CounterRng

LANES = available_backends()

needs_compiled = pytest.mark.skipif(
    "compiled" not in LANES, reason="compiled extension not built"
)


@needs_compiled
def test_lane_flags():
    assert LANES["pure"].COMPILED is False
    assert LANES["compiled"].COMPILED is True
    for name in (
        "poly_value",
        "poly_logderiv",
        "blaschke_value",
        "blaschke_logderiv",
        "target_value",
        "target_logderiv",
        "newton_correct",
        "trace_core",
    ):
        assert hasattr(LANES["pure"], name)
        assert hasattr(LANES["compiled"], name)


@needs_compiled
def test_scalar_evaluation_parity():
    rng = CounterRng(404)
    pure, comp = LANES["pure"], LANES["compiled"]
    for _ in range(50):
        n = 2 + rng.integer(5)
        locs = np.array([rng.complex_in_disk(1.0) for _ in range(n)])
        mults = np.array([1 + rng.integer(3) for _ in range(n)], dtype=np.int64)
        z = rng.complex_in_disk(2.0)
        a = pure.poly_value(locs, mults, z)
        b = comp.poly_value(locs, mults, z)
        assert abs(a - b) <= 1e-13 * max(abs(a), 1e-300)
        if min(abs(z - l) for l in locs) > 1e-6:
            a = pure.poly_logderiv(locs, mults, z)
            b = comp.poly_logderiv(locs, mults, z)
            assert abs(a - b) <= 1e-12 * max(abs(a), 1.0)


@needs_compiled
def test_high_degree_log_sum_parity():
    pure, comp = LANES["pure"], LANES["compiled"]
    locs = np.array([-1.0 + 0j, 1.0 + 0j, 0.5j])
    mults = np.array([16, 16, 1], dtype=np.int64)
    for z in (0.3 + 0.2j, 2.0 - 1.0j):
        a = pure.poly_value(locs, mults, z)
        b = comp.poly_value(locs, mults, z)
        assert abs(a - b) <= 1e-12 * abs(a)


@needs_compiled
def test_blaschke_evaluation_parity():
    rng = CounterRng(405)
    pure, comp = LANES["pure"], LANES["compiled"]
    locs = np.array([0j, 0.5 + 0j, -0.3 + 0.4j])
    mults = np.array([1, 2, 1], dtype=np.int64)
    c = 0.6 + 0.8j
    for _ in range(25):
        z = rng.complex_in_disk(0.95)
        a = pure.blaschke_value(locs, mults, c, z)
        b = comp.blaschke_value(locs, mults, c, z)
        assert abs(a - b) <= 1e-13 * max(abs(a), 1e-30)
        if min(abs(z - l) for l in locs) > 1e-6:
            a = pure.blaschke_logderiv(locs, mults, z)
            b = comp.blaschke_logderiv(locs, mults, z)
            assert abs(a - b) <= 1e-12 * max(abs(a), 1.0)


@needs_compiled
def test_newton_parity():
    pure, comp = LANES["pure"], LANES["compiled"]
    locs = np.array([-1.0 + 0j, 1.0 + 0j])
    mults = np.array([1, 1], dtype=np.int64)
    za, oka = pure.newton_correct(0, locs, mults, 1 + 0j, 0.4, -0.8, 1e-13, 12)
    zb, okb = comp.newton_correct(0, locs, mults, 1 + 0j, 0.4, -0.8, 1e-13, 12)
    assert oka and okb
    assert abs(za - zb) < 1e-12


def _trace_with(lane, target, t0, z0, anchor_value):
    return lane.trace_core(
        target.kind,
        target.locations,
        target.multiplicities,
        target.constant,
        anchor_value,
        t0,
        z0,
        target.sp_locs,
        target.sp_is_root,
        target.sp_vals,
        0.01 * target.scale,
        0.25,
        1e-12,
        8,
        1e-14,
        1e-12,
        1e-8 * target.scale,
        1e-7 * target.scale,
        1e-7,
        1e-2 * target.scale,
        1e-12,
        target.domain_kind,
        200_000,
    )


@needs_compiled
def test_trace_parity_polynomial():
    poly = FactoredPolynomial([(-1, 1), (1, 1), (0.2 + 0.9j, 2)])
    target = PolynomialTarget(poly)
    beta = 0.1 + 0.1j
    w = target.value(beta)
    results = {}
    for name, lane in LANES.items():
        ts, zs, status, endpoint = _trace_with(lane, target, 1.0, beta, w)
        results[name] = (np.array(ts), np.array(zs), status, endpoint)
    ta, za, sa, ea = results["pure"]
    tb, zb, sb, eb = results["compiled"]
    assert sa == sb
    assert ea == eb
    # same endpoint and closely matching terminal state; step-by-step samples
    # may differ in the last bits of float arithmetic
    assert abs(za[-1] - zb[-1]) < 1e-9 * target.scale
    la = np.abs(np.diff(za)).sum()
    lb = np.abs(np.diff(zb)).sum()
    assert abs(la - lb) < 1e-9 * max(la, 1.0)


@needs_compiled
def test_trace_parity_blaschke():
    b = make_blaschke([(0, 1), (0.5, 1), (-0.3 + 0.2j, 1)])
    target = BlaschkeTarget(b)
    beta = 0.2 - 0.35j
    w = target.value(beta)
    outs = {}
    for name, lane in LANES.items():
        ts, zs, status, endpoint = _trace_with(lane, target, 1.0, beta, w)
        outs[name] = (np.array(zs), status, endpoint)
    za, sa, ea = outs["pure"]
    zb, sb, eb = outs["compiled"]
    assert sa == sb
    assert ea == eb
    assert abs(za[-1] - zb[-1]) < 1e-9
