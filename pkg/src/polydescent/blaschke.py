"""Finite Blaschke products on the unit disk: construction, evaluation,
critical points, and descent-tree analysis with the 2*pi*N length bound.

Products are normalized so that f(0) = 0 (zero at the origin required) and
f(1) = 1 (unimodular constant fixed by the zeros).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .backend import kernels
from .errors import EvaluationDomainError, PolydescentError
from .poly import CriticalPointSet, _aberth_roots, _cluster_zeros
from .targets import CRITICAL, ROOT, AnalyticTarget, SpecialPoint
from .tracer import TraceSettings
from .tree import DescentTree, TreeReport, build_descent_tree, verify_tree
from .crofton import crofton_length, max_crossings

# Zeros must stay pairwise farther apart than this (the disk has scale 1).
SEPARATION_TOL = 1e-9


class BlaschkeProduct:
    """c * prod ((z - a_j)/(1 - conj(a_j) z))**n_j with zeros a_j in the disk."""

    __slots__ = ("zeros", "constant", "locations", "multiplicities", "s", "degree")

    def __init__(self, zeros: Sequence[tuple[complex, int]], constant: complex):
        self.zeros = tuple((complex(z), int(m)) for z, m in zeros)
        self.constant = complex(constant)
        self.locations = np.array([z for z, _ in self.zeros], dtype=np.complex128)
        self.multiplicities = np.array([m for _, m in self.zeros], dtype=np.int64)
        self.s = len(self.zeros)
        self.degree = int(self.multiplicities.sum())

    def __repr__(self) -> str:
        inner = ", ".join(f"({z}, {m})" for z, m in self.zeros)
        return f"BlaschkeProduct([{inner}], c={self.constant})"

    @classmethod
    def from_json_dict(cls, data: dict) -> "BlaschkeProduct":
        from .poly import _strict_int

        try:
            zeros = [
                (complex(float(r["re"]), float(r["im"])), _strict_int(r["mult"]))
                for r in data["zeros"]
            ]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed Blaschke JSON: {exc}") from exc
        return make_blaschke(zeros)

    @classmethod
    def from_file(cls, path: str) -> "BlaschkeProduct":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))

    def to_json_dict(self) -> dict:
        return {
            "zeros": [
                {"re": z.real, "im": z.imag, "mult": m} for z, m in self.zeros
            ]
        }


def make_blaschke(zeros: Sequence[tuple[complex, int]]) -> BlaschkeProduct:
    """Build the normalized product: requires a zero at 0, zeros inside the
    open disk, and fixes c = (prod ((1 - a_j)/(1 - conj(a_j)))**n_j)^{-1}
    so that f(1) = 1 with |c| = 1."""
    items = [(complex(z), int(m)) for z, m in zeros]
    if len(items) < 2:
        raise ValueError("need at least two distinct zeros")
    has_origin = False
    for z, m in items:
        if m < 1:
            raise ValueError(f"multiplicity must be >= 1, got {m}")
        if abs(z) >= 1.0:
            raise ValueError(f"zero {z} is not inside the open unit disk")
        if abs(z) <= SEPARATION_TOL:
            has_origin = True
    if not has_origin:
        raise ValueError("normalization requires a zero at the origin")
    items = [((0j if abs(z) <= SEPARATION_TOL else z), m) for z, m in items]
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if abs(items[i][0] - items[j][0]) <= SEPARATION_TOL:
                raise ValueError(
                    f"zeros {items[i][0]} and {items[j][0]} are not distinct"
                )
    c = 1 + 0j
    for z, m in items:
        factor = (1 - z) / (1 - z.conjugate())
        for _ in range(m):
            c *= factor
    c = 1 / c
    if abs(abs(c) - 1.0) > 1e-12:
        raise PolydescentError(f"normalizing constant not unimodular: |c|={abs(c)}")
    return BlaschkeProduct(items, c)


def blaschke_eval(b: BlaschkeProduct, z: complex) -> complex:
    """Product-form value; rejects the poles 1/conj(a_j)."""
    z = complex(z)
    nonzero = b.locations[np.abs(b.locations) > 0]
    if nonzero.size:
        poles = 1.0 / np.conj(nonzero)
        if np.abs(z - poles).min() <= SEPARATION_TOL:
            raise EvaluationDomainError(f"{z} is a pole of the product")
    return kernels.blaschke_value(b.locations, b.multiplicities, b.constant, z)


def blaschke_log_derivative(b: BlaschkeProduct, z: complex) -> complex:
    """sum n_j (1 - |a_j|^2) / ((z - a_j)(1 - conj(a_j) z))."""
    z = complex(z)
    if np.abs(z - b.locations).min() <= SEPARATION_TOL:
        raise EvaluationDomainError(
            f"log derivative undefined within {SEPARATION_TOL:.1e} of a zero"
        )
    return kernels.blaschke_logderiv(b.locations, b.multiplicities, z)


def _logderiv_numerator_coeffs(b: BlaschkeProduct) -> np.ndarray:
    """Ascending coefficients of sum n_j (1-|a_j|^2) prod_{k!=j} (z-a_k)(1-conj(a_k) z)."""
    s = b.s
    acc = np.zeros(2 * s - 1, dtype=np.complex128)
    for j in range(s):
        term = np.array([1.0 + 0j])
        for k in range(s):
            if k == j:
                continue
            a = complex(b.locations[k])
            quad = np.array([-a, 1.0 + abs(a) ** 2, -a.conjugate()])
            term = np.convolve(term, quad)
        weight = int(b.multiplicities[j]) * (1.0 - abs(complex(b.locations[j])) ** 2)
        acc[: len(term)] += weight * term
    return acc


def blaschke_critical_points(b: BlaschkeProduct) -> CriticalPointSet:
    """In-disk zeros of the logarithmic-derivative numerator.

    The numerator has degree at most 2s-2; zeros outside the closed disk are
    the reflected partners and are discarded.  The in-disk multiplicities
    must sum to s-1.
    """
    coeffs = _logderiv_numerator_coeffs(b)
    mags = np.abs(coeffs)
    coeffs = np.where(mags < 1e-14 * mags.max(), 0, coeffs)
    # descending order for the solver, trimming the vanished leading terms
    desc = coeffs[::-1]
    nz = np.nonzero(desc)[0]
    if nz.size == 0:
        raise PolydescentError("logarithmic-derivative numerator is zero")
    desc = desc[nz[0] :]
    zeros = _aberth_roots(desc)

    # Newton polish on the coefficient form; steps beyond the cluster radius
    # are cancellation noise on an already-converged zero
    deriv = np.polyder(desc)
    polished = []
    for z in zeros:
        z = complex(z)
        for _ in range(30):
            dv = complex(np.polyval(deriv, z))
            if dv == 0:
                break
            step = complex(np.polyval(desc, z)) / dv
            if not (abs(step) <= 1e-7):
                break
            z = z - step
            if abs(step) <= 1e-16 * (1.0 + abs(z)):
                break
        polished.append(z)

    in_disk = [z for z in polished if abs(z) < 1.0]
    clusters = _cluster_zeros(np.array(in_disk, dtype=np.complex128), 1e-7)
    total = sum(m for _, m in clusters)
    if total != b.s - 1:
        raise PolydescentError(
            f"in-disk critical multiplicities sum to {total}, expected {b.s - 1}"
        )
    for z, _ in clusters:
        if np.abs(z - b.locations).min() <= SEPARATION_TOL:
            raise PolydescentError(f"critical point {z} collides with a zero")
    return CriticalPointSet(tuple(clusters))


class BlaschkeTarget(AnalyticTarget):
    """Blaschke product wrapped for the tracer: unit scale, open-disk domain."""

    domain_kind = 1
    kind = kernels.KIND_BLASCHKE

    def __init__(
        self, b: BlaschkeProduct, criticals: CriticalPointSet | None = None
    ):
        self.product = b
        self.locations = b.locations
        self.multiplicities = b.multiplicities
        self.constant = b.constant
        self.scale = 1.0
        self.criticals = (
            criticals if criticals is not None else blaschke_critical_points(b)
        )
        specials = [
            SpecialPoint(complex(z), ROOT, int(m)) for z, m in b.zeros
        ] + [
            SpecialPoint(complex(z), CRITICAL, int(m))
            for z, m in self.criticals.points
        ]
        super().__init__(specials)

    def derivative(self, z: complex) -> complex:
        z = complex(z)
        b = self.product
        if np.abs(z - b.locations).min() > SEPARATION_TOL:
            return self.value(z) * self.log_derivative(z)
        total = 0j
        for j in range(b.s):
            aj = complex(b.locations[j])
            dbj = (1.0 - abs(aj) ** 2) / (1.0 - aj.conjugate() * z) ** 2
            term = int(b.multiplicities[j]) * dbj
            for k in range(b.s):
                ak = complex(b.locations[k])
                e = int(b.multiplicities[k]) - (1 if k == j else 0)
                factor = (z - ak) / (1.0 - ak.conjugate() * z)
                for _ in range(e):
                    term *= factor
            total += term
        return b.constant * total


@dataclass(frozen=True)
class BlaschkeEdgeReport:
    source: int
    target: int
    arc_length: float
    crofton_length: float
    max_abs_sample: float
    within_disk: bool
    within_length_bound: bool
    max_crossings: int
    crossings_le_two_n: bool


@dataclass(frozen=True)
class BlaschkeTreeReport:
    s: int
    p: int
    degree: int
    edge_count: int
    expected_edge_count: int
    tree_report: TreeReport
    edges: tuple[BlaschkeEdgeReport, ...]
    length_bound: float  # 2 pi N
    all_within_disk: bool
    all_within_length_bound: bool
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "s": self.s,
            "p": self.p,
            "degree": self.degree,
            "edge_count": self.edge_count,
            "expected_edge_count": self.expected_edge_count,
            "tree": self.tree_report.to_json_dict(),
            "length_bound": self.length_bound,
            "all_within_disk": self.all_within_disk,
            "all_within_length_bound": self.all_within_length_bound,
            "passed": self.passed,
            "edges": [
                {
                    "source": e.source,
                    "target": e.target,
                    "arc_length": e.arc_length,
                    "crofton": e.crofton_length,
                    "max_abs_sample": e.max_abs_sample,
                    "within_disk": e.within_disk,
                    "within_length_bound": e.within_length_bound,
                    "max_crossings": e.max_crossings,
                    "crossings_le_two_N": e.crossings_le_two_n,
                }
                for e in self.edges
            ],
        }


def blaschke_tree_and_bounds(
    b: BlaschkeProduct,
    settings: TraceSettings | None = None,
    n_theta: int = 720,
    crossing_grid: tuple[int, int] = (60, 48),
) -> tuple[DescentTree, BlaschkeTreeReport]:
    """Build the descent tree of the product and check the disk containment,
    the p+s-1 edge count, and the 2*pi*N length bound on every edge."""
    target = BlaschkeTarget(b)
    tree = build_descent_tree(target, settings)
    report = verify_tree(tree)
    bound = 2.0 * math.pi * b.degree
    slack = 1.0 + 1e-3
    edge_reports = []
    for e in tree.edges:
        max_abs = float(np.abs(e.path.zs).max())
        cro = crofton_length(e.path, n_theta).length
        profile = max_crossings(e.path, *crossing_grid)
        edge_reports.append(
            BlaschkeEdgeReport(
                source=e.source,
                target=e.target,
                arc_length=e.path.arc_length,
                crofton_length=cro,
                max_abs_sample=max_abs,
                within_disk=max_abs < 1.0,
                within_length_bound=e.path.arc_length <= bound * slack,
                max_crossings=profile.max_count,
                crossings_le_two_n=profile.max_count <= 2 * b.degree,
            )
        )
    all_disk = all(r.within_disk for r in edge_reports)
    all_len = all(r.within_length_bound for r in edge_reports)
    p = tree.critical_count
    passed = report.passed and all_disk and all_len and (
        len(tree.edges) == p + b.s - 1
    )
    return tree, BlaschkeTreeReport(
        s=b.s,
        p=p,
        degree=b.degree,
        edge_count=len(tree.edges),
        expected_edge_count=p + b.s - 1,
        tree_report=report,
        edges=tuple(edge_reports),
        length_bound=bound,
        all_within_disk=all_disk,
        all_within_length_bound=all_len,
        passed=passed,
    )
