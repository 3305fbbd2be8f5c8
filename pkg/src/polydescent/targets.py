"""Analytic targets for the descent tracer.

A target packs the data the kernels need (root/zero locations,
multiplicities, an optional unimodular constant) together with its special
points: the zeros of the map and the zeros of its logarithmic derivative.
The same tracer then serves factored polynomials and finite Blaschke
products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import poly as polymod
from . import geometry
from .backend import kernels

ROOT = "root"
CRITICAL = "critical"


@dataclass(frozen=True)
class SpecialPoint:
    location: complex
    kind: str  # ROOT or CRITICAL
    multiplicity: int


class AnalyticTarget:
    """Base target: value/derivative plus packed special-point arrays."""

    kind: int
    locations: np.ndarray
    multiplicities: np.ndarray
    constant: complex
    scale: float
    domain_kind: int  # 0 = whole plane, 1 = open unit disk

    def __init__(self, specials: list[SpecialPoint]):
        self._specials = list(specials)
        self.sp_locs = np.array(
            [s.location for s in specials], dtype=np.complex128
        )
        self.sp_is_root = np.array(
            [1 if s.kind == ROOT else 0 for s in specials], dtype=np.int8
        )
        self.sp_mults = np.array([s.multiplicity for s in specials], dtype=np.int64)
        self.sp_vals = np.array(
            [
                0j if s.kind == ROOT else self.value(s.location)
                for s in specials
            ],
            dtype=np.complex128,
        )

    def value(self, z: complex) -> complex:
        return kernels.target_value(
            self.kind, self.locations, self.multiplicities, self.constant, complex(z)
        )

    def log_derivative(self, z: complex) -> complex:
        return kernels.target_logderiv(
            self.kind, self.locations, self.multiplicities, complex(z)
        )

    def derivative(self, z: complex) -> complex:
        raise NotImplementedError

    def special_points(self) -> list[SpecialPoint]:
        return list(self._specials)

    def domain_guard(self, z: complex) -> bool:
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return False
        if self.domain_kind == 1:
            return abs(z) < 1.0 - 1e-12
        return True

    def nearest_other_special(self, z: complex, exclude_tol: float) -> float:
        """Distance from z to the nearest special point farther than exclude_tol."""
        d = np.abs(self.sp_locs - complex(z))
        d = d[d > exclude_tol]
        if d.size == 0:
            raise ValueError("no other special point to measure against")
        return float(d.min())

    def branch_model(self, center: complex, m: int) -> polymod.LocalBranchModel:
        """Leading local coefficient at a critical point of multiplicity m."""
        center = complex(center)
        nearest = self.nearest_other_special(center, 1e-8 * self.scale)
        ell = m + 1
        radius = polymod.branch_circle_radius(ell, nearest)
        coeff, base = polymod.leading_circle_coefficient(
            self.value, center, ell, radius
        )
        return polymod.LocalBranchModel(center, ell, coeff, base)


class PolynomialTarget(AnalyticTarget):
    """Factored polynomial wrapped for the tracer; scale is the enclosing radius."""

    domain_kind = 0
    kind = kernels.KIND_POLY

    def __init__(
        self,
        poly: polymod.FactoredPolynomial,
        criticals: polymod.CriticalPointSet | None = None,
    ):
        self.poly = poly
        self.locations = poly.locations
        self.multiplicities = poly.multiplicities
        self.constant = 1 + 0j
        disk = geometry.smallest_enclosing_disk([complex(a) for a in poly.locations])
        self.disk = disk
        self.scale = disk.radius if disk.radius > 0 else 1.0
        self.criticals = (
            criticals if criticals is not None else polymod.critical_points(poly)
        )
        specials = [
            SpecialPoint(complex(loc), ROOT, int(m)) for loc, m in poly.roots
        ] + [
            SpecialPoint(complex(loc), CRITICAL, int(m))
            for loc, m in self.criticals.points
        ]
        super().__init__(specials)

    def derivative(self, z: complex) -> complex:
        return polymod.derivative(self.poly, z)
