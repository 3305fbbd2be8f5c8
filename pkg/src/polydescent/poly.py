"""Factored-polynomial arithmetic: evaluation, logarithmic derivative,
critical points, and local branch models at critical points.

Polynomials are monic and held in factored form: a list of distinct root
locations with positive integer multiplicities.  All evaluation goes through
the factored product; coefficients are expanded only for the small
degree-(s-1) solve inside :func:`critical_points`.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import geometry
from .backend import kernels
from .errors import EvaluationDomainError, PolydescentError

# Two points are "distinct" when farther apart than this fraction of the
# enclosing radius (fallback 1.0 for a degenerate point set).
SEPARATION_REL = 1e-9

# Refined zeros of the critical polynomial merge into one multiple zero
# within this fraction of the enclosing radius.
CLUSTER_RADIUS_REL = 1e-7

# Branch-model sampling circle: this fraction of the distance from the
# center to the nearest other special point, with 4*ell sample points.
BRANCH_CIRCLE_REL = 1e-3


def branch_circle_radius(ell: int, dist: float) -> float:
    """Sampling radius for the order-ell circle coefficient.

    The subtracted samples carry ~eps*|f| of round-off, so the signal
    |c| * radius**ell needs radius >= dist * (1e6 eps)**(1/ell) to stand
    a million-fold above it; below order 4 the base fraction already does.
    """
    rel = max(BRANCH_CIRCLE_REL, (2.2e-10) ** (1.0 / ell))
    return min(0.1, rel) * dist


def _strict_int(value) -> int:
    """int(value), rejecting anything that would silently truncate."""
    out = int(value)
    if out != value:
        raise ValueError(f"multiplicity must be an integer, got {value!r}")
    return out


class FactoredPolynomial:
    """Monic polynomial prod (z - a_j)**n_j with distinct roots a_j.

    Immutable after construction; safe to share across threads.
    """

    __slots__ = ("roots", "locations", "multiplicities", "s", "degree", "scale")

    def __init__(self, roots: Sequence[tuple[complex, int]]):
        items = [(complex(loc), int(mult)) for loc, mult in roots]
        if len(items) < 2:
            raise ValueError("need at least two distinct roots")
        for loc, mult in items:
            if not (math.isfinite(loc.real) and math.isfinite(loc.imag)):
                raise ValueError(f"non-finite root location {loc!r}")
            if mult < 1:
                raise ValueError(f"multiplicity must be >= 1, got {mult}")
        locs = [loc for loc, _ in items]
        radius = geometry.smallest_enclosing_disk(locs).radius
        scale = radius if radius > 0 else 1.0
        tol = SEPARATION_REL * scale
        for i in range(len(locs)):
            for j in range(i + 1, len(locs)):
                if abs(locs[i] - locs[j]) <= tol:
                    raise ValueError(
                        f"roots {locs[i]} and {locs[j]} closer than the "
                        f"separation tolerance {tol:.3e}"
                    )
        self.roots = tuple(items)
        self.locations = np.array(locs, dtype=np.complex128)
        self.multiplicities = np.array([m for _, m in items], dtype=np.int64)
        self.s = len(items)
        self.degree = int(self.multiplicities.sum())
        self.scale = scale

    def __repr__(self) -> str:
        inner = ", ".join(f"({loc}, {m})" for loc, m in self.roots)
        return f"FactoredPolynomial([{inner}])"

    @classmethod
    def from_json_dict(cls, data: dict) -> "FactoredPolynomial":
        try:
            roots = [
                (complex(float(r["re"]), float(r["im"])), _strict_int(r["mult"]))
                for r in data["roots"]
            ]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from exc
        return cls(roots)

    @classmethod
    def from_file(cls, path: str) -> "FactoredPolynomial":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))

    def to_json_dict(self) -> dict:
        return {
            "roots": [
                {"re": loc.real, "im": loc.imag, "mult": m} for loc, m in self.roots
            ]
        }


@dataclass(frozen=True)
class CriticalPointSet:
    """Zeros of the logarithmic derivative, with multiplicities summing to s-1."""

    points: tuple[tuple[complex, int], ...]

    @property
    def locations(self) -> np.ndarray:
        return np.array([loc for loc, _ in self.points], dtype=np.complex128)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([m for _, m in self.points], dtype=np.int64)

    @property
    def p(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class LocalBranchModel:
    """Leading local behavior f(z) - f(center) ~ c_ell (z - center)**ell."""

    center: complex
    order: int
    leading_coefficient: complex
    base_value: complex


def evaluate(poly: FactoredPolynomial, z: complex) -> complex:
    """Value of the polynomial at z, in product form."""
    return kernels.poly_value(poly.locations, poly.multiplicities, complex(z))


def evaluate_many(poly: FactoredPolynomial, zs: np.ndarray) -> np.ndarray:
    """Vectorized product-form evaluation over an array of points."""
    zs = np.asarray(zs, dtype=np.complex128)
    diffs = zs[..., None] - poly.locations
    if poly.degree > 30:
        with np.errstate(divide="ignore"):
            logs = np.log(diffs)
        out = np.exp((logs * poly.multiplicities).sum(axis=-1))
        out[np.isnan(out)] = 0.0
        return out
    return np.prod(diffs**poly.multiplicities, axis=-1)


def log_derivative(poly: FactoredPolynomial, z: complex) -> complex:
    """sum n_j / (z - a_j).  The derivative is evaluate * log_derivative."""
    z = complex(z)
    tol = SEPARATION_REL * poly.scale
    if np.abs(z - poly.locations).min() <= tol:
        raise EvaluationDomainError(
            f"log derivative undefined within {tol:.3e} of a root"
        )
    return kernels.poly_logderiv(poly.locations, poly.multiplicities, z)


def derivative(poly: FactoredPolynomial, z: complex) -> complex:
    """Exact product-rule derivative, valid at the roots as well."""
    z = complex(z)
    locs = poly.locations
    mults = poly.multiplicities
    if np.abs(z - locs).min() > SEPARATION_REL * poly.scale:
        return evaluate(poly, z) * kernels.poly_logderiv(locs, mults, z)
    total = 0j
    for j in range(poly.s):
        term = complex(mults[j])
        for k in range(poly.s):
            d = z - complex(locs[k])
            e = int(mults[k]) - (1 if k == j else 0)
            for _ in range(e):
                term *= d
        total += term
    return total


def _horner(coeffs_desc: np.ndarray, z: complex) -> complex:
    out = 0j
    for c in coeffs_desc:
        out = out * z + complex(c)
    return out


def _aberth_roots(coeffs_desc: np.ndarray, max_iter: int = 200) -> np.ndarray:
    """All complex zeros of a polynomial by Aberth-Ehrlich iteration.

    coeffs_desc: coefficients in descending powers, leading nonzero.
    Deterministic initialization (staggered circle), no randomness.
    """
    c = np.asarray(coeffs_desc, dtype=np.complex128)
    c = c / c[0]
    # scrub round-off dust so exactly-multiple zeros stay exactly multiple
    c[np.abs(c) < 1e-14] = 0.0
    d = len(c) - 1
    if d == 0:
        return np.empty(0, dtype=np.complex128)
    if d == 1:
        return np.array([-c[1]], dtype=np.complex128)
    radius = 1.0 + float(np.abs(c[1:]).max())
    k = np.arange(d)
    z = radius * np.exp(2j * np.pi * (k + 0.25) / d + 0.4j)
    deriv = c[:-1] * np.arange(d, 0, -1)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for _ in range(max_iter):
            p = np.polyval(c, z)
            dp = np.polyval(deriv, z)
            ratio = np.where(dp != 0, p / np.where(dp == 0, 1, dp), 0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = (1.0 / diff).sum(axis=1)
            step = ratio / (1.0 - ratio * s)
            step = np.where(np.isfinite(step), step, 0)
            z = z - step
            if np.abs(step).max() < 1e-15 * (1.0 + np.abs(z).max()):
                break
    if not np.all(np.isfinite(z)):
        raise PolydescentError("root iteration diverged")
    return z


def _cluster_zeros(
    zeros: np.ndarray, radius: float
) -> list[tuple[complex, int]]:
    """Single-linkage clustering; returns (mean location, size) per cluster."""
    order = sorted(range(len(zeros)), key=lambda i: (zeros[i].real, zeros[i].imag))
    parent = list(range(len(zeros)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(len(zeros)):
        for b in range(a + 1, len(zeros)):
            if abs(zeros[a] - zeros[b]) <= radius:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra
    groups: dict[int, list[complex]] = {}
    for i in order:
        groups.setdefault(find(i), []).append(complex(zeros[i]))
    clusters = [(sum(g) / len(g), len(g)) for g in groups.values()]
    clusters.sort(key=lambda cm: (cm[0].real, cm[0].imag))
    return clusters


def critical_points(poly: FactoredPolynomial) -> CriticalPointSet:
    """All zeros of sum n_j prod_{k!=j} (z - a_k), with multiplicities.

    Aberth-Ehrlich on the expanded degree-(s-1) polynomial, Newton-refined
    against the product form, then clustered into multiple zeros.
    """
    locs = poly.locations
    mults = poly.multiplicities
    s = poly.s
    # expanded coefficients of C(z) = sum_j n_j prod_{k != j} (z - a_k)
    coeffs = np.zeros(s, dtype=np.complex128)
    for j in range(s):
        others = np.delete(locs, j)
        coeffs = coeffs + mults[j] * np.poly(others)
    zeros = _aberth_roots(coeffs)

    def c_product(z: complex) -> tuple[complex, complex]:
        # C = P * L with P = prod (z - a_k) single powers, L = sum n_j/(z - a_j)
        pv = 1 + 0j
        for a in locs:
            pv *= z - complex(a)
        lv = kernels.poly_logderiv(locs, mults, z)
        dpv = 0j
        for k in range(s):
            term = 1 + 0j
            for i in range(s):
                if i != k:
                    term *= z - complex(locs[i])
            dpv += term
        dlv = -sum(
            int(m) / (z - complex(a)) ** 2 for a, m in zip(locs, mults)
        )
        return pv * lv, dpv * lv + pv * dlv

    polish_cap = CLUSTER_RADIUS_REL * poly.scale
    refined = []
    for z in zeros:
        z = complex(z)
        if np.abs(z - locs).min() > SEPARATION_REL * poly.scale:
            for _ in range(25):
                cv, cd = c_product(z)
                if cd == 0:
                    break
                step = cv / cd
                # a solver zero is already near-exact; a "correction" larger
                # than the cluster radius is cancellation noise, not signal
                if not (abs(step) <= polish_cap):
                    break
                z = z - step
                if abs(step) <= 1e-16 * (1.0 + abs(z)):
                    break
        refined.append(z)

    # A multiple zero splits under coefficient noise into a tight cluster of
    # simple zeros.  The cluster mean locates it to ~sqrt(noise) only, and the
    # product form carries no better information there, so polish an m-fold
    # cluster against the (m-1)-th derivative of C, where the zero is simple.
    clusters = _cluster_zeros(np.array(refined), CLUSTER_RADIUS_REL * poly.scale)
    polished = []
    for center, m in clusters:
        z = center
        if m >= 2:
            dc = np.polyder(coeffs, m - 1)
            ddc = np.polyder(coeffs, m)
            for _ in range(40):
                dv = complex(np.polyval(ddc, z))
                if dv == 0:
                    break
                step = complex(np.polyval(dc, z)) / dv
                z = z - step
                if abs(step) <= 1e-16 * (1.0 + abs(z)):
                    break
            if abs(z - center) > CLUSTER_RADIUS_REL * poly.scale:
                z = center  # polish wandered off; keep the mean
        polished.append((z, m))
    polished.sort(key=lambda cm: (cm[0].real, cm[0].imag))
    total = sum(m for _, m in polished)
    if total != s - 1:
        raise PolydescentError(
            f"critical multiplicities sum to {total}, expected {s - 1}"
        )
    tol = SEPARATION_REL * poly.scale
    for z, _ in polished:
        if np.abs(z - locs).min() <= tol:
            raise PolydescentError(
                f"critical point {z} collides with a root within {tol:.3e}"
            )
    return CriticalPointSet(tuple(polished))


def leading_circle_coefficient(
    value: Callable[[complex], complex],
    center: complex,
    ell: int,
    radius: float,
) -> tuple[complex, complex]:
    """Order-ell Taylor coefficient of `value` at `center` by circle sampling.

    Samples on a circle of the given radius at 4*ell points and extracts the
    ell-th discrete Fourier coefficient of value - value(center).  Returns
    (coefficient, base value).  Raises when the extracted coefficient sits
    below the sampling noise floor, which signals a wrong order or severe
    ill-conditioning.
    """
    center = complex(center)
    n = 4 * ell
    f0 = value(center)
    acc = 0j
    max_dev = 0.0
    for k in range(n):
        theta = 2.0 * math.pi * k / n
        dz = radius * cmath.exp(1j * theta)
        fv = value(center + dz) - f0
        max_dev = max(max_dev, abs(fv))
        acc += fv * cmath.exp(-1j * ell * theta)
    coeff = acc / (n * radius**ell)
    # sampling round-off in the subtracted values is ~eps * |f0|; after the
    # radius**ell division a genuine coefficient must clear it comfortably
    noise_floor = 1e-13 * max(abs(f0), max_dev) / radius**ell
    if abs(coeff) <= noise_floor:
        raise PolydescentError(
            f"circle coefficient {abs(coeff):.3e} below noise floor "
            f"{noise_floor:.3e} at order {ell}"
        )
    return coeff, f0


def branch_model(
    poly: FactoredPolynomial,
    center: complex,
    m: int,
    criticals: CriticalPointSet | None = None,
) -> LocalBranchModel:
    """Local model at a critical point of multiplicity m (order ell = m+1)."""
    center = complex(center)
    if criticals is None:
        criticals = critical_points(poly)
    match_tol = 1e-6 * poly.scale
    matched = None
    for loc, mult in criticals.points:
        if abs(loc - center) <= match_tol:
            matched = (loc, mult)
            break
    if matched is None:
        raise ValueError(f"{center} is not a critical point of the polynomial")
    if matched[1] != m:
        raise ValueError(
            f"critical point {center} has multiplicity {matched[1]}, not {m}"
        )
    others = [loc for loc in poly.locations] + [
        loc for loc, _ in criticals.points if abs(loc - center) > match_tol
    ]
    nearest = min(abs(center - complex(q)) for q in others)
    ell = m + 1
    radius = branch_circle_radius(ell, nearest)
    coeff, base = leading_circle_coefficient(
        lambda z: evaluate(poly, z), center, ell, radius
    )
    return LocalBranchModel(center, ell, coeff, base)
