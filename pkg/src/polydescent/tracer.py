"""Numerical continuation of steepest-descent paths for |f|.

A path through beta follows the implicit equation f(z) = t * f(beta) with t
running from 1 down to 0 (the curve of steepest descent, traversed in
reverse parameter direction).  The stepper is a fourth-order predictor on
dz/dt = f(beta)/f'(z) with a Newton corrector back onto the implicit
equation, so discretization error cannot accumulate along the path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .backend import kernels
from .errors import LeftDomain, PolydescentError, StalledCorrection
from .poly import LocalBranchModel
from .targets import AnalyticTarget

ENDPOINT_ROOT = "root"
ENDPOINT_CRITICAL = "critical"
ENDPOINT_UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class TraceSettings:
    """Step control and termination tolerances, mostly relative to target scale."""

    step_cap_rel: float = 0.01  # |dz| <= step_cap_rel * scale
    prox_frac: float = 0.25  # |dz| <= prox_frac * dist(z, nearest special)
    newton_tol_rel: float = 1e-12  # corrector residual, relative to |f(beta)|
    newton_max_iter: int = 8
    dt_floor: float = 1e-14
    t_floor: float = 1e-12  # below this t the path has reached a root
    snap_rel: float = 1e-8  # snap radius onto roots
    crit_dist_rel: float = 1e-7  # mid-path critical-point hit: distance
    crit_val_rel: float = 1e-7  # mid-path critical-point hit: value match
    classify_rel: float = 1e-2  # endpoint classification radius at the floor
    seed_offset_rel: float = 1e-4  # branch seed offset from its critical point
    max_steps: int = 200_000
    continue_through_critical: bool = False


DEFAULT_SETTINGS = TraceSettings()


@dataclass
class DescentPath:
    """Sampled descent path: f(z_i) = t_i * anchor_value, t_i strictly decreasing."""

    anchor: complex
    anchor_value: complex
    ts: np.ndarray
    zs: np.ndarray
    endpoint_location: complex
    endpoint_kind: str
    arc_length: float = field(init=False)

    def __post_init__(self) -> None:
        self.ts = np.asarray(self.ts, dtype=np.float64)
        self.zs = np.asarray(self.zs, dtype=np.complex128)
        self.arc_length = polyline_length(self.zs)

    @property
    def samples(self) -> list[tuple[float, complex]]:
        return [(float(t), complex(z)) for t, z in zip(self.ts, self.zs)]

    def to_json_dict(self) -> dict:
        return {
            "anchor": {"re": self.anchor.real, "im": self.anchor.imag},
            "anchor_value": {
                "re": self.anchor_value.real,
                "im": self.anchor_value.imag,
            },
            "samples": [
                {"t": float(t), "re": z.real, "im": z.imag}
                for t, z in zip(self.ts, self.zs)
            ],
            "endpoint": {
                "kind": self.endpoint_kind,
                "re": self.endpoint_location.real,
                "im": self.endpoint_location.imag,
            },
            "arc_length": float(self.arc_length),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DescentPath":
        return cls(
            anchor=complex(data["anchor"]["re"], data["anchor"]["im"]),
            anchor_value=complex(
                data["anchor_value"]["re"], data["anchor_value"]["im"]
            ),
            ts=np.array([s["t"] for s in data["samples"]], dtype=np.float64),
            zs=np.array(
                [complex(s["re"], s["im"]) for s in data["samples"]],
                dtype=np.complex128,
            ),
            endpoint_location=complex(
                data["endpoint"]["re"], data["endpoint"]["im"]
            ),
            endpoint_kind=str(data["endpoint"]["kind"]),
        )


@dataclass(frozen=True)
class BranchSeed:
    """One of the ell descent directions leaving a critical point."""

    critical: complex
    direction: complex  # unit vector
    branch_index: int
    order: int  # ell = multiplicity + 1


def polyline_length(zs: np.ndarray) -> float:
    zs = np.asarray(zs, dtype=np.complex128)
    if zs.size < 2:
        return 0.0
    return float(np.abs(np.diff(zs)).sum())


def arc_length(path: DescentPath) -> float:
    """Polyline length of the sampled path."""
    if path.zs.size < 2:
        raise ValueError("arc length needs at least two samples")
    return polyline_length(path.zs)


def _trace_from(
    target: AnalyticTarget,
    anchor: complex,
    anchor_value: complex,
    t0: float,
    z0: complex,
    settings: TraceSettings,
    prefix: tuple[list[float], list[complex]] | None = None,
) -> DescentPath:
    """Run the kernel from (t0, z0) and assemble a DescentPath.

    `prefix` carries already-accepted samples: the anchor sample for branch
    paths, or everything traced before a critical-point continuation.
    """
    scale = target.scale
    aw = abs(anchor_value)
    ts_acc: list[float] = [] if prefix is None else list(prefix[0])
    zs_acc: list[complex] = [] if prefix is None else list(prefix[1])
    t_cur, z_cur = t0, z0
    for _cascade in range(len(target.sp_locs) + 1):
        ts, zs, status, endpoint = kernels.trace_core(
            target.kind,
            target.locations,
            target.multiplicities,
            target.constant,
            anchor_value,
            t_cur,
            z_cur,
            target.sp_locs,
            target.sp_is_root,
            target.sp_vals,
            settings.step_cap_rel * scale,
            settings.prox_frac,
            settings.newton_tol_rel,
            settings.newton_max_iter,
            settings.dt_floor,
            settings.t_floor,
            settings.snap_rel * scale,
            settings.crit_dist_rel * scale,
            settings.crit_val_rel,
            settings.classify_rel * scale,
            1e-12,
            target.domain_kind,
            settings.max_steps,
        )
        ts_acc.extend(float(t) for t in ts)
        zs_acc.extend(complex(z) for z in zs)

        if status == kernels.STATUS_ROOT:
            loc = complex(target.sp_locs[endpoint])
            if zs_acc[-1] != loc:
                ts_acc.append(0.0)
                zs_acc.append(loc)
            return DescentPath(
                anchor, anchor_value, ts_acc, zs_acc, loc, ENDPOINT_ROOT
            )

        if status == kernels.STATUS_CRITICAL:
            loc = complex(target.sp_locs[endpoint])
            val = complex(target.sp_vals[endpoint])
            t_k = (val / anchor_value).real
            residual = abs(val - t_k * anchor_value)
            appendable = (
                0.0 < t_k < ts_acc[-1] - 1e-15
                and residual <= 1e-9 * aw * max(1.0, t_k)
                and zs_acc[-1] != loc
            )
            if appendable:
                ts_acc.append(t_k)
                zs_acc.append(loc)
            if not settings.continue_through_critical:
                return DescentPath(
                    anchor, anchor_value, ts_acc, zs_acc, loc, ENDPOINT_CRITICAL
                )
            # continue along the descent branch whose direction has the
            # smallest nonnegative angle (deterministic tie-break)
            m = int(target.sp_mults[endpoint])
            seeds = descent_directions(target, (loc, m))
            chosen = min(
                seeds, key=lambda s: cmath.phase(s.direction) % (2.0 * math.pi)
            )
            t_cur, z_cur = _seed_branch(
                target, loc, m, chosen.direction, t_k, settings
            )
            continue

        if status == kernels.STATUS_LEFT_DOMAIN:
            raise LeftDomain(
                f"path from {anchor} left the allowed region near {zs_acc[-1]}"
            )
        if status == kernels.STATUS_STALLED:
            raise StalledCorrection(
                f"correction stalled at t={ts_acc[-1]:.3e}, z={zs_acc[-1]}"
            )
        if status == kernels.STATUS_MAX_STEPS:
            raise StalledCorrection(
                f"step budget exhausted at t={ts_acc[-1]:.3e}, z={zs_acc[-1]}"
            )
        # unresolved: floor reached away from every special point
        return DescentPath(
            anchor, anchor_value, ts_acc, zs_acc, zs_acc[-1], ENDPOINT_UNRESOLVED
        )
    raise PolydescentError("critical-point continuation did not terminate")


def trace_descent(
    target: AnalyticTarget, beta: complex, settings: TraceSettings | None = None
) -> DescentPath:
    """Trace the descent path of |f| from an arbitrary anchor beta.

    The path ends at a root of the target (snapping within the snap radius)
    or at a critical point when the trajectory runs into one; the opt-in
    ``continue_through_critical`` setting pushes past such hits instead.
    """
    settings = settings or DEFAULT_SETTINGS
    beta = complex(beta)
    if not target.domain_guard(beta):
        raise ValueError(f"anchor {beta} is outside the target's domain")
    w = target.value(beta)
    if w == 0:
        raise ValueError(f"anchor {beta} is a zero of the target")
    crit_mask = target.sp_is_root == 0
    if crit_mask.any():
        dcrit = float(np.abs(target.sp_locs[crit_mask] - beta).min())
        if dcrit < settings.crit_dist_rel * target.scale:
            raise ValueError(f"anchor {beta} coincides with a critical point")
    return _trace_from(target, beta, w, 1.0, beta, settings)


def descent_directions(
    target: AnalyticTarget, critical: tuple[complex, int]
) -> list[BranchSeed]:
    """The ell = m+1 unit directions of steepest descent leaving a critical point.

    With local model f(z) - f(b) ~ c (z-b)**ell, first-order descent needs
    c d**ell on the ray through -f(b), i.e.
    arg(d) = (arg(-f(b)) - arg(c) + 2 pi k) / ell,  k = 0..ell-1.
    """
    loc, m = complex(critical[0]), int(critical[1])
    match = [
        s
        for s in target.special_points()
        if s.kind == "critical" and abs(s.location - loc) <= 1e-8 * target.scale
    ]
    if not match or match[0].multiplicity != m:
        raise ValueError(
            f"{loc} is not a known critical point of multiplicity {m}"
        )
    model = target.branch_model(loc, m)
    ell = model.order
    if model.base_value == 0:
        raise ValueError(f"critical point {loc} is also a zero of the target")
    base = (
        cmath.phase(-model.base_value) - cmath.phase(model.leading_coefficient)
    ) / ell
    return [
        BranchSeed(loc, cmath.exp(1j * (base + 2.0 * math.pi * k / ell)), k, ell)
        for k in range(ell)
    ]


def _seed_branch(
    target: AnalyticTarget,
    loc: complex,
    m: int,
    direction: complex,
    t_at: float,
    settings: TraceSettings,
    model: LocalBranchModel | None = None,
) -> tuple[float, complex]:
    """Place a corrected seed on f(z) = t * w just past a critical point.

    `t_at` is the path parameter at the critical point (1.0 when the branch
    is anchored there), so f at the point equals t_at * w.  Returns the seed
    parameter and the Newton-corrected seed location.
    """
    if model is None:
        model = target.branch_model(loc, m)
    ell = model.order
    base_abs = abs(model.base_value)
    dist = target.nearest_other_special(loc, 1e-8 * target.scale)
    delta = settings.seed_offset_rel * dist
    # the parameter drop |c| delta**ell / |f(b)| must clear the dt floor by a
    # wide margin or the first step cannot move; grow delta for high orders
    delta_min = (2e-12 * base_abs / abs(model.leading_coefficient)) ** (1.0 / ell)
    delta = max(delta, delta_min)
    delta = min(delta, 0.02 * dist, 0.99 * settings.step_cap_rel * target.scale)
    for _ in range(8):
        drop = abs(model.leading_coefficient) * delta**ell / base_abs
        seed_value = (1.0 - drop) * model.base_value
        z_seed, ok = kernels.newton_correct(
            target.kind,
            target.locations,
            target.multiplicities,
            target.constant,
            loc + delta * direction,
            seed_value,
            settings.newton_tol_rel * base_abs,
            12,
        )
        if ok and abs(complex(z_seed) - loc) > 0.25 * delta:
            return t_at * (1.0 - drop), complex(z_seed)
        delta *= 0.5
    raise StalledCorrection(f"could not seed a branch at {loc} along {direction}")


def trace_all_branches(
    target: AnalyticTarget,
    critical: tuple[complex, int],
    settings: TraceSettings | None = None,
) -> list[DescentPath]:
    """Trace every descent branch leaving a critical point.

    Returns ell = m+1 paths anchored at the critical point (first sample
    t=1 at the point itself), each continued to a root or another critical
    point, and checks the branches stay pairwise disjoint away from shared
    endpoints.
    """
    settings = settings or DEFAULT_SETTINGS
    loc, m = complex(critical[0]), int(critical[1])
    model = target.branch_model(loc, m)
    seeds = descent_directions(target, (loc, m))
    w = model.base_value
    paths = []
    for seed in seeds:
        t_seed, z_seed = _seed_branch(
            target, loc, m, seed.direction, 1.0, settings, model=model
        )
        path = _trace_from(
            target,
            loc,
            w,
            t_seed,
            z_seed,
            settings,
            prefix=([1.0], [loc]),
        )
        paths.append(path)
    check_pairwise_disjoint(paths, target.scale)
    return paths


def min_interior_separation(a: DescentPath, b: DescentPath, scale: float) -> float:
    """Minimum distance between interior samples of two paths.

    Samples near shared endpoints (common anchor, or a common terminal
    vertex) are excluded within a radius of 10% of the shorter arc length,
    since both paths legitimately converge there.
    """
    excl = 0.1 * min(a.arc_length, b.arc_length)
    near = 1e-12 * max(scale, 1.0)
    shared: list[complex] = []
    for u in (a.anchor, a.endpoint_location):
        for v in (b.anchor, b.endpoint_location):
            if abs(u - v) < near:
                shared.append(u)

    def interior(path: DescentPath) -> np.ndarray:
        keep = np.ones(path.zs.size, dtype=bool)
        keep[0] = False
        keep[-1] = False
        for s in shared:
            keep &= np.abs(path.zs - s) > excl
        return path.zs[keep]

    za, zb = interior(a), interior(b)
    if za.size == 0 or zb.size == 0:
        return math.inf
    best = math.inf
    for start in range(0, za.size, 1024):  # bound the distance-matrix block
        block = za[start : start + 1024]
        best = min(best, float(np.abs(block[:, None] - zb[None, :]).min()))
    return best


def check_pairwise_disjoint(paths: list[DescentPath], scale: float) -> float:
    """Raise if two branch paths pass closer than 1e-6 * scale away from
    shared endpoints; returns the minimum separation observed."""
    best = math.inf
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            best = min(best, min_interior_separation(paths[i], paths[j], scale))
    if best <= 1e-6 * scale:
        raise PolydescentError(
            f"branch paths pass within {best:.3e} of each other "
            f"(threshold {1e-6 * scale:.3e})"
        )
    return best
