"""Evaluation and path-continuation kernels, pure-Python lane.

The compiled extension ``polydescent._core`` implements the same functions
with the same semantics; ``polydescent.backend`` picks whichever is
available.  Keep the two lanes in behavioral lockstep: any change here must
be mirrored in ``_core.pyx``.
"""

from __future__ import annotations

import cmath
import math

COMPILED = False

KIND_POLY = 0
KIND_BLASCHKE = 1

STATUS_ROOT = 0
STATUS_CRITICAL = 1
STATUS_UNRESOLVED = 2
STATUS_STALLED = 3
STATUS_LEFT_DOMAIN = 4
STATUS_MAX_STEPS = 5

# Above this total degree the plain product risks intermediate overflow;
# switch to exp(sum of logs), exact for integer exponents.
_LOG_SUM_DEGREE = 30


def _isfinite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


def poly_value(locs, mults, z):
    """prod (z - a_j)**n_j in product form, never via expanded coefficients."""
    z = complex(z)
    total = 0
    for m in mults:
        total += m
    if total > _LOG_SUM_DEGREE:
        acc = 0j
        for a, m in zip(locs, mults):
            w = z - complex(a)
            if w == 0:
                return 0j
            acc += int(m) * cmath.log(w)
        return cmath.exp(acc)
    out = 1 + 0j
    for a, m in zip(locs, mults):
        w = z - complex(a)
        for _ in range(int(m)):
            out *= w
    return out


def poly_logderiv(locs, mults, z):
    """sum n_j / (z - a_j); the derivative is value * logderiv off the roots."""
    z = complex(z)
    acc = 0j
    for a, m in zip(locs, mults):
        acc += int(m) / (z - complex(a))
    return acc


def blaschke_value(locs, mults, constant, z):
    """constant * prod ((z - a_j) / (1 - conj(a_j) z))**n_j."""
    z = complex(z)
    out = complex(constant)
    for a, m in zip(locs, mults):
        a = complex(a)
        b = (z - a) / (1 - a.conjugate() * z)
        for _ in range(int(m)):
            out *= b
    return out


def blaschke_logderiv(locs, mults, z):
    """sum n_j (1 - |a_j|^2) / ((z - a_j)(1 - conj(a_j) z))."""
    z = complex(z)
    acc = 0j
    for a, m in zip(locs, mults):
        a = complex(a)
        ac = a.conjugate()
        acc += int(m) * (1.0 - (a * ac).real) / ((z - a) * (1 - ac * z))
    return acc


def target_value(kind, locs, mults, constant, z):
    if kind == KIND_POLY:
        return poly_value(locs, mults, z)
    return blaschke_value(locs, mults, constant, z)


def target_logderiv(kind, locs, mults, z):
    if kind == KIND_POLY:
        return poly_logderiv(locs, mults, z)
    return blaschke_logderiv(locs, mults, z)


def _value(kind, locs, mults, constant, z):
    # internal twin of target_value on pre-converted python lists
    if kind == KIND_POLY:
        total = 0
        for m in mults:
            total += m
        if total > _LOG_SUM_DEGREE:
            acc = 0j
            for a, m in zip(locs, mults):
                w = z - a
                if w == 0:
                    return 0j
                acc += m * cmath.log(w)
            return cmath.exp(acc)
        out = 1 + 0j
        for a, m in zip(locs, mults):
            w = z - a
            for _ in range(m):
                out *= w
        return out
    out = constant
    for a, m in zip(locs, mults):
        b = (z - a) / (1 - a.conjugate() * z)
        for _ in range(m):
            out *= b
    return out


def _logderiv(kind, locs, mults, z):
    acc = 0j
    if kind == KIND_POLY:
        for a, m in zip(locs, mults):
            acc += m / (z - a)
        return acc
    for a, m in zip(locs, mults):
        ac = a.conjugate()
        acc += m * (1.0 - (a * ac).real) / ((z - a) * (1 - ac * z))
    return acc


def newton_correct(kind, locs, mults, constant, z, target, tol_abs, max_iter):
    """Newton iteration for f(z) = target.  Returns (z, converged)."""
    locs = [complex(a) for a in locs]
    mults = [int(m) for m in mults]
    constant = complex(constant)
    z = complex(z)
    target = complex(target)
    tol_abs = float(tol_abs)
    for _ in range(int(max_iter)):
        try:
            fv = _value(kind, locs, mults, constant, z)
        except ZeroDivisionError:
            return z, False
        residual = fv - target
        if abs(residual) <= tol_abs:
            return z, True
        try:
            fp = fv * _logderiv(kind, locs, mults, z)
        except ZeroDivisionError:
            return z, False
        if fp == 0 or not _isfinite(fp):
            return z, False
        z = z - residual / fp
        if not _isfinite(z):
            return z, False
    try:
        fv = _value(kind, locs, mults, constant, z)
    except ZeroDivisionError:
        return z, False
    return z, abs(fv - target) <= tol_abs


def _rk4(kind, locs, mults, constant, z, w, dt):
    # One explicit step of dz/dt = w / f'(z), advancing t -> t - dt.
    try:
        f = _value(kind, locs, mults, constant, z)
        k1 = w / (f * _logderiv(kind, locs, mults, z))
        z2 = z - 0.5 * dt * k1
        f = _value(kind, locs, mults, constant, z2)
        k2 = w / (f * _logderiv(kind, locs, mults, z2))
        z3 = z - 0.5 * dt * k2
        f = _value(kind, locs, mults, constant, z3)
        k3 = w / (f * _logderiv(kind, locs, mults, z3))
        z4 = z - dt * k3
        f = _value(kind, locs, mults, constant, z4)
        k4 = w / (f * _logderiv(kind, locs, mults, z4))
    except ZeroDivisionError:
        return None
    zp = z - dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
    if not _isfinite(zp):
        return None
    return zp


def trace_core(
    kind,
    locs,
    mults,
    constant,
    anchor_value,
    t0,
    z0,
    sp_locs,
    sp_is_root,
    sp_vals,
    step_cap,
    prox_frac,
    newton_tol_rel,
    newton_max,
    dt_floor,
    t_floor,
    snap_radius,
    crit_dist,
    crit_val_rel,
    classify_radius,
    domain_margin,
    domain_kind,
    max_steps,
):
    """Continuation of f(z(t)) = t * anchor_value with t decreasing from t0.

    Returns (ts, zs, status, endpoint_index): the accepted samples starting
    at (t0, z0), a STATUS_* code, and for root/critical termination the index
    of the special point reached.
    """
    locs = [complex(a) for a in locs]
    mults = [int(m) for m in mults]
    constant = complex(constant)
    sp = [complex(a) for a in sp_locs]
    is_root = [bool(b) for b in sp_is_root]
    spv = [complex(v) for v in sp_vals]
    nsp = len(sp)
    w = complex(anchor_value)
    aw = abs(w)
    tol = float(newton_tol_rel) * aw
    t = float(t0)
    z = complex(z0)
    ts = [t]
    zs = [z]

    def nearest_root(zz):
        best = -1
        bd = math.inf
        for i in range(nsp):
            if is_root[i]:
                d = abs(zz - sp[i])
                if d < bd:
                    bd = d
                    best = i
        return best, bd

    def nearest_critical(zz):
        best = -1
        bd = math.inf
        for i in range(nsp):
            if not is_root[i]:
                d = abs(zz - sp[i])
                if d < bd:
                    bd = d
                    best = i
        return best, bd

    def terminal(stalled):
        ri, rd = nearest_root(z)
        if t <= 1e-10 and ri >= 0 and rd <= classify_radius:
            return STATUS_ROOT, ri
        ci, cd = nearest_critical(z)
        if (
            ci >= 0
            and cd <= classify_radius
            and abs(spv[ci] - t * w) <= 1e-6 * aw
        ):
            return STATUS_CRITICAL, ci
        if stalled:
            return STATUS_STALLED, -1
        return STATUS_UNRESOLVED, -1

    status = STATUS_MAX_STEPS
    endpoint = -1
    for _ in range(int(max_steps)):
        ri, rd = nearest_root(z)
        if ri >= 0 and rd < snap_radius:
            status, endpoint = STATUS_ROOT, ri
            break
        if t <= t_floor:
            if ri >= 0 and rd <= classify_radius:
                status, endpoint = STATUS_ROOT, ri
            else:
                status, endpoint = STATUS_UNRESOLVED, -1
            break
        hit = -1
        for i in range(nsp):
            if not is_root[i] and abs(z - sp[i]) < crit_dist:
                if abs(spv[i] - t * w) < crit_val_rel * aw:
                    hit = i
                    break
        if hit >= 0:
            status, endpoint = STATUS_CRITICAL, hit
            break

        # plan the step from the local speed |dz/dt| = |w| / |f'|
        try:
            fv = _value(kind, locs, mults, constant, z)
            fp = fv * _logderiv(kind, locs, mults, z)
        except ZeroDivisionError:
            fp = 0j
        if fp == 0 or not _isfinite(fp):
            status, endpoint = terminal(stalled=True)
            break
        prox = math.inf
        for i in range(nsp):
            d = abs(z - sp[i])
            if d < prox:
                prox = d
        cap = step_cap
        if prox_frac * prox < cap:
            cap = prox_frac * prox
        dt = cap * abs(fp) / aw
        if dt > 0.95 * t:
            dt = 0.95 * t
        if dt < dt_floor:
            status, endpoint = terminal(stalled=False)
            break

        accepted = False
        newton_failed = False
        while dt >= dt_floor:
            zp = _rk4(kind, locs, mults, constant, z, w, dt)
            t_new = t - dt
            if zp is not None:
                zc, ok = newton_correct(
                    kind, locs, mults, constant, zp, t_new * w, tol, newton_max
                )
                if ok and _isfinite(zc):
                    dz = abs(zc - z)
                    # reject corrections that wander far from the predictor
                    # (sheet jump) or overshoot the spacing cap
                    if dz <= cap * 1.0000001 and abs(zc - zp) <= 0.5 * dz + 1e-8 * step_cap:
                        z = zc
                        t = t_new
                        ts.append(t)
                        zs.append(z)
                        accepted = True
                        break
                else:
                    newton_failed = True
            dt *= 0.5
        if not accepted:
            status, endpoint = terminal(stalled=newton_failed)
            break
        if domain_kind == 1 and abs(z) >= 1.0 - domain_margin:
            status, endpoint = STATUS_LEFT_DOMAIN, -1
            break

    return ts, zs, status, endpoint
