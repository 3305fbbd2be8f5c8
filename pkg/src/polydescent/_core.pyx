# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Evaluation and path-continuation kernels, compiled lane.

Behavioral twin of ``polydescent.kernels_py``; any change there must be
mirrored here.  The continuation loop runs entirely on C doubles; Python
objects only appear when an accepted sample is recorded.
"""

from libc.math cimport INFINITY, exp, isfinite, log, atan2, cos, sin, hypot

import numpy as np

COMPILED = True

KIND_POLY = 0
KIND_BLASCHKE = 1

STATUS_ROOT = 0
STATUS_CRITICAL = 1
STATUS_UNRESOLVED = 2
STATUS_STALLED = 3
STATUS_LEFT_DOMAIN = 4
STATUS_MAX_STEPS = 5

DEF LOG_SUM_DEGREE = 30


cdef inline bint _finite(double complex z) nogil:
    return isfinite(z.real) and isfinite(z.imag)


cdef inline double _cabs(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef inline double complex _cexp(double complex z) nogil:
    cdef double m = exp(z.real)
    cdef double complex out
    out.real = m * cos(z.imag)
    out.imag = m * sin(z.imag)
    return out


cdef inline double complex _clog(double complex z) nogil:
    cdef double complex out
    out.real = log(_cabs(z))
    out.imag = atan2(z.imag, z.real)
    return out


cdef double complex _poly_value(double complex[::1] locs, long long[::1] mults,
                                double complex z) nogil:
    cdef Py_ssize_t n = locs.shape[0]
    cdef Py_ssize_t j
    cdef long long m, k, total = 0
    cdef double complex w, out, acc
    for j in range(n):
        total += mults[j]
    if total > LOG_SUM_DEGREE:
        acc = 0
        for j in range(n):
            w = z - locs[j]
            if w == 0:
                return 0
            acc = acc + mults[j] * _clog(w)
        return _cexp(acc)
    out = 1
    for j in range(n):
        w = z - locs[j]
        m = mults[j]
        for k in range(m):
            out = out * w
    return out


cdef double complex _poly_logderiv(double complex[::1] locs, long long[::1] mults,
                                   double complex z) nogil:
    cdef Py_ssize_t j
    cdef double complex acc = 0, d
    for j in range(locs.shape[0]):
        d = z - locs[j]
        acc = acc + mults[j] / d
    return acc


cdef double complex _blaschke_value(double complex[::1] locs, long long[::1] mults,
                                    double complex constant, double complex z) nogil:
    cdef Py_ssize_t j
    cdef long long m, k
    cdef double complex out = constant, a, b
    for j in range(locs.shape[0]):
        a = locs[j]
        b = (z - a) / (1 - a.conjugate() * z)
        m = mults[j]
        for k in range(m):
            out = out * b
    return out


cdef double complex _blaschke_logderiv(double complex[::1] locs, long long[::1] mults,
                                       double complex z) nogil:
    cdef Py_ssize_t j
    cdef double complex acc = 0, a, ac
    cdef double w2
    for j in range(locs.shape[0]):
        a = locs[j]
        ac = a.conjugate()
        w2 = 1.0 - (a * ac).real
        acc = acc + mults[j] * w2 / ((z - a) * (1 - ac * z))
    return acc


cdef inline double complex _value(int kind, double complex[::1] locs,
                                  long long[::1] mults, double complex constant,
                                  double complex z) nogil:
    if kind == 0:  # KIND_POLY
        return _poly_value(locs, mults, z)
    return _blaschke_value(locs, mults, constant, z)


cdef inline double complex _logderiv(int kind, double complex[::1] locs,
                                     long long[::1] mults, double complex z) nogil:
    if kind == 0:  # KIND_POLY
        return _poly_logderiv(locs, mults, z)
    return _blaschke_logderiv(locs, mults, z)


cdef double complex[::1] _as_clocs(object locs):
    return np.ascontiguousarray(locs, dtype=np.complex128)


cdef long long[::1] _as_mults(object mults):
    return np.ascontiguousarray(mults, dtype=np.int64)


def poly_value(locs, mults, z):
    """prod (z - a_j)**n_j in product form, never via expanded coefficients."""
    return complex(_poly_value(_as_clocs(locs), _as_mults(mults), z))


def poly_logderiv(locs, mults, z):
    """sum n_j / (z - a_j); the derivative is value * logderiv off the roots."""
    return complex(_poly_logderiv(_as_clocs(locs), _as_mults(mults), z))


def blaschke_value(locs, mults, constant, z):
    """constant * prod ((z - a_j) / (1 - conj(a_j) z))**n_j."""
    return complex(_blaschke_value(_as_clocs(locs), _as_mults(mults), constant, z))


def blaschke_logderiv(locs, mults, z):
    """sum n_j (1 - |a_j|^2) / ((z - a_j)(1 - conj(a_j) z))."""
    return complex(_blaschke_logderiv(_as_clocs(locs), _as_mults(mults), z))


def target_value(kind, locs, mults, constant, z):
    if kind == KIND_POLY:
        return poly_value(locs, mults, z)
    return blaschke_value(locs, mults, constant, z)


def target_logderiv(kind, locs, mults, z):
    if kind == KIND_POLY:
        return poly_logderiv(locs, mults, z)
    return blaschke_logderiv(locs, mults, z)


cdef int _newton(int kind, double complex[::1] locs, long long[::1] mults,
                 double complex constant, double complex* z, double complex target,
                 double tol_abs, int max_iter) nogil:
    """Newton iteration for f(z) = target in place; returns 1 on convergence."""
    cdef double complex fv, fp, resid
    cdef int it
    for it in range(max_iter):
        fv = _value(kind, locs, mults, constant, z[0])
        if not _finite(fv):
            return 0
        resid = fv - target
        if _cabs(resid) <= tol_abs:
            return 1
        fp = fv * _logderiv(kind, locs, mults, z[0])
        if fp == 0 or not _finite(fp):
            return 0
        z[0] = z[0] - resid / fp
        if not _finite(z[0]):
            return 0
    fv = _value(kind, locs, mults, constant, z[0])
    if not _finite(fv):
        return 0
    return _cabs(fv - target) <= tol_abs


def newton_correct(kind, locs, mults, constant, z, target, tol_abs, max_iter):
    """Newton iteration for f(z) = target.  Returns (z, converged)."""
    cdef double complex[::1] clocs = _as_clocs(locs)
    cdef long long[::1] cmults = _as_mults(mults)
    cdef double complex zz = z
    cdef int ok = _newton(int(kind), clocs, cmults, complex(constant), &zz,
                          complex(target), float(tol_abs), int(max_iter))
    return complex(zz), bool(ok)


cdef int _rk4(int kind, double complex[::1] locs, long long[::1] mults,
              double complex constant, double complex z, double complex w,
              double dt, double complex* out) nogil:
    """One explicit step of dz/dt = w / f'(z), advancing t -> t - dt."""
    cdef double complex f, fp, k1, k2, k3, k4, zz
    f = _value(kind, locs, mults, constant, z)
    fp = f * _logderiv(kind, locs, mults, z)
    if fp == 0 or not _finite(fp):
        return 0
    k1 = w / fp
    zz = z - 0.5 * dt * k1
    f = _value(kind, locs, mults, constant, zz)
    fp = f * _logderiv(kind, locs, mults, zz)
    if fp == 0 or not _finite(fp):
        return 0
    k2 = w / fp
    zz = z - 0.5 * dt * k2
    f = _value(kind, locs, mults, constant, zz)
    fp = f * _logderiv(kind, locs, mults, zz)
    if fp == 0 or not _finite(fp):
        return 0
    k3 = w / fp
    zz = z - dt * k3
    f = _value(kind, locs, mults, constant, zz)
    fp = f * _logderiv(kind, locs, mults, zz)
    if fp == 0 or not _finite(fp):
        return 0
    k4 = w / fp
    out[0] = z - dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
    return _finite(out[0])


def trace_core(kind, locs, mults, constant, anchor_value, t0, z0,
               sp_locs, sp_is_root, sp_vals,
               step_cap, prox_frac, newton_tol_rel, newton_max,
               dt_floor, t_floor, snap_radius, crit_dist, crit_val_rel,
               classify_radius, domain_margin, domain_kind, max_steps):
    """Continuation of f(z(t)) = t * anchor_value with t decreasing from t0.

    Returns (ts, zs, status, endpoint_index); see the pure lane for the
    semantics of every argument and status code.
    """
    cdef int ckind = int(kind)
    cdef double complex[::1] clocs = _as_clocs(locs)
    cdef long long[::1] cmults = _as_mults(mults)
    cdef double complex cconst = complex(constant)
    cdef double complex[::1] sp = _as_clocs(sp_locs)
    cdef long long[::1] isroot = _as_mults(np.asarray(sp_is_root, dtype=np.int64))
    cdef double complex[::1] spv = _as_clocs(sp_vals)
    cdef Py_ssize_t nsp = sp.shape[0]

    cdef double complex w = complex(anchor_value)
    cdef double aw = _cabs(w)
    cdef double tol = float(newton_tol_rel) * aw
    cdef double c_step_cap = float(step_cap)
    cdef double c_prox_frac = float(prox_frac)
    cdef int c_newton_max = int(newton_max)
    cdef double c_dt_floor = float(dt_floor)
    cdef double c_t_floor = float(t_floor)
    cdef double c_snap = float(snap_radius)
    cdef double c_crit_dist = float(crit_dist)
    cdef double c_crit_val = float(crit_val_rel)
    cdef double c_classify = float(classify_radius)
    cdef double c_margin = float(domain_margin)
    cdef int c_domain = int(domain_kind)
    cdef long long c_max_steps = int(max_steps)

    cdef double t = float(t0)
    cdef double complex z = complex(z0)
    ts = [t]
    zs = [complex(z)]

    cdef int status = STATUS_MAX_STEPS
    cdef Py_ssize_t endpoint = -1
    cdef Py_ssize_t i, ri, ci, hit
    cdef double rd, cd, d, prox, cap, dt, dz, t_new
    cdef double complex fv, fp, zp, zc
    cdef long long step_no
    cdef bint accepted, newton_failed, done

    for step_no in range(c_max_steps):
        # nearest root
        ri = -1
        rd = INFINITY
        for i in range(nsp):
            if isroot[i]:
                d = _cabs(z - sp[i])
                if d < rd:
                    rd = d
                    ri = i
        if ri >= 0 and rd < c_snap:
            status = STATUS_ROOT
            endpoint = ri
            break
        if t <= c_t_floor:
            if ri >= 0 and rd <= c_classify:
                status = STATUS_ROOT
                endpoint = ri
            else:
                status = STATUS_UNRESOLVED
                endpoint = -1
            break
        # mid-path critical hit
        hit = -1
        for i in range(nsp):
            if not isroot[i] and _cabs(z - sp[i]) < c_crit_dist:
                if _cabs(spv[i] - t * w) < c_crit_val * aw:
                    hit = i
                    break
        if hit >= 0:
            status = STATUS_CRITICAL
            endpoint = hit
            break

        # plan the step from the local speed |dz/dt| = |w| / |f'|
        fv = _value(ckind, clocs, cmults, cconst, z)
        fp = fv * _logderiv(ckind, clocs, cmults, z)
        if fp == 0 or not _finite(fp):
            status, endpoint = _terminal(ckind, clocs, cmults, cconst, sp, isroot,
                                         spv, z, t, w, aw, c_classify, 1)
            break
        prox = INFINITY
        for i in range(nsp):
            d = _cabs(z - sp[i])
            if d < prox:
                prox = d
        cap = c_step_cap
        if c_prox_frac * prox < cap:
            cap = c_prox_frac * prox
        dt = cap * _cabs(fp) / aw
        if dt > 0.95 * t:
            dt = 0.95 * t
        if dt < c_dt_floor:
            status, endpoint = _terminal(ckind, clocs, cmults, cconst, sp, isroot,
                                         spv, z, t, w, aw, c_classify, 0)
            break

        accepted = False
        newton_failed = False
        while dt >= c_dt_floor:
            if _rk4(ckind, clocs, cmults, cconst, z, w, dt, &zp):
                t_new = t - dt
                zc = zp
                if _newton(ckind, clocs, cmults, cconst, &zc, t_new * w,
                           tol, c_newton_max):
                    dz = _cabs(zc - z)
                    # reject corrections that wander far from the predictor
                    # (sheet jump) or overshoot the spacing cap
                    if dz <= cap * 1.0000001 and _cabs(zc - zp) <= 0.5 * dz + 1e-8 * c_step_cap:
                        z = zc
                        t = t_new
                        ts.append(t)
                        zs.append(complex(z))
                        accepted = True
                        break
                else:
                    newton_failed = True
            dt *= 0.5
        if not accepted:
            status, endpoint = _terminal(ckind, clocs, cmults, cconst, sp, isroot,
                                         spv, z, t, w, aw, c_classify,
                                         1 if newton_failed else 0)
            break
        if c_domain == 1 and _cabs(z) >= 1.0 - c_margin:
            status = STATUS_LEFT_DOMAIN
            endpoint = -1
            break

    return ts, zs, int(status), int(endpoint)


cdef (int, Py_ssize_t) _terminal(int kind, double complex[::1] locs,
                                 long long[::1] mults, double complex constant,
                                 double complex[::1] sp, long long[::1] isroot,
                                 double complex[::1] spv,
                                 double complex z, double t, double complex w,
                                 double aw, double classify_radius, int stalled):
    cdef Py_ssize_t i, ri = -1, ci = -1
    cdef double d, rd = INFINITY, cd = INFINITY
    for i in range(sp.shape[0]):
        d = _cabs(z - sp[i])
        if isroot[i]:
            if d < rd:
                rd = d
                ri = i
        else:
            if d < cd:
                cd = d
                ci = i
    if t <= 1e-10 and ri >= 0 and rd <= classify_radius:
        return STATUS_ROOT, ri
    if ci >= 0 and cd <= classify_radius and _cabs(spv[ci] - t * w) <= 1e-6 * aw:
        return STATUS_CRITICAL, ci
    if stalled:
        return STATUS_STALLED, -1
    return STATUS_UNRESOLVED, -1
