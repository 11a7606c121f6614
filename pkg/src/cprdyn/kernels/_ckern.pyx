# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: the fast backend.

Twin of ``_pure.py``. Signatures, loop structure, and floating-point
expression order are kept identical to the pure-Python reference; the
extension is built with FMA contraction disabled so results match bit for
bit. Keep the two files in lockstep when editing either one.
"""

import numpy as np

from libc.stdint cimport int8_t, int32_t, int64_t, uint64_t

BACKEND_NAME = "compiled"

STEADY = 0
DEPLETED = 1
MAX_TIME = 2
NUMERIC_FAILURE = 3

cdef enum TerminalCode:
    C_STEADY = 0
    C_DEPLETED = 1
    C_MAX_TIME = 2
    C_NUMERIC_FAILURE = 3

cdef double INV_2_53 = 1.0 / 9007199254740992.0


# ---------------------------------------------------------------------------
# xoshiro256** seeded via splitmix64 (matches cprdyn.rng exactly)
# ---------------------------------------------------------------------------

cdef struct Rng:
    uint64_t s0
    uint64_t s1
    uint64_t s2
    uint64_t s3


cdef inline uint64_t _rotl(uint64_t x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * (<uint64_t>0xBF58476D1CE4E5B9)
    z = (z ^ (z >> 27)) * (<uint64_t>0x94D049BB133111EB)
    return z ^ (z >> 31)


cdef inline void _seed_rng(Rng* rng, uint64_t seed) noexcept nogil:
    cdef uint64_t state = seed
    state = state + (<uint64_t>0x9E3779B97F4A7C15)
    rng.s0 = _mix64(state)
    state = state + (<uint64_t>0x9E3779B97F4A7C15)
    rng.s1 = _mix64(state)
    state = state + (<uint64_t>0x9E3779B97F4A7C15)
    rng.s2 = _mix64(state)
    state = state + (<uint64_t>0x9E3779B97F4A7C15)
    rng.s3 = _mix64(state)


cdef inline uint64_t _next_u64(Rng* rng) noexcept nogil:
    cdef uint64_t s0 = rng.s0
    cdef uint64_t s1 = rng.s1
    cdef uint64_t s2 = rng.s2
    cdef uint64_t s3 = rng.s3
    cdef uint64_t result = _rotl(s1 * (<uint64_t>5), 7) * (<uint64_t>9)
    cdef uint64_t t = s1 << 17
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, 45)
    rng.s0 = s0
    rng.s1 = s1
    rng.s2 = s2
    rng.s3 = s3
    return result


cdef inline double _uniform(Rng* rng) noexcept nogil:
    return <double>(_next_u64(rng) >> 11) * INV_2_53


# ---------------------------------------------------------------------------
# Drift and Runge-Kutta stepping
# ---------------------------------------------------------------------------

cdef struct Params:
    double qa
    double qb
    double qc
    double qd
    double qe
    double gt
    double ec
    double ed


cdef inline void _deriv(Params* p, double r, double x,
                        double* dr, double* dx) noexcept nogil:
    cdef double mix = x * p.ec + (1.0 - x) * p.ed
    cdef double w
    dr[0] = p.gt * (r * (1.0 - r) - r * mix)
    w = (p.qa * r + p.qb) * r + (p.qc * x + p.qd) * x + p.qe
    if w > 1.0:
        w = 1.0
    elif w < -1.0:
        w = -1.0
    dx[0] = -w * r * x * (1.0 - x)


cdef inline void _rk4(Params* p, double h, double* r, double* x) noexcept nogil:
    cdef double half = 0.5 * h
    cdef double sixth = h / 6.0
    cdef double k1r, k1x, k2r, k2x, k3r, k3x, k4r, k4x
    cdef double rr = r[0]
    cdef double xx = x[0]
    _deriv(p, rr, xx, &k1r, &k1x)
    _deriv(p, rr + half * k1r, xx + half * k1x, &k2r, &k2x)
    _deriv(p, rr + half * k2r, xx + half * k2x, &k3r, &k3x)
    _deriv(p, rr + h * k3r, xx + h * k3x, &k4r, &k4x)
    rr = rr + sixth * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
    xx = xx + sixth * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    if rr > 1.0:
        rr = 1.0
    elif rr < 0.0:
        rr = 0.0
    if xx > 1.0:
        xx = 1.0
    elif xx < 0.0:
        xx = 0.0
    r[0] = rr
    x[0] = xx


cdef int _integrate_terminal(Params* p, double r0, double x0,
                             double h, long long n_steps, long long need,
                             double steady_tol, double floor_,
                             double* r_out, double* x_out, double* t_out) noexcept nogil:
    cdef double tol2 = steady_tol * steady_tol
    cdef double r = r0
    cdef double x = x0
    cdef double half, sixth
    cdef double k1r, k1x, k2r, k2x, k3r, k3x, k4r, k4x
    cdef long long count = 0
    cdef long long k = 0
    while True:
        _deriv(p, r, x, &k1r, &k1x)
        if r < floor_:
            r_out[0] = r
            x_out[0] = x
            t_out[0] = k * h
            return C_DEPLETED
        if k1r * k1r + k1x * k1x < tol2:
            count += 1
            if count >= need:
                r_out[0] = r
                x_out[0] = x
                t_out[0] = k * h
                return C_STEADY
        else:
            count = 0
        if k >= n_steps:
            r_out[0] = r
            x_out[0] = x
            t_out[0] = k * h
            return C_MAX_TIME
        half = 0.5 * h
        sixth = h / 6.0
        _deriv(p, r + half * k1r, x + half * k1x, &k2r, &k2x)
        _deriv(p, r + half * k2r, x + half * k2x, &k3r, &k3x)
        _deriv(p, r + h * k3r, x + h * k3x, &k4r, &k4x)
        r = r + sixth * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
        x = x + sixth * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        if r > 1.0:
            r = 1.0
        elif r < 0.0:
            r = 0.0
        if x > 1.0:
            x = 1.0
        elif x < 0.0:
            x = 0.0
        if r != r or x != x:
            r_out[0] = r
            x_out[0] = x
            t_out[0] = k * h
            return C_NUMERIC_FAILURE
        k += 1


cdef inline void _pack(Params* p, double qa, double qb, double qc, double qd,
                       double qe, double gt, double ec, double ed) noexcept nogil:
    p.qa = qa
    p.qb = qb
    p.qc = qc
    p.qd = qd
    p.qe = qe
    p.gt = gt
    p.ec = ec
    p.ed = ed


# ---------------------------------------------------------------------------
# Python-visible entry points (signatures mirror _pure.py)
# ---------------------------------------------------------------------------


def rk4_step(double qa, double qb, double qc, double qd, double qe,
             double gt, double ec, double ed, double r, double x, double h):
    """One classical Runge-Kutta step, result clamped to the unit square."""
    cdef Params p
    _pack(&p, qa, qb, qc, qd, qe, gt, ec, ed)
    _rk4(&p, h, &r, &x)
    return r, x


def integrate_terminal(double qa, double qb, double qc, double qd, double qe,
                       double gt, double ec, double ed, double r0, double x0,
                       double h, long long n_steps, long long need,
                       double steady_tol, double floor):
    """Integrate until steady, depleted, or out of steps. See _pure.py."""
    cdef Params p
    cdef double r = 0.0
    cdef double x = 0.0
    cdef double t = 0.0
    cdef int code
    _pack(&p, qa, qb, qc, qd, qe, gt, ec, ed)
    with nogil:
        code = _integrate_terminal(&p, r0, x0, h, n_steps, need,
                                   steady_tol, floor, &r, &x, &t)
    return r, x, code, t


def integrate_record(double qa, double qb, double qc, double qd, double qe,
                     double gt, double ec, double ed, double r0, double x0,
                     double h, long long n_steps, long long need,
                     double steady_tol, double floor, long long record_every):
    """integrate_terminal plus a sampled path. See _pure.py."""
    cdef Params p
    cdef double tol2 = steady_tol * steady_tol
    cdef double r = r0
    cdef double x = x0
    cdef double half, sixth
    cdef double k1r, k1x, k2r, k2x, k3r, k3x, k4r, k4x
    cdef long long count = 0
    cdef long long k = 0
    cdef int code = C_MAX_TIME
    cdef double t_final
    _pack(&p, qa, qb, qc, qd, qe, gt, ec, ed)
    times = [0.0]
    rs = [r0]
    xs = [x0]
    while True:
        _deriv(&p, r, x, &k1r, &k1x)
        if r < floor:
            code = C_DEPLETED
            break
        if k1r * k1r + k1x * k1x < tol2:
            count += 1
            if count >= need:
                code = C_STEADY
                break
        else:
            count = 0
        if k >= n_steps:
            break
        half = 0.5 * h
        sixth = h / 6.0
        _deriv(&p, r + half * k1r, x + half * k1x, &k2r, &k2x)
        _deriv(&p, r + half * k2r, x + half * k2x, &k3r, &k3x)
        _deriv(&p, r + h * k3r, x + h * k3x, &k4r, &k4x)
        r = r + sixth * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
        x = x + sixth * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        if r > 1.0:
            r = 1.0
        elif r < 0.0:
            r = 0.0
        if x > 1.0:
            x = 1.0
        elif x < 0.0:
            x = 0.0
        if r != r or x != x:
            code = C_NUMERIC_FAILURE
            break
        k += 1
        if k % record_every == 0:
            times.append(k * h)
            rs.append(r)
            xs.append(x)
    t_final = k * h
    cdef Py_ssize_t last = len(times) - 1
    if times[last] != t_final or rs[last] != r or xs[last] != x:
        times.append(t_final)
        rs.append(r)
        xs.append(x)
    return (np.asarray(times), np.asarray(rs), np.asarray(xs), code, t_final)


def sample_path(double qa, double qb, double qc, double qd, double qe,
                double gt, double ec, double ed, double r0, double x0,
                double h, long long n_blocks, long long steps_per_block):
    """Fixed-step path sampled every steps_per_block steps, no early stop."""
    cdef Params p
    rs_arr = np.empty(n_blocks + 1)
    xs_arr = np.empty(n_blocks + 1)
    cdef double[::1] rs = rs_arr
    cdef double[::1] xs = xs_arr
    cdef double r = r0
    cdef double x = x0
    cdef long long b, s
    _pack(&p, qa, qb, qc, qd, qe, gt, ec, ed)
    rs[0] = r
    xs[0] = x
    with nogil:
        for b in range(n_blocks):
            for s in range(steps_per_block):
                _rk4(&p, h, &r, &x)
            rs[b + 1] = r
            xs[b + 1] = x
    return rs_arr, xs_arr


def density_chunk(double qa, double qb, double qc, double qd, double qe,
                  double gt, double ec, double ed,
                  double[::1] r0_axis, double[::1] x0_axis,
                  double h, long long n_steps, long long need,
                  double steady_tol, double floor,
                  long long row_start, long long row_end,
                  double[:, ::1] out_r, double[:, ::1] out_x,
                  int8_t[:, ::1] out_code):
    """Fill rows [row_start, row_end) of a density grid in place (nogil)."""
    cdef Params p
    cdef long long i, j
    cdef long long n_cols = x0_axis.shape[0]
    cdef double r, x, t
    cdef int code
    _pack(&p, qa, qb, qc, qd, qe, gt, ec, ed)
    with nogil:
        for i in range(row_start, row_end):
            for j in range(n_cols):
                code = _integrate_terminal(&p, r0_axis[i], x0_axis[j],
                                           h, n_steps, need, steady_tol, floor,
                                           &r, &x, &t)
                out_r[i, j] = r
                out_x[i, j] = x
                out_code[i, j] = <int8_t>code


def abm_realization(double qa, double qb, double qc, double qd, double qe,
                    double gt, double ec, double ed, double r0,
                    long long n, long long t_end, seed,
                    int8_t[::1] strategies, bint complete,
                    int64_t[::1] nbr_offsets, int32_t[::1] nbr_indices,
                    double[::1] out_r, double[::1] out_x):
    """Run one realization of the microscopic update. See _pure.py."""
    cdef Params p
    cdef Rng rng
    cdef uint64_t seed_u64 = seed
    cdef long long nc = 0
    cdef long long t, s, i, j, jj, base, deg
    cdef double inv_n, tn, r, x, u, w, wr, pr, mix
    cdef int8_t si, sj
    _pack(&p, qa, qb, qc, qd, qe, gt, ec, ed)
    _seed_rng(&rng, seed_u64)
    for i in range(n):
        nc += strategies[i]
    inv_n = 1.0 / n
    tn = gt / n
    r = r0
    out_r[0] = r
    out_x[0] = nc * inv_n
    with nogil:
        for t in range(t_end):
            for s in range(n):
                i = <long long>(_uniform(&rng) * n)
                if complete:
                    jj = <long long>(_uniform(&rng) * (n - 1))
                    j = jj + 1 if jj >= i else jj
                else:
                    base = nbr_offsets[i]
                    deg = nbr_offsets[i + 1] - base
                    j = nbr_indices[base + <long long>(_uniform(&rng) * deg)]
                u = _uniform(&rng)
                x = nc * inv_n
                si = strategies[i]
                sj = strategies[j]
                if si != sj:
                    w = (p.qa * r + p.qb) * r + (p.qc * x + p.qd) * x + p.qe
                    if w > 1.0:
                        w = 1.0
                    elif w < -1.0:
                        w = -1.0
                    wr = w * r
                    pr = 0.5 - 0.5 * wr if si == 0 else 0.5 + 0.5 * wr
                    if u < pr:
                        strategies[i] = sj
                        nc += 1 if si == 0 else -1
                mix = x * p.ec + (1.0 - x) * p.ed
                r = r + tn * (r * (1.0 - r) - r * mix)
                if r > 1.0:
                    r = 1.0
                elif r < 0.0:
                    r = 0.0
            out_r[t + 1] = r
            out_x[t + 1] = nc * inv_n
    return r


def rng_stream(seed, long long count):
    """First `count` raw 64-bit outputs of the seeded generator."""
    cdef Rng rng
    cdef uint64_t seed_u64 = seed
    out_arr = np.empty(count, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef long long i
    _seed_rng(&rng, seed_u64)
    for i in range(count):
        out[i] = _next_u64(&rng)
    return out_arr
