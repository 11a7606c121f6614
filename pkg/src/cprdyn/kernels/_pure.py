"""Pure-Python kernels: the portable fallback backend.

Every function here has a compiled twin in ``_ckern.pyx`` with the same
signature and, crucially, the same floating-point expression order, so the
two backends produce identical results (the extension is compiled with FMA
contraction disabled). Keep the arithmetic in the two files in lockstep when
editing either one.

All step counts arrive as precomputed integers; the callers own any rounding
of time spans to steps, so both backends see exactly the same loop bounds.

Terminal codes: 0 = steady, 1 = depleted, 2 = max time reached, 3 = numeric
failure (non-finite state).
"""

from __future__ import annotations

import numpy as np

from ..rng import Xoshiro256StarStar

BACKEND_NAME = "python"

STEADY = 0
DEPLETED = 1
MAX_TIME = 2
NUMERIC_FAILURE = 3


def _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r, x):
    mix = x * ec + (1.0 - x) * ed
    dr = gt * (r * (1.0 - r) - r * mix)
    w = (qa * r + qb) * r + (qc * x + qd) * x + qe
    if w > 1.0:
        w = 1.0
    elif w < -1.0:
        w = -1.0
    dx = -w * r * x * (1.0 - x)
    return dr, dx


def rk4_step(qa, qb, qc, qd, qe, gt, ec, ed, r, x, h):
    """One classical Runge-Kutta step, result clamped to the unit square."""
    half = 0.5 * h
    sixth = h / 6.0
    k1r, k1x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r, x)
    k2r, k2x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r + half * k1r, x + half * k1x)
    k3r, k3x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r + half * k2r, x + half * k2x)
    k4r, k4x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r + h * k3r, x + h * k3x)
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
    return r, x


def integrate_terminal(qa, qb, qc, qd, qe, gt, ec, ed, r0, x0,
                       h, n_steps, need, steady_tol, floor):
    """Integrate until steady, depleted, or out of steps.

    Steadiness requires the drift norm below steady_tol at `need`
    consecutive visited states (the stationarity window plus one state).
    Depletion (R below the floor) is checked first, since drift also
    vanishes on the way to R = 0.

    Returns (r, x, code, t).
    """
    tol2 = steady_tol * steady_tol
    r = r0
    x = x0
    count = 0
    k = 0
    while True:
        k1r, k1x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r, x)
        if r < floor:
            return r, x, DEPLETED, k * h
        if k1r * k1r + k1x * k1x < tol2:
            count += 1
            if count >= need:
                return r, x, STEADY, k * h
        else:
            count = 0
        if k >= n_steps:
            return r, x, MAX_TIME, k * h
        half = 0.5 * h
        sixth = h / 6.0
        k2r, k2x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r + half * k1r, x + half * k1x)
        k3r, k3x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r + half * k2r, x + half * k2x)
        k4r, k4x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r + h * k3r, x + h * k3x)
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
            return r, x, NUMERIC_FAILURE, k * h
        k += 1


def integrate_record(qa, qb, qc, qd, qe, gt, ec, ed, r0, x0,
                     h, n_steps, need, steady_tol, floor, record_every):
    """integrate_terminal plus a sampled path every record_every steps.

    Returns (times, rs, xs, code, t_final); the final state is always the
    last sample.
    """
    tol2 = steady_tol * steady_tol
    times = [0.0]
    rs = [r0]
    xs = [x0]
    r = r0
    x = x0
    count = 0
    k = 0
    code = MAX_TIME
    while True:
        k1r, k1x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r, x)
        if r < floor:
            code = DEPLETED
            break
        if k1r * k1r + k1x * k1x < tol2:
            count += 1
            if count >= need:
                code = STEADY
                break
        else:
            count = 0
        if k >= n_steps:
            break
        half = 0.5 * h
        sixth = h / 6.0
        k2r, k2x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r + half * k1r, x + half * k1x)
        k3r, k3x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r + half * k2r, x + half * k2x)
        k4r, k4x = _deriv(qa, qb, qc, qd, qe, gt, ec, ed, r + h * k3r, x + h * k3x)
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
            code = NUMERIC_FAILURE
            break
        k += 1
        if k % record_every == 0:
            times.append(k * h)
            rs.append(r)
            xs.append(x)
    t_final = k * h
    if times[-1] != t_final or rs[-1] != r or xs[-1] != x:
        times.append(t_final)
        rs.append(r)
        xs.append(x)
    return (np.asarray(times), np.asarray(rs), np.asarray(xs), code, t_final)


def sample_path(qa, qb, qc, qd, qe, gt, ec, ed, r0, x0, h, n_blocks, steps_per_block):
    """Fixed-step path sampled every steps_per_block steps, no early stop.

    Returns (rs, xs) of length n_blocks + 1 including the initial state.
    A non-finite state simply shows up as NaN samples.
    """
    rs = np.empty(n_blocks + 1)
    xs = np.empty(n_blocks + 1)
    r = r0
    x = x0
    rs[0] = r
    xs[0] = x
    for b in range(n_blocks):
        for _ in range(steps_per_block):
            r, x = rk4_step(qa, qb, qc, qd, qe, gt, ec, ed, r, x, h)
        rs[b + 1] = r
        xs[b + 1] = x
    return rs, xs


def density_chunk(qa, qb, qc, qd, qe, gt, ec, ed, r0_axis, x0_axis,
                  h, n_steps, need, steady_tol, floor,
                  row_start, row_end, out_r, out_x, out_code):
    """Fill rows [row_start, row_end) of a density grid in place.

    Rows index initial resource, columns initial cooperator fraction. The
    compiled twin releases the GIL here, which is what makes threaded sweeps
    effective.
    """
    n_cols = len(x0_axis)
    for i in range(row_start, row_end):
        r0 = r0_axis[i]
        for j in range(n_cols):
            r, x, code, _ = integrate_terminal(
                qa, qb, qc, qd, qe, gt, ec, ed, r0, x0_axis[j],
                h, n_steps, need, steady_tol, floor)
            out_r[i, j] = r
            out_x[i, j] = x
            out_code[i, j] = code


def abm_realization(qa, qb, qc, qd, qe, gt, ec, ed, r0, n, t_end, seed,
                    strategies, complete, nbr_offsets, nbr_indices,
                    out_r, out_x):
    """Run one realization of the microscopic update.

    One macroscopic time unit is n micro-steps. Each micro-step draws a
    player i, a neighbor j, and an adoption variate (always three draws, so
    the stream position is independent of the strategies encountered),
    applies the pairwise-comparison switch at the current (R, x), then
    updates the resource by the discretized growth-extraction balance using
    the pre-switch values. strategies is modified in place; out_r and out_x
    receive samples at integer times 0..t_end.
    """
    rng = Xoshiro256StarStar(seed)
    nc = 0
    for s in strategies:
        nc += int(s)
    inv_n = 1.0 / n
    tn = gt / n
    r = r0
    out_r[0] = r
    out_x[0] = nc * inv_n
    for t in range(t_end):
        for _ in range(n):
            i = int(rng.uniform() * n)
            if complete:
                jj = int(rng.uniform() * (n - 1))
                j = jj + 1 if jj >= i else jj
            else:
                base = nbr_offsets[i]
                deg = nbr_offsets[i + 1] - base
                j = nbr_indices[base + int(rng.uniform() * deg)]
            u = rng.uniform()
            x = nc * inv_n
            si = strategies[i]
            sj = strategies[j]
            if si != sj:
                w = (qa * r + qb) * r + (qc * x + qd) * x + qe
                if w > 1.0:
                    w = 1.0
                elif w < -1.0:
                    w = -1.0
                wr = w * r
                p = 0.5 - 0.5 * wr if si == 0 else 0.5 + 0.5 * wr
                if u < p:
                    strategies[i] = sj
                    nc += 1 if si == 0 else -1
            mix = x * ec + (1.0 - x) * ed
            r = r + tn * (r * (1.0 - r) - r * mix)
            if r > 1.0:
                r = 1.0
            elif r < 0.0:
                r = 0.0
        out_r[t + 1] = r
        out_x[t + 1] = nc * inv_n
    return r


def rng_stream(seed, count):
    """First `count` raw 64-bit outputs of the seeded generator."""
    rng = Xoshiro256StarStar(seed)
    out = np.empty(count, dtype=np.uint64)
    for i in range(count):
        out[i] = rng.next_u64()
    return out
