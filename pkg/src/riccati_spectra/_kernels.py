"""Status-coded, resumable Euler-Maruyama stepping kernel.

The kernel advances a whole family of trajectories sharing one Brownian
path and one adaptive step schedule.  It returns to the caller whenever it
needs fresh noise or a larger output buffer, carrying its full state in
the arrays it was handed, so a run can be resumed exactly where it left
off.  One standard normal is consumed per time step, active or not, which
keeps the noise stream independent of the restart bookkeeping.

fastmath stays off: it licenses LLVM to assume no NaN/inf ever occurs,
which silently disables the isfinite abort check (verified empirically).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

DONE = 0
NEED_NOISE = 1
GROW_TIMES = 2
GROW_PATH = 3
NONFINITE = -1

FAM_STATIONARY = 0
FAM_AIRY = 1
FAM_LINEAR = 2


@njit(cache=True, nogil=True)
def advance_family(
    fam,
    levels,
    beta,
    namp,
    dt0,
    cutoff,
    entry,
    horizon,
    record_dt,
    noise,
    sc,
    ic,
    x,
    active,
    reentry,
    counts,
    times,
    rec_t,
    rec_x,
):
    """Advance the coupled family until done, out of noise, or out of room.

    Scalar state lives in sc (t, next recording time, diagnostic value) and
    ic (steps taken, recorded rows, diagnostic level, normals consumed).
    Inactive levels are in post-blow-up transit; they hold x = nan until
    their re-entry time passes a step boundary.  Buffer-capacity returns
    happen only after a fully completed step, so no rollback is needed;
    on entry every counts[k] and the recording cursor must be strictly
    below capacity.
    """
    K = x.shape[0]
    n = noise.shape[0]
    cap_t = times.shape[1]
    cap_r = rec_t.shape[0]
    t = sc[0]
    next_rec = sc[1]
    steps = ic[0]
    rec_len = ic[1]
    i = 0
    inv_cut = 1.0 / cutoff
    inv_entry = 1.0 / entry
    recording = record_dt > 0.0
    entry2 = entry * entry
    status = DONE
    while t < horizon:
        if i >= n:
            status = NEED_NOISE
            break
        m2 = 0.0
        for k in range(K):
            if active[k] == 1:
                v = x[k] * x[k]
                if v > m2:
                    m2 = v
            elif t >= reentry[k]:
                active[k] = 1
                x[k] = entry
                if entry2 > m2:
                    m2 = entry2
        dt = dt0 / (1.0 + m2)
        t_next = t + dt
        if t_next > horizon:
            dt = horizon - t
            t_next = horizon
        dw = namp * math.sqrt(dt) * noise[i]
        i += 1
        steps += 1
        event = 0
        for k in range(K):
            if active[k] == 0:
                continue
            xk = x[k]
            if fam == FAM_STATIONARY:
                dr = levels[k] - xk * xk
            elif fam == FAM_AIRY:
                dr = t - levels[k] - xk * xk
            else:
                dr = 0.25 * beta * t - levels[k] - xk * xk
            xn = xk + dr * dt + dw
            if xn > -cutoff:
                if math.isfinite(xn):
                    x[k] = xn
                else:
                    sc[0] = t
                    sc[1] = next_rec
                    sc[2] = xk
                    ic[0] = steps
                    ic[1] = rec_len
                    ic[2] = k
                    ic[3] = i
                    return NONFINITE
            else:
                zeta = t_next + inv_cut
                if zeta <= horizon:
                    c = counts[k]
                    times[k, c] = zeta
                    counts[k] = c + 1
                    if c + 2 > cap_t:
                        event = GROW_TIMES
                active[k] = 0
                reentry[k] = zeta + inv_entry
                x[k] = np.nan
        t = t_next
        if recording and t >= next_rec:
            rec_t[rec_len] = t
            for k in range(K):
                rec_x[k, rec_len] = x[k]
            rec_len += 1
            if rec_len >= cap_r:
                event = GROW_PATH
            while next_rec <= t:
                next_rec += record_dt
        if event != 0:
            status = event
            break
    sc[0] = t
    sc[1] = next_rec
    ic[0] = steps
    ic[1] = rec_len
    ic[3] = i
    return status
