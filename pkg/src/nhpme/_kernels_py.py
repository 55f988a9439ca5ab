"""Pure-numpy fallback for the compiled kernels in ``_kernels.pyx``.

Same signatures, same status codes, same in-place semantics.
"""

import numpy as np

OK, NEGATIVE, NONFINITE, MAX_STEPS = 0, 1, 2, 3


def _power(x, m):
    if m == 1.0:
        return x.copy()
    if m == 2.0:
        return x * x
    if m == 3.0:
        return x * x * x
    return np.power(x, m)


def cfl_dt(w, h, m, b, safety, dt_max, left_val=0.0, right_val=0.0,
           left_kind=0, right_kind=0):
    wmax = float(w.max()) if w.size else 0.0
    if left_kind == 1:
        wmax = max(wmax, left_val)
    if right_kind == 1:
        wmax = max(wmax, right_val)
    if wmax <= 0.0:
        return dt_max
    dt = safety * h * h / (m * wmax ** (m - 1.0) * (2.0 + b * h))
    return min(dt, dt_max)


def step(w, dt, h, m, b, left_kind, left_val, right_kind, right_val, neg_tol):
    # non-finite input is reported through the status code, not a warning
    with np.errstate(invalid="ignore", over="ignore"):
        return _step(w, dt, h, m, b, left_kind, left_val, right_kind, right_val, neg_tol)


def _step(w, dt, h, m, b, left_kind, left_val, right_kind, right_val, neg_tol):
    n = w.shape[0]
    W = _power(w, m)
    flux = np.empty(n + 1)
    if left_kind == 1:
        Wl = left_val ** m
        flux[0] = b * Wl - (W[0] - Wl) / h
    else:
        flux[0] = 0.0
    flux[1:n] = b * W[:-1] - (W[1:] - W[:-1]) / h
    if right_kind == 1:
        Wr = right_val ** m
        flux[n] = b * W[-1] - (Wr - W[-1]) / h
    else:
        flux[n] = 0.0
    new = w - (dt / h) * (flux[1:] - flux[:-1])
    if not np.all(np.isfinite(new)):
        return NONFINITE, 0.0
    min_raw = min(float(new.min()), 0.0)
    if min_raw < -neg_tol:
        return NEGATIVE, min_raw
    np.maximum(new, 0.0, out=w)
    return OK, min_raw


def evolve(w, t0, t1, h, m, b, left_kind, left_val, right_kind, right_val,
           safety, dt_max, max_steps, neg_tol):
    t = t0
    steps = 0
    min_raw = 0.0
    status = OK
    while t < t1:
        if steps >= max_steps:
            status = MAX_STEPS
            break
        dt = cfl_dt(w, h, m, b, safety, dt_max, left_val, right_val,
                    left_kind, right_kind)
        last = t + dt >= t1
        if last:
            dt = t1 - t
        status, mr = step(w, dt, h, m, b, left_kind, left_val, right_kind,
                          right_val, neg_tol)
        min_raw = min(min_raw, mr)
        steps += 1
        if status != OK:
            break
        t = t1 if last else t + dt
        if last:
            break
    return status, t, steps, min_raw
