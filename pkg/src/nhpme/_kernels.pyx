# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled time-stepping core for the log-variable finite-volume scheme.

Mirrors :mod:`nhpme._kernels_py` exactly in structure; the two are checked
against each other in the test-suite.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, isnan, fabs

cnp.import_array()

# status codes shared with the Python fallback
DEF OK = 0
DEF NEGATIVE = 1
DEF NONFINITE = 2
DEF MAX_STEPS = 3


cdef inline double _power(double x, double m, int im) nogil:
    if im == 1:
        return x
    elif im == 2:
        return x * x
    elif im == 3:
        return x * x * x
    elif im == 4:
        return (x * x) * (x * x)
    return pow(x, m)


cdef double _cfl(double[::1] w, double h, double m, double b, double safety,
                 double dt_max, double left_val, double right_val,
                 int left_kind, int right_kind) nogil:
    cdef Py_ssize_t i, n = w.shape[0]
    cdef double wmax = 0.0, dt
    for i in range(n):
        if w[i] > wmax:
            wmax = w[i]
    if left_kind == 1 and left_val > wmax:
        wmax = left_val
    if right_kind == 1 and right_val > wmax:
        wmax = right_val
    if wmax <= 0.0:
        return dt_max
    dt = safety * h * h / (m * pow(wmax, m - 1.0) * (2.0 + b * h))
    if dt > dt_max:
        return dt_max
    return dt


cdef int _step(double[::1] w, double[::1] W, double[::1] flux, double dt,
               double h, double m, int im, double b, int left_kind,
               double left_val, int right_kind, double right_val,
               double neg_tol, double *min_raw, bint have_W) nogil:
    cdef Py_ssize_t i, n = w.shape[0]
    cdef double Wl, Wr, val, lam = dt / h
    if not have_W:
        for i in range(n):
            W[i] = _power(w[i], m, im)
    # face i holds the flux through the left face of cell i; face n is the right end
    if left_kind == 1:
        Wl = _power(left_val, m, im)
        flux[0] = b * Wl - (W[0] - Wl) / h
    else:
        flux[0] = 0.0
    for i in range(1, n):
        flux[i] = b * W[i - 1] - (W[i] - W[i - 1]) / h
    if right_kind == 1:
        Wr = _power(right_val, m, im)
        flux[n] = b * W[n - 1] - (Wr - W[n - 1]) / h
    else:
        flux[n] = 0.0
    for i in range(n):
        val = w[i] - lam * (flux[i + 1] - flux[i])
        if isnan(val) or fabs(val) > 1e300:
            return NONFINITE
        if val < min_raw[0]:
            min_raw[0] = val
        if val < 0.0:
            if val < -neg_tol:
                return NEGATIVE
            val = 0.0
        w[i] = val
    return OK


def cfl_dt(double[::1] w, double h, double m, double b, double safety,
           double dt_max, double left_val=0.0, double right_val=0.0,
           int left_kind=0, int right_kind=0):
    return _cfl(w, h, m, b, safety, dt_max, left_val, right_val,
                left_kind, right_kind)


def step(double[::1] w, double dt, double h, double m, double b,
         int left_kind, double left_val, int right_kind, double right_val,
         double neg_tol):
    """Advance ``w`` in place by one step of size ``dt``; returns (status, min_raw)."""
    cdef Py_ssize_t n = w.shape[0]
    cdef double[::1] W = np.empty(n)
    cdef double[::1] flux = np.empty(n + 1)
    cdef double min_raw = 0.0
    cdef int im = <int>m if m == <int>m else 0
    cdef int status
    with nogil:
        status = _step(w, W, flux, dt, h, m, im, b, left_kind, left_val,
                       right_kind, right_val, neg_tol, &min_raw, False)
    return status, min_raw


def evolve(double[::1] w, double t0, double t1, double h, double m, double b,
           int left_kind, double left_val, int right_kind, double right_val,
           double safety, double dt_max, long max_steps, double neg_tol):
    """Advance ``w`` in place from ``t0`` to exactly ``t1``.

    Returns ``(status, t_reached, steps_taken, min_raw)``.
    """
    cdef Py_ssize_t n = w.shape[0]
    cdef double[::1] W = np.empty(n)
    cdef double[::1] flux = np.empty(n + 1)
    cdef double t = t0, dt, min_raw = 0.0
    cdef long steps = 0
    cdef int im = <int>m if m == <int>m else 0
    cdef int status = OK
    cdef bint vec = im == 0
    # non-integer m: numpy's vectorized power beats a scalar pow per cell
    w_arr = np.asarray(w)
    W_arr = np.asarray(W)
    while t < t1:
        if steps >= max_steps:
            status = MAX_STEPS
            break
        dt = _cfl(w, h, m, b, safety, dt_max, left_val, right_val,
                  left_kind, right_kind)
        last = t + dt >= t1
        if last:
            dt = t1 - t
        if vec:
            np.power(w_arr, m, out=W_arr)
        with nogil:
            status = _step(w, W, flux, dt, h, m, im, b, left_kind, left_val,
                           right_kind, right_val, neg_tol, &min_raw, vec)
        steps += 1
        if status != OK:
            break
        if last:
            t = t1
            break
        t += dt
    return status, t, steps, min_raw
