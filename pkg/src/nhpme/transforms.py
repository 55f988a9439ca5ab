"""Changes of variables between radial and log coordinates, and rescalings."""

from __future__ import annotations

import math

import numpy as np
from scipy.interpolate import PchipInterpolator

from .core import DomainError, Field, Grid1D

__all__ = [
    "resample_log",
    "radial_to_log",
    "log_to_radial",
    "moving_frame_shift",
    "self_similar_rescale_pme",
    "to_ssvar",
]

# slack for log(exp(s)) round-off at the ends of a sampled range
_RANGE_SLACK = 1e-9


def _pchip(x, y, xq):
    if x.size == 2:
        return np.interp(xq, x, y)
    return PchipInterpolator(x, y, extrapolate=False)(xq)


def resample_log(r, values, s):
    """Monotone cubic resampling of radial samples at ``r = exp(s)``.

    No extrapolation: every ``s`` must lie within ``[log r[0], log r[-1]]``.
    """
    r = np.asarray(r, dtype=float)
    v = np.asarray(values, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(r <= 0):
        raise DomainError("radial samples must have r > 0")
    if np.any(np.diff(r) <= 0):
        raise DomainError("radial samples must be strictly increasing in r")
    if np.any(~np.isfinite(v)) or np.any(v < 0):
        raise DomainError("radial sample values must be finite and >= 0")
    logr = np.log(r)
    lo, hi = logr[0], logr[-1]
    if s.size and (s.min() < lo - _RANGE_SLACK or s.max() > hi + _RANGE_SLACK):
        raise DomainError(
            f"requested s in [{s.min():.6g}, {s.max():.6g}] outside sampled "
            f"range [{lo:.6g}, {hi:.6g}]")
    out = _pchip(logr, v, np.clip(s, lo, hi))
    # pchip stays within the data bounds; clip the last ulp anyway
    return np.clip(out, v.min(), v.max())


def radial_to_log(radial_samples, grid: Grid1D, t: float = 0.0) -> Field:
    """Resample ``[(r_j, u_j)]`` onto the cell centres ``s_i`` of ``grid``."""
    arr = np.asarray(radial_samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DomainError("radial_samples must be a sequence of (r, value) pairs")
    return Field(grid, t, resample_log(arr[:, 0], arr[:, 1], grid.centers))


def log_to_radial(field: Field, r_nodes) -> np.ndarray:
    """Interpolate ``field`` at ``s = log r``; returns an ``(n, 2)`` array of ``(r, u)``."""
    r = np.asarray(r_nodes, dtype=float)
    if np.any(r <= 0):
        raise DomainError("r_nodes must be > 0")
    s = np.log(r)
    centers = field.grid.centers
    if s.size and (s.min() < centers[0] - _RANGE_SLACK
                   or s.max() > centers[-1] + _RANGE_SLACK):
        raise DomainError("r_nodes fall outside the grid's cell-centre range")
    vals = _pchip(centers, np.asarray(field.values), np.clip(s, centers[0], centers[-1]))
    vals = np.clip(vals, field.values.min(), field.values.max())
    return np.column_stack([r, vals])


def moving_frame_shift(field: Field, N: int, t: float) -> Field:
    """Map a linear-case field from the frame ``sigma = log r + (N-2) t`` to ``s = log r``.

    Values are untouched; the grid is translated so that ``s_i = sigma_i - (N-2) t``.
    The identity when ``N = 2`` or ``t = 0``.
    """
    if N not in (1, 2):
        raise DomainError("N must be 1 or 2")
    shift = (N - 2) * t
    if shift == 0:
        return field
    g = field.grid
    grid = Grid1D(g.s_min - shift, g.s_max - shift, g.n_cells)
    return Field(grid, field.t, field.values)


def self_similar_rescale_pme(w, lam: float):
    """Lazy rescaling ``(s, t) -> w(lam**0.5 * s, lam * t)``.

    Maps solutions of ``w_t = (w^m)_ss`` to solutions.
    """
    if not lam > 0:
        raise DomainError("lambda must be > 0")
    root = math.sqrt(lam)

    def rescaled(s, t):
        return w(root * np.asarray(s, dtype=float), lam * t)

    return rescaled


def to_ssvar(field: Field, m: float):
    """Self-similar variables ``y = t^{-1/m} s``, ``ubar = t^{1/m} w``.

    Returns the pair of arrays ``(y, ubar)``.
    """
    if field.t <= 0:
        raise DomainError("self-similar variables need t > 0")
    scale = field.t ** (1.0 / m)
    return field.s / scale, scale * np.asarray(field.values)
