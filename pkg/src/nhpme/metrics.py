"""Error norms, the graph distance to the peak profile, and decay-rate fits."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .core import DomainError, Field

logger = logging.getLogger(__name__)

__all__ = [
    "ConvergenceReport",
    "RateEstimate",
    "sup_error",
    "l1_error",
    "weighted_lp_error",
    "graph_distance",
    "linfty_bound_from_l1",
    "rate_estimate",
]


def _values_and_grid(a):
    if isinstance(a, Field):
        return np.asarray(a.values, dtype=float), a.grid
    return np.asarray(a, dtype=float), None


def _pair(a, b):
    va, ga = _values_and_grid(a)
    vb, gb = _values_and_grid(b)
    if ga is not None and gb is not None and not ga.same_as(gb):
        raise DomainError("fields live on different grids")
    if va.shape != vb.shape:
        raise DomainError(f"shape mismatch {va.shape} vs {vb.shape}")
    return va, vb, ga or gb


def sup_error(a, b) -> float:
    """``max_i |a_i - b_i|``; ``a``/``b`` are Fields or arrays on the same grid."""
    va, vb, _ = _pair(a, b)
    return float(np.max(np.abs(va - vb))) if va.size else 0.0


def _spacing(grid, h):
    if h is not None:
        return float(h)
    if grid is None:
        raise DomainError("pass h when comparing bare arrays")
    return grid.h


def l1_error(a, b, h: float | None = None) -> float:
    """Plain ``int |a - b| ds`` by the midpoint rule."""
    va, vb, grid = _pair(a, b)
    return float(np.sum(np.abs(va - vb)) * _spacing(grid, h))


def weighted_lp_error(a, b, p: float, h: float | None = None) -> float:
    """``||a - b||_{p,1}`` computed in log variables: ``(2 int |a-b|^p ds)^{1/p}``.

    ``dx/|x|`` becomes ``ds``; the factor 2 accounts for both signs of ``x``.
    """
    if not p >= 1:
        raise DomainError("p must be >= 1")
    va, vb, grid = _pair(a, b)
    integral = float(np.sum(np.abs(va - vb) ** p) * _spacing(grid, h))
    return (2.0 * integral) ** (1.0 / p)


def graph_distance(fn, y, ref) -> float:
    """Sup over samples of the distance from ``fn(y_i)`` to the value set ``ref(y_i)``.

    ``ref`` is either a callable returning values (univalued) or an object
    with ``value_set(y) -> (lo, hi)``.  At a jump the value set is the
    closed interval ``[lo, hi]``.
    """
    v = np.asarray(fn, dtype=float)
    y = np.asarray(y, dtype=float)
    if v.shape != y.shape:
        raise DomainError("fn samples and abscissae differ in shape")
    if hasattr(ref, "value_set"):
        lo, hi = ref.value_set(y)
    else:
        lo = hi = np.asarray(ref(y), dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if np.any(lo > hi) or np.any(~np.isfinite(lo)) or np.any(~np.isfinite(hi)):
        raise DomainError("empty or non-finite value set")
    d = np.maximum(np.maximum(lo - v, v - hi), 0.0)
    return float(d.max()) if d.size else 0.0


def linfty_bound_from_l1(l1_error: float, H: float, alpha: float) -> float:
    """``H^{1/(1+a)} ((1+a)/a ||Phi||_1)^{a/(1+a)}`` for a Hölder(a, H) ``Phi``."""
    if not (l1_error > 0 and H > 0 and alpha > 0):
        raise DomainError("all arguments must be > 0")
    if alpha > 1:
        raise DomainError("Hölder exponent must be <= 1")
    return H ** (1.0 / (1.0 + alpha)) * ((1.0 + alpha) / alpha * l1_error) ** (
        alpha / (1.0 + alpha))


@dataclass(frozen=True)
class RateEstimate:
    slope: float
    intercept: float
    residual: float
    n_points: int


def rate_estimate(points, burn_in: float = 0.0) -> RateEstimate:
    """Least-squares slope of ``log(error)`` against ``log(t)``.

    Points with ``t < burn_in`` are ignored; nonpositive errors are dropped
    with a warning.
    """
    kept = []
    for t, e in points:
        if t < burn_in:
            continue
        if not (e > 0 and t > 0):
            logger.warning("dropping point (t=%g, error=%g) from rate fit", t, e)
            continue
        kept.append((math.log(t), math.log(e)))
    if len(kept) < 3:
        raise DomainError(f"need >= 3 usable points for a rate, have {len(kept)}")
    X = np.array(kept)
    A = np.column_stack([X[:, 0], np.ones(len(kept))])
    coef, *_ = np.linalg.lstsq(A, X[:, 1], rcond=None)
    resid = X[:, 1] - A @ coef
    return RateEstimate(float(coef[0]), float(coef[1]),
                        float(np.sqrt(np.mean(resid ** 2))), len(kept))


@dataclass
class ConvergenceReport:
    """Per-time errors for one metric; ``scaled`` applies the time-dependent prefactor of the convergence statement."""

    metric: str
    rows: list = field(default_factory=list)
    rate: RateEstimate | None = None
    passed: bool | None = None

    def add(self, t: float, error: float, scaled: float):
        if self.rows and t <= self.rows[-1][0]:
            raise DomainError("report times must be strictly increasing")
        if error < 0 or scaled < 0:
            raise DomainError("errors must be >= 0")
        self.rows.append((float(t), float(error), float(scaled)))

    @property
    def times(self):
        return [r[0] for r in self.rows]

    @property
    def errors(self):
        return [r[1] for r in self.rows]

    @property
    def scaled(self):
        return [r[2] for r in self.rows]

    def fit_rate(self, burn_in: float = 0.0):
        pts = [(t, s) for t, _, s in self.rows]
        try:
            self.rate = rate_estimate(pts, burn_in)
        except DomainError:
            self.rate = None
        return self.rate

    def nonincreasing(self, slack: float = 0.0) -> bool:
        s = self.scaled
        return all(b <= a * (1 + slack) for a, b in zip(s, s[1:]))
