"""Domain types, the log-variable grid and the library of initial data.

Everything downstream works in the log variable ``s = log r``; radial values
only appear when a datum is sampled or a result is written out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol, Sequence, Union

import numpy as np

__all__ = [
    "DomainError",
    "Grid1D",
    "Field",
    "Bump",
    "Plateau",
    "Table",
    "ProfileSnapshot",
    "InitialDatum",
    "ProblemSpec",
    "build_initial_field",
    "weighted_mass",
]


class DomainError(ValueError):
    """Raised when an input violates a documented precondition."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centred grid on ``[s_min, s_max]``."""

    s_min: float
    s_max: float
    n_cells: int

    def __post_init__(self):
        if not (math.isfinite(self.s_min) and math.isfinite(self.s_max)):
            raise DomainError("grid bounds must be finite")
        if not self.s_min < self.s_max:
            raise DomainError(f"need s_min < s_max, got {self.s_min}, {self.s_max}")
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise DomainError(f"n_cells must be a positive integer, got {self.n_cells}")

    @property
    def h(self) -> float:
        return (self.s_max - self.s_min) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return self.s_min + (np.arange(self.n_cells) + 0.5) * self.h

    @property
    def length(self) -> float:
        return self.s_max - self.s_min

    def same_as(self, other: "Grid1D") -> bool:
        return (self.n_cells == other.n_cells
                and math.isclose(self.s_min, other.s_min, rel_tol=0, abs_tol=1e-12)
                and math.isclose(self.s_max, other.s_max, rel_tol=0, abs_tol=1e-12))


@dataclass(frozen=True, eq=False)
class Field:
    """Nonnegative grid function ``w(s_i, t)``; values are read-only."""

    grid: Grid1D
    t: float
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.n_cells,):
            raise DomainError(
                f"values has shape {v.shape}, grid has {self.grid.n_cells} cells")
        if not np.all(np.isfinite(v)):
            bad = int(np.flatnonzero(~np.isfinite(v))[0])
            raise DomainError(f"non-finite value at cell {bad}")
        if v.size and v.min() < 0.0:
            bad = int(np.argmin(v))
            raise DomainError(f"negative value {v[bad]:.3e} at cell {bad}")
        if self.t < 0:
            raise DomainError("field time must be >= 0")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def s(self) -> np.ndarray:
        return self.grid.centers

    def with_values(self, values, t=None) -> "Field":
        return Field(self.grid, self.t if t is None else t, values)


class _LogEvaluable(Protocol):
    def log_value(self, s, t): ...


@dataclass(frozen=True)
class Bump:
    """``u0(r) = amplitude * (radius - r**2)_+``, optionally with a hole.

    ``radius`` enters squared-free, exactly as in ``0.1 * (0.5 - x**2)_+``.
    With ``hole > 0`` the datum is multiplied by ``(1 - hole**2 / r**2)_+``
    so that it vanishes on ``r <= hole``: ``u0(0) = 0`` and the weighted
    mass ``int u0(r)/r dr`` is finite.
    """

    amplitude: float
    radius: float
    hole: float = 0.0

    def __post_init__(self):
        if self.amplitude < 0 or self.radius <= 0 or self.hole < 0:
            raise DomainError("Bump needs amplitude >= 0, radius > 0, hole >= 0")
        if self.hole > 0 and self.hole ** 2 >= self.radius:
            raise DomainError("Bump hole swallows the whole support")

    @property
    def origin_value(self) -> float:
        return 0.0 if self.hole > 0 else self.amplitude * self.radius

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        out = self.amplitude * np.maximum(self.radius - r * r, 0.0)
        if self.hole > 0:
            with np.errstate(divide="ignore"):
                out = out * np.maximum(1.0 - self.hole ** 2 / (r * r), 0.0)
        return out

    def log_value(self, s):
        s = np.asarray(s, dtype=float)
        e2 = np.exp(2.0 * s)
        out = self.amplitude * np.maximum(self.radius - e2, 0.0)
        if self.hole > 0:
            out = out * np.maximum(1.0 - self.hole ** 2 * np.exp(-2.0 * s), 0.0)
        return out


@dataclass(frozen=True)
class Plateau:
    """``u0(r) = K / (1 + (r/scale)**decay)``.

    Satisfies ``0 <= u0 <= K``, ``u0(0) = K`` and ``u0 -> 0`` at infinity.
    Near the origin ``|u0 - K| <= K (r/scale)**decay``, so it is Hölder with
    exponent ``min(decay, 1)``.
    """

    K: float
    decay: float
    scale: float = 1.0

    def __post_init__(self):
        if self.K <= 0 or self.decay <= 0 or self.scale <= 0:
            raise DomainError("Plateau needs K > 0, decay > 0, scale > 0")

    @property
    def origin_value(self) -> float:
        return self.K

    @property
    def holder_exponent(self) -> float:
        return min(self.decay, 1.0)

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return self.K / (1.0 + (r / self.scale) ** self.decay)

    def log_value(self, s):
        z = self.decay * (np.asarray(s, dtype=float) - math.log(self.scale))
        # K * logistic(-z), written to avoid overflow in exp
        return self.K * np.where(z > 0, np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))),
                                 1.0 / (1.0 + np.exp(-np.abs(z))))


@dataclass(frozen=True, eq=False)
class Table:
    """Radial samples ``(r_j, u0(r_j))``, resampled monotonically in ``log r``."""

    r: Sequence[float]
    values: Sequence[float]

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size < 2:
            raise DomainError("Table needs matching 1-D arrays with >= 2 samples")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "values", v)

    @property
    def origin_value(self) -> float:
        return float(self.values[np.argmin(self.r)])

    def log_value(self, s):
        from .transforms import resample_log

        return resample_log(self.r, self.values, np.asarray(s, dtype=float))


@dataclass(frozen=True)
class ProfileSnapshot:
    """Start exactly on an asymptotic profile at time ``t0``."""

    profile: _LogEvaluable
    t0: float

    def log_value(self, s):
        return np.asarray(self.profile.log_value(np.asarray(s, dtype=float), self.t0),
                          dtype=float)

    @property
    def origin_value(self) -> float:
        return float(self.profile.log_value(np.array([-1e3]), self.t0)[0])


InitialDatum = Union[Bump, Plateau, Table, ProfileSnapshot]


@dataclass(frozen=True)
class ProblemSpec:
    dimension: int
    m: float
    datum: InitialDatum
    s_min: float
    s_max: float
    n_cells: int
    t_end: float
    output_times: tuple = field(default=())

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise DomainError("dimension must be 1 or 2")
        if not self.m >= 1:
            raise DomainError("m must be >= 1")
        if not self.s_min < 0 < self.s_max:
            raise DomainError("need s_min < 0 < s_max")
        if self.n_cells < 16:
            raise DomainError("n_cells must be >= 16")
        if not self.t_end > 0:
            raise DomainError("t_end must be > 0")
        times = tuple(float(t) for t in (self.output_times or (self.t_end,)))
        if any(b <= a for a, b in zip(times, times[1:])):
            raise DomainError("output_times must be strictly increasing")
        if times[0] <= 0 or times[-1] > self.t_end:
            raise DomainError("output_times must lie in (0, t_end]")
        object.__setattr__(self, "output_times", times)

    @property
    def grid(self) -> Grid1D:
        return Grid1D(self.s_min, self.s_max, self.n_cells)


def build_initial_field(datum: InitialDatum, grid: Grid1D) -> Field:
    """Sample ``w0(s_i) = u0(exp(s_i))`` at the cell centres."""
    values = np.asarray(datum.log_value(grid.centers), dtype=float)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise DomainError(f"datum is not finite at s = {grid.centers[bad]:.6g}")
    if values.min() < 0:
        bad = int(np.argmin(values))
        raise DomainError(
            f"datum is negative ({values[bad]:.3e}) at s = {grid.centers[bad]:.6g}")
    return Field(grid, 0.0, values)


def weighted_mass(field: Field) -> float:
    """Midpoint rule for ``int w ds``, i.e. ``int u0(r)/r dr`` on the truncated grid."""
    return float(np.sum(field.values) * field.grid.h)
