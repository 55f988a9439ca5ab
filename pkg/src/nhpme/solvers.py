"""Explicit conservative finite-volume solvers in the log variable.

One kernel covers the three transformed equations::

    w_t = (w^m)_ss                   N = 2, m > 1
    w_t = (w^m)_ss - (w^m)_s         N = 1, m > 1
    w_t = w_ss                       m = 1, in the frame sigma = log r + (N-2) t

Face fluxes act on ``W = w^m``: diffusive ``-(W_{i+1} - W_i)/h`` plus the
convective ``b * W_i`` taken from the upwind (left) cell.  Boundaries are
imposed through ghost cells, so the step stays monotone under ``cfl_dt``.
A direct solver of the radial equation is kept for cross-validation.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import kernels
from .core import DomainError, Field, Grid1D, ProblemSpec, build_initial_field
from .transforms import moving_frame_shift

logger = logging.getLogger(__name__)

__all__ = [
    "ZeroFlux",
    "Dirichlet",
    "SolverConfig",
    "Trajectory",
    "RadialTrajectory",
    "SolverError",
    "CFLViolation",
    "NumericalAbort",
    "DomainTooSmall",
    "equation_flag",
    "cfl_dt",
    "step",
    "solve",
    "solve_field",
    "solve_radial_direct",
]


class SolverError(RuntimeError):
    pass


class CFLViolation(SolverError):
    pass


class NumericalAbort(SolverError):
    """NaN/overflow, negativity above the clamp threshold, or max_steps exceeded."""


class DomainTooSmall(SolverError):
    pass


@dataclass(frozen=True)
class ZeroFlux:
    pass


@dataclass(frozen=True)
class Dirichlet:
    value: float

    def __post_init__(self):
        if not (self.value >= 0 and math.isfinite(self.value)):
            raise DomainError("Dirichlet value must be finite and >= 0")


BoundaryCondition = Union[ZeroFlux, Dirichlet]


def _bc_args(bc):
    if isinstance(bc, Dirichlet):
        return 1, float(bc.value)
    return 0, 0.0


@dataclass(frozen=True)
class SolverConfig:
    """Time-stepping and boundary settings.

    ``convection`` is the flag ``b``; ``None`` lets :func:`solve` pick it from
    the problem.  ``margin_tol=None`` disables the boundary-margin check.
    """

    cfl_safety: float = 0.4
    left_bc: BoundaryCondition = ZeroFlux()
    right_bc: BoundaryCondition = ZeroFlux()
    convection: int | None = None
    max_steps: int = 50_000_000
    dt_max: float = math.inf
    neg_tol: float = 1e-14
    margin_fraction: float = 0.1
    margin_tol: float | None = 1e-6

    def __post_init__(self):
        if not 0 < self.cfl_safety <= 1:
            raise DomainError("cfl_safety must lie in (0, 1]")
        if self.convection not in (None, 0, 1):
            raise DomainError("convection flag must be 0 or 1")
        if self.max_steps < 1:
            raise DomainError("max_steps must be >= 1")
        if not self.dt_max > 0:
            raise DomainError("dt_max must be > 0")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Fields at the requested output times, plus run statistics."""

    fields: tuple
    m: float
    convection: int
    frame_dimension: int | None = None
    steps: int = 0
    min_raw: float = 0.0
    initial: Field | None = None

    @property
    def times(self):
        return [f.t for f in self.fields]

    def at(self, t: float) -> Field:
        for f in self.fields:
            if math.isclose(f.t, t, rel_tol=1e-12, abs_tol=1e-14):
                return f
        raise KeyError(f"no field stored at t = {t}")

    def __len__(self):
        return len(self.fields)

    def __iter__(self):
        return iter(self.fields)


@dataclass(frozen=True, eq=False)
class RadialTrajectory:
    r: np.ndarray
    times: tuple
    values: tuple
    steps: int = 0

    def samples(self, t: float) -> np.ndarray:
        """``(n, 2)`` array of ``(r, u)`` at time ``t``."""
        i = next(k for k, tk in enumerate(self.times)
                 if math.isclose(tk, t, rel_tol=1e-12, abs_tol=1e-14))
        return np.column_stack([self.r, self.values[i]])


def equation_flag(dimension: int, m: float) -> int:
    """Convection flag for the transformed equation: 1 only for N = 1 with m > 1."""
    if m == 1:
        return 0
    return 1 if dimension == 1 else 0


def cfl_dt(field: Field | np.ndarray, m: float, h: float, b: int, safety: float,
           dt_max: float = math.inf) -> float:
    """``safety * h^2 / (m * max(w)^(m-1) * (2 + b h))``; ``dt_max`` when ``w == 0``."""
    values = field.values if isinstance(field, Field) else np.asarray(field, dtype=float)
    return float(kernels.backend.cfl_dt(np.array(values, dtype=float),
                                        h, m, float(b), safety, dt_max))


def _flag(config: SolverConfig, default: int) -> int:
    return default if config.convection is None else config.convection


def _raise_status(status, t, steps, min_raw):
    if status == kernels.NEGATIVE:
        raise NumericalAbort(
            f"negative value {min_raw:.3e} beyond clamp threshold at t={t:.6g}, step {steps}")
    if status == kernels.NONFINITE:
        raise NumericalAbort(f"non-finite value in update at t={t:.6g}, step {steps}")
    if status == kernels.MAX_STEPS:
        raise NumericalAbort(f"max_steps exceeded at t={t:.6g} after {steps} steps")


def step(field: Field, dt: float, m: float, config: SolverConfig) -> Field:
    """One explicit conservative step; rejects ``dt`` above the CFL bound."""
    b = _flag(config, 0)
    h = field.grid.h
    lk, lv = _bc_args(config.left_bc)
    rk, rv = _bc_args(config.right_bc)
    w = np.array(field.values, dtype=float)
    limit = float(kernels.backend.cfl_dt(w, h, m, float(b), 1.0, math.inf, lv, rv, lk, rk))
    if dt > limit * (1 + 1e-12):
        raise CFLViolation(f"dt={dt:.3e} exceeds the stability bound {limit:.3e}")
    status, min_raw = kernels.backend.step(w, dt, h, m, float(b), lk, lv, rk, rv,
                                           config.neg_tol)
    _raise_status(status, field.t + dt, 1, min_raw)
    return Field(field.grid, field.t + dt, w)


def _check_margins(w: np.ndarray, t: float, config: SolverConfig):
    if config.margin_tol is None:
        return
    n = w.size
    k = max(1, int(math.ceil(config.margin_fraction * n)))
    for side, bc, cells in (("left", config.left_bc, w[:k]), ("right", config.right_bc, w[-k:])):
        ref = bc.value if isinstance(bc, Dirichlet) else 0.0
        dev = float(np.max(np.abs(cells - ref)))
        if dev > config.margin_tol:
            raise DomainTooSmall(
                f"domain too small: {side} {int(config.margin_fraction * 100)}% margin "
                f"deviates from {ref:g} by {dev:.3e} (> {config.margin_tol:g}) at t={t:.6g}")


def solve_field(initial: Field, m: float, output_times, config: SolverConfig,
                convection: int = 0) -> Trajectory:
    """Evolve an explicit initial field; the workhorse behind :func:`solve`."""
    b = _flag(config, convection)
    h = initial.grid.h
    lk, lv = _bc_args(config.left_bc)
    rk, rv = _bc_args(config.right_bc)
    w = np.array(initial.values, dtype=float)
    t = initial.t
    steps = 0
    min_raw = 0.0
    _check_margins(w, t, config)
    fields = []
    for t_out in output_times:
        if t_out < t:
            raise DomainError("output times must not precede the initial time")
        status, t_reached, n, mr = kernels.backend.evolve(
            w, t, float(t_out), h, float(m), float(b), lk, lv, rk, rv,
            config.cfl_safety, config.dt_max, config.max_steps - steps, config.neg_tol)
        steps += n
        min_raw = min(min_raw, mr)
        _raise_status(status, t_reached, steps, mr)
        t = float(t_out)
        _check_margins(w, t, config)
        fields.append(Field(initial.grid, t, w.copy()))
        logger.debug("reached t=%g after %d steps", t, steps)
    return Trajectory(tuple(fields), m=m, convection=b, steps=steps, min_raw=min_raw,
                      initial=initial)


def solve(problem: ProblemSpec, config: SolverConfig) -> Trajectory:
    """Solve the transformed problem and return fields at ``problem.output_times``.

    For ``m = 1`` the heat equation is solved in the moving frame and the
    fields are mapped back to ``s = log r`` at output.
    """
    initial = build_initial_field(problem.datum, problem.grid)
    b = equation_flag(problem.dimension, problem.m)
    traj = solve_field(initial, problem.m, problem.output_times, config, convection=b)
    if problem.m == 1 and problem.dimension != 2:
        shifted = tuple(moving_frame_shift(f, problem.dimension, f.t) for f in traj.fields)
        traj = Trajectory(shifted, m=traj.m, convection=traj.convection,
                          frame_dimension=problem.dimension, steps=traj.steps,
                          min_raw=traj.min_raw, initial=initial)
    return traj


def _radial_datum(datum, r):
    if hasattr(datum, "radial"):
        return np.asarray(datum.radial(r), dtype=float)
    return np.asarray(datum.log_value(np.log(r)), dtype=float)


def solve_radial_direct(problem: ProblemSpec, config: SolverConfig, r_min: float,
                        r_max: float, n_r: int | None = None) -> RadialTrajectory:
    """Explicit scheme for ``r^{-2} u_t = (u^m)_rr + (N-1)/r (u^m)_r`` on ``[r_min, r_max]``.

    Written in flux form ``r^{N-3} u_t = (r^{N-1} (u^m)_r)_r`` on a uniform
    r-grid; the time step obeys the local restriction, which scales like
    ``h^2 / r^2``.
    """
    if not 0 < r_min < r_max:
        raise DomainError("need 0 < r_min < r_max")
    n = n_r or problem.n_cells
    N, m = problem.dimension, float(problem.m)
    h = (r_max - r_min) / n
    faces = r_min + np.arange(n + 1) * h
    r = 0.5 * (faces[:-1] + faces[1:])
    a = faces ** (N - 1)
    # exact cell weights: int r^{N-3} dr
    if N == 2:
        vol = np.log(faces[1:] / faces[:-1])
    else:
        vol = 1.0 / faces[:-1] - 1.0 / faces[1:]
    u = _radial_datum(problem.datum, r)
    if np.any(~np.isfinite(u)) or np.any(u < 0):
        raise DomainError("datum must be finite and nonnegative on the r-grid")
    lk, lv = _bc_args(config.left_bc)
    rk, rv = _bc_args(config.right_bc)
    # coefficient of the local stability bound for each cell
    stiff = (a[:-1] + a[1:]) / (h * vol)
    t = 0.0
    steps = 0
    out = []
    flux = np.empty(n + 1)
    ext = np.empty(n + 2)
    for t_out in problem.output_times:
        while t < t_out:
            if steps >= config.max_steps:
                raise NumericalAbort(f"max_steps exceeded at t={t:.6g}")
            # secant slopes of u -> u^m over each stencil are bounded by the
            # stencil max, so the step stays monotone under this local bound
            ext[1:-1] = u
            ext[0] = lv if lk else u[0]
            ext[-1] = rv if rk else u[-1]
            loc = np.maximum(np.maximum(ext[:-2], ext[1:-1]), ext[2:])
            rate = float(np.max(m * loc ** (m - 1) * stiff)) if loc.max() > 0 else 0.0
            dt = config.dt_max if rate <= 0 else min(config.cfl_safety / rate, config.dt_max)
            last = t + dt >= t_out
            if last:
                dt = t_out - t
            U = u ** m
            flux[1:n] = -a[1:n] * (U[1:] - U[:-1]) / h
            flux[0] = -a[0] * (U[0] - lv ** m) / h if lk else 0.0
            flux[n] = -a[n] * (rv ** m - U[-1]) / h if rk else 0.0
            new = u - dt * (flux[1:] - flux[:-1]) / vol
            if not np.all(np.isfinite(new)):
                raise NumericalAbort(f"non-finite value at t={t:.6g}")
            if new.min() < -config.neg_tol:
                raise NumericalAbort(f"negative value {new.min():.3e} at t={t:.6g}")
            u = np.maximum(new, 0.0)
            steps += 1
            t = t_out if last else t + dt
        out.append(u.copy())
    return RadialTrajectory(r=r, times=tuple(problem.output_times), values=tuple(out),
                            steps=steps)
