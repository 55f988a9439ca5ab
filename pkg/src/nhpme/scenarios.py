"""Scenario definitions, hypothesis checks, and report/plot writers.

A scenario is a JSON-style dict: ``scenario`` (name), ``m``, ``grid``,
``times``, ``datum``, ``solver`` and ``thresholds``.  Missing keys are
filled from :data:`DEFAULTS`.  :func:`run_scenario` returns a
:class:`ScenarioResult`; :func:`write_outputs` serializes it.
"""

from __future__ import annotations

import copy
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import (Bump, DomainError, Field, Grid1D, Plateau, ProblemSpec, ProfileSnapshot,
                   Table, build_initial_field, weighted_mass)
from .metrics import (ConvergenceReport, graph_distance, l1_error, linfty_bound_from_l1,
                      sup_error, weighted_lp_error)
from .profiles import (HeavisideSS, LinErfc, LinGauss, LogBarenblatt, Peak, TravelingWave,
                       calibrate_C0, calibrate_s0, fit_D, linear_omega,
                       solve_heaviside_profile)
from .solvers import Dirichlet, SolverConfig, Trajectory, ZeroFlux, solve, solve_field
from .transforms import to_ssvar

SCHEMA_VERSION = 1
EXIT_PASS, EXIT_THRESHOLD, EXIT_HYPOTHESIS, EXIT_ABORT, EXIT_IO = 0, 1, 2, 3, 4
OUTPUT_ENV = "NHPME_OUTPUT_DIR"

__all__ = [
    "DEFAULTS",
    "SCENARIOS",
    "HypothesisViolation",
    "ScenarioResult",
    "resolve_config",
    "load_config",
    "make_datum",
    "run_scenario",
    "stitch_nonradial",
    "emit_plot_data",
    "write_outputs",
    "output_dir",
    "figure1_config",
]


class HypothesisViolation(ValueError):
    """The datum or parameters do not satisfy the scenario's hypotheses."""


# ---------------------------------------------------------------------------
# defaults

DEFAULTS = {
    "thm1_N2_zero": {
        "m": 2.0,
        "grid": {"s_min": -32.0, "s_max": 32.0, "n_cells": 1280},
        "times": [10.0, 100.0, 1000.0],
        "datum": {"kind": "bump", "amplitude": 4.0, "radius": 1.0, "hole": 0.5},
        "thresholds": {"decay_ratio": 0.5},
    },
    "thm2_N2_plateau": {
        "m": 2.0,
        "grid": {"s_min": -320.0, "s_max": 100.0, "n_cells": 1680},
        "times": [10.0, 100.0, 1000.0],
        "datum": {"kind": "plateau", "K": 1.0, "decay": 1.0},
        "solver": {"margin_tol": 1e-3},
        "profile_tol": 1e-6,
        "window_R": 2.0,
        "thresholds": {"final_sup": 0.05, "origin_tol": 1e-3},
    },
    "thm3_N1_zero": {
        "m": 2.0,
        "grid": {"s_min": -20.0, "s_max": 90.0, "n_cells": 2200},
        "times": [10.0, 100.0, 1000.0],
        "datum": {"kind": "bump", "amplitude": 1.0, "radius": 1.0, "hole": 0.5,
                  "mass": 1.0},
        "thresholds": {"graph_ratio": 0.5},
    },
    "thm4_N1_plateau": {
        "m": 2.0,
        "grid": {"s_min": -30.0, "s_max": 140.0, "n_cells": 3400},
        "times": [1.0, 3.0, 10.0, 30.0, 100.0],
        "datum": {"kind": "plateau", "K": 1.0, "decay": 1.0},
        "solver": {"margin_tol": 1e-3},
        "holder_alpha": 1.0,
        "thresholds": {"l1_ratio": 0.2},
    },
    "linear_m1": {
        "m": 1.0,
        "dimension": 2,
        "grid": {"s_min": -300.0, "s_max": 300.0, "n_cells": 1200},
        "times": [10.0, 100.0, 1000.0],
        "datum": {"kind": "bump", "amplitude": 4.0, "radius": 1.0, "hole": 0.5},
        "thresholds": {"bound_factor": 2.0},
    },
    "nonradial_N1": {
        "m": 2.0,
        "grid": {"s_min": -30.0, "s_max": 40.0, "n_cells": 2800},
        "times": [0.5, 1.0, 2.0, 5.0],
        "datum": {"kind": "two_sided",
                  "right": {"kind": "plateau", "K": 1.0, "decay": 1.0, "scale": 3.0},
                  "left": {"kind": "plateau", "K": 1.0, "decay": 1.0, "scale": 1.0}},
        "solver": {"margin_tol": 1e-3},
        "thresholds": {},
    },
    "barenblatt_selftest": {
        "m": 2.0,
        "grid": {"s_min": -12.0, "s_max": 12.0, "n_cells": 4096},
        "times": [2.0, 3.0, 4.0, 5.0],
        "datum": {"kind": "barenblatt", "mass": 1.0, "t0": 1.0},
        "thresholds": {"rel_sup": 0.02, "mass_drift": 1e-10},
    },
    "tw_selftest": {
        "m": 3.0,
        "grid": {"s_min": -30.0, "s_max": 10.0, "n_cells": 4000},
        "times": [1.0, 2.0, 3.0, 4.0, 5.0],
        "times_in_units_of_1_over_c": True,
        "datum": {"kind": "traveling_wave", "K": 1.0, "x0": 1.0},
        "thresholds": {"rel_sup": 0.03, "front_cells": 2.0},
    },
}

_DIMENSION = {
    "thm1_N2_zero": 2, "thm2_N2_plateau": 2, "thm3_N1_zero": 1, "thm4_N1_plateau": 1,
    "nonradial_N1": 1, "barenblatt_selftest": 2, "tw_selftest": 1,
}

_DESCRIPTIONS = {
    "thm1_N2_zero": "N=2, u0(0)=0: convergence to the log Barenblatt profile",
    "thm2_N2_plateau": "N=2, u0(0)=K: convergence to the Heaviside-trace profile W_K",
    "thm3_N1_zero": "N=1, u0(0)=0: L^p and graph convergence to the peak profile",
    "thm4_N1_plateau": "N=1, u0(0)=K: convergence to the traveling wave U_x0",
    "linear_m1": "m=1: Gaussian (u0(0)=0) or erfc (u0(0)=K) profiles",
    "nonradial_N1": "N=1 non-radial datum: stitched half-line asymptotics",
    "barenblatt_selftest": "exact Barenblatt tracking and mass conservation",
    "tw_selftest": "exact traveling-wave tracking and front position",
}


def _merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k != "datum":
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def resolve_config(cfg: dict) -> dict:
    """Fill a partial config from the scenario defaults."""
    name = cfg.get("scenario")
    if name not in DEFAULTS:
        raise HypothesisViolation(f"unknown scenario {name!r}; see list-scenarios")
    out = _merge(DEFAULTS[name], cfg)
    out.setdefault("solver", {})
    out.setdefault("thresholds", {})
    out.setdefault("burn_in", 0.0)
    out.setdefault("dimension", _DIMENSION.get(name, 1))
    if name in _DIMENSION and out["dimension"] != _DIMENSION[name]:
        raise HypothesisViolation(f"{name} requires N={_DIMENSION[name]}")
    return out


def load_config(path) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise HypothesisViolation("config must be a JSON object")
    return resolve_config(cfg)


# ---------------------------------------------------------------------------
# data


def make_datum(spec: dict, m: float):
    """Build an initial datum from its config dict."""
    kind = spec.get("kind")
    if kind == "bump":
        return Bump(float(spec["amplitude"]), float(spec["radius"]), float(spec.get("hole", 0.0)))
    if kind == "zero":
        return Bump(0.0, 1.0)
    if kind == "plateau":
        return Plateau(float(spec["K"]), float(spec["decay"]), float(spec.get("scale", 1.0)))
    if kind == "table":
        return Table(spec["r"], spec["values"])
    if kind == "barenblatt":
        C0 = calibrate_C0(float(spec["mass"]), m)
        return ProfileSnapshot(LogBarenblatt(C0, m), float(spec.get("t0", 1.0)))
    if kind == "traveling_wave":
        tw = TravelingWave(float(spec["K"]), m, math.log(float(spec.get("x0", 1.0))))
        return ProfileSnapshot(tw, 0.0)
    raise HypothesisViolation(f"unknown datum kind {kind!r}")


def _normalized(datum, spec, grid):
    """Rescale a Bump so its grid mass equals ``spec['mass']`` when requested."""
    target = spec.get("mass")
    if target is None or spec.get("kind") != "bump":
        return datum
    mass = weighted_mass(build_initial_field(datum, grid))
    if mass <= 0:
        raise HypothesisViolation("cannot normalize a datum with zero mass")
    return Bump(datum.amplitude * float(target) / mass, datum.radius, datum.hole)


def _holder_exponent(datum, cfg):
    if "holder_alpha" in cfg:
        return float(cfg["holder_alpha"])
    return float(getattr(datum, "holder_exponent", 1.0))


# ---------------------------------------------------------------------------
# results


@dataclass
class ScenarioResult:
    name: str
    config: dict
    reports: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    plots: list = field(default_factory=list)  # (label, fields, profile)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def exit_code(self) -> int:
        return EXIT_PASS if self.passed else EXIT_THRESHOLD

    def report(self, metric):
        return next(r for r in self.reports if r.metric == metric)


def _solver_config(cfg, left=None, right=None):
    opts = dict(cfg.get("solver", {}))
    kw = {}
    for key in ("cfl_safety", "max_steps", "neg_tol", "margin_fraction"):
        if key in opts:
            kw[key] = opts[key]
    if "dt_max" in opts and opts["dt_max"] is not None:
        kw["dt_max"] = float(opts["dt_max"])
    if "margin_tol" in opts:
        kw["margin_tol"] = opts["margin_tol"]
    return SolverConfig(left_bc=left or ZeroFlux(), right_bc=right or ZeroFlux(), **kw)


def _problem(cfg, datum, dimension=None):
    g = cfg["grid"]
    times = tuple(float(t) for t in cfg["times"])
    if not times:
        raise HypothesisViolation("times must not be empty")
    return ProblemSpec(dimension or cfg["dimension"], float(cfg["m"]), datum,
                       float(g["s_min"]), float(g["s_max"]), int(g["n_cells"]),
                       times[-1], times)


def _nonincreasing(values):
    return all(b <= a for a, b in zip(values, values[1:]))


def _finish(result: ScenarioResult, burn_in: float):
    for rep in result.reports:
        rep.fit_rate(burn_in)


def _require(cond, message):
    if not cond:
        raise HypothesisViolation(message)


def _check_plateau(datum, grid, m, cfg):
    K = float(datum.origin_value)
    _require(K > 0, "datum must satisfy u0(0) = K > 0")
    w0 = build_initial_field(datum, grid)
    _require(np.all(w0.values <= K * (1 + 1e-12)), "datum must satisfy 0 <= u0 <= K")
    alpha = _holder_exponent(datum, cfg)
    _require(0 < alpha <= 1, "datum must be Hölder continuous with exponent in (0, 1]")
    return K, w0


def _check_zero_origin(datum, grid):
    _require(float(datum.origin_value) == 0.0, "datum must satisfy u0(0) = 0")
    w0 = build_initial_field(datum, grid)
    _require(w0.values[0] == 0.0 or w0.values[0] <= 1e-12 * max(w0.values.max(), 1.0),
             "datum must vanish towards the origin (finite weighted mass)")
    return w0


# ---------------------------------------------------------------------------
# scenario runners


def _run_thm1(cfg):
    m = float(cfg["m"])
    _require(m > 1, "thm1 needs m > 1")
    datum = make_datum(cfg["datum"], m)
    prob = _problem(cfg, datum)
    datum = _normalized(datum, cfg["datum"], prob.grid)
    prob = _problem(cfg, datum)
    w0 = _check_zero_origin(datum, prob.grid)
    mass = weighted_mass(w0)
    traj = solve(prob, _solver_config(cfg))
    res = ScenarioResult("thm1_N2_zero", cfg)
    alpha = 1.0 / (m + 1.0)
    rep = ConvergenceReport("scaled_sup")
    prof = None
    if mass > 0:
        C0 = calibrate_C0(mass, m)
        prof = LogBarenblatt(C0, m)
        res.constants.update(C0=C0, M0=mass)
    else:
        res.constants.update(C0=0.0, M0=0.0)
    for f in traj:
        ref = prof.log_value(f.s, f.t) if prof else np.zeros_like(f.values)
        e = sup_error(f.values, ref)
        rep.add(f.t, e, f.t ** alpha * e)
    res.reports.append(rep)
    s = rep.scaled
    res.checks["scaled_sup_nonincreasing"] = _nonincreasing(s)
    res.checks["scaled_sup_decay_ratio"] = s[-1] <= cfg["thresholds"]["decay_ratio"] * s[0]
    res.diagnostics["steps"] = traj.steps
    res.plots.append(("solution", traj.fields, prof))
    return res


def _run_thm2(cfg):
    m = float(cfg["m"])
    _require(m > 1, "thm2 needs m > 1")
    datum = make_datum(cfg["datum"], m)
    prob = _problem(cfg, datum)
    K, w0 = _check_plateau(datum, prob.grid, m, cfg)
    _require(w0.values[-1] <= 1e-2 * K, "datum must vanish at infinity")
    table = solve_heaviside_profile(m, float(cfg.get("profile_tol", 1e-6)))
    prof = HeavisideSS(K, m, table)
    conf = _solver_config(cfg, Dirichlet(K), Dirichlet(0.0))
    traj = solve(prob, conf)
    res = ScenarioResult("thm2_N2_plateau", cfg)
    res.constants.update(K=K, xi_star=table.xi_star)
    R = float(cfg.get("window_R", 2.0))
    rep = ConvergenceReport("window_sup")
    n = prob.n_cells
    k = max(1, int(math.ceil(conf.margin_fraction * n)))
    origin_dev = []
    for f in traj:
        sel = np.abs(f.s) <= R * math.sqrt(f.t)
        e = float(np.max(np.abs(f.values - prof.log_value(f.s, f.t))[sel]))
        rep.add(f.t, e, e)
        origin_dev.append(float(np.max(np.abs(f.values[:k] - K))))
    res.reports.append(rep)
    thr = cfg["thresholds"]
    res.checks["window_sup_nonincreasing"] = _nonincreasing(rep.scaled)
    res.checks["window_sup_final"] = rep.scaled[-1] <= thr["final_sup"]
    res.checks["origin_value_preserved"] = max(origin_dev) <= thr["origin_tol"] * K
    res.diagnostics.update(steps=traj.steps, origin_deviation=origin_dev)
    res.plots.append(("solution", traj.fields, prof))
    return res


def _run_thm3(cfg):
    m = float(cfg["m"])
    _require(m > 1, "thm3 needs m > 1")
    datum = make_datum(cfg["datum"], m)
    prob = _problem(cfg, datum)
    datum = _normalized(datum, cfg["datum"], prob.grid)
    prob = _problem(cfg, datum)
    w0 = _check_zero_origin(datum, prob.grid)
    M0 = weighted_mass(w0)
    traj = solve(prob, _solver_config(cfg))
    res = ScenarioResult("thm3_N1_zero", cfg)
    reps = {p: ConvergenceReport(f"lp{p}_scaled") for p in (1, 2)}
    graph = ConvergenceReport("graph_ssvar")
    prof = Peak(M0, m) if M0 > 0 else None
    res.constants.update(M0=M0, k=prof.k if prof else 0.0)
    for f in traj:
        ref = prof.log_value(f.s, f.t) if prof else np.zeros_like(f.values)
        for p, rep in reps.items():
            e = weighted_lp_error(f.values, ref, p, h=f.grid.h)
            rep.add(f.t, e, f.t ** ((p - 1.0) / (m * p)) * e)
        y, ub = to_ssvar(f, m)
        d = graph_distance(ub, y, prof) if prof else float(np.max(np.abs(ub)))
        graph.add(f.t, d, d)
    res.reports.extend([reps[1], reps[2], graph])
    for p, rep in reps.items():
        res.checks[f"lp{p}_scaled_nonincreasing"] = _nonincreasing(rep.scaled)
    g = graph.scaled
    res.checks["graph_ratio"] = g[-1] <= cfg["thresholds"]["graph_ratio"] * g[0]
    if prof:
        last = traj.fields[-1]
        nz = np.flatnonzero(last.values > 0)
        res.diagnostics["front_y"] = [
            float(f.s[np.flatnonzero(f.values > 0)[-1]] / f.t ** (1.0 / m)) for f in traj]
        try:
            D, resid = fit_D(last, m)
            res.constants.update(D=D, D_residual=resid)
        except DomainError:
            res.constants.update(D=None, D_residual=None)
        res.diagnostics["support_s"] = [float(last.s[nz[0]]), float(last.s[nz[-1]])]
    res.diagnostics["steps"] = traj.steps
    res.plots.append(("solution", traj.fields, prof))
    return res


def _thm4_half(cfg, datum, label, res):
    """Run one radial N=1 problem with u0(0)=K>0 and compare with U_x0."""
    m = float(cfg["m"])
    prob = _problem(cfg, datum, dimension=1)
    K, w0 = _check_plateau(datum, prob.grid, m, cfg)
    alpha = _holder_exponent(datum, cfg)
    try:
        s0 = calibrate_s0(w0, K, m)
    except DomainError as exc:
        raise HypothesisViolation(str(exc)) from exc
    tw = TravelingWave(K, m, s0)
    traj = solve(prob, _solver_config(cfg, Dirichlet(K), Dirichlet(0.0)))
    l1 = ConvergenceReport(f"l1{label}")
    sup = ConvergenceReport(f"sup{label}")
    bound = ConvergenceReport(f"sup_bound{label}")
    holder = []
    for f in traj:
        ref = tw.log_value(f.s, f.t)
        phi = f.values - ref
        e1 = l1_error(f.values, ref, h=f.grid.h)
        es = float(np.max(np.abs(phi)))
        # Hölder constant of phi measured on the grid
        H = float(np.max(np.abs(np.diff(phi))) / f.grid.h ** alpha)
        b = linfty_bound_from_l1(e1, H, alpha) if e1 > 0 and H > 0 else 0.0
        l1.add(f.t, e1, e1)
        sup.add(f.t, es, es)
        bound.add(f.t, b, b)
        holder.append(H)
    res.constants.update({f"K{label}": K, f"s0{label}": s0, f"x0{label}": math.exp(s0),
                          f"c{label}": tw.c})
    res.diagnostics[f"holder_H{label}"] = holder
    res.diagnostics[f"steps{label}"] = traj.steps
    return traj, tw, l1, sup, bound


def _run_thm4(cfg):
    m = float(cfg["m"])
    _require(m > 1, "thm4 needs m > 1")
    datum = make_datum(cfg["datum"], m)
    res = ScenarioResult("thm4_N1_plateau", cfg)
    traj, tw, l1, sup, bound = _thm4_half(cfg, datum, "", res)
    res.reports.extend([l1, sup, bound])
    res.checks["l1_ratio"] = l1.scaled[-1] <= cfg["thresholds"]["l1_ratio"] * l1.scaled[0]
    res.checks["sup_within_l1_bound"] = all(
        a <= b for a, b in zip(sup.scaled, bound.scaled))
    res.plots.append(("solution", traj.fields, tw))
    return res


def _run_linear(cfg):
    m = float(cfg["m"])
    _require(m == 1, "linear_m1 needs m = 1")
    N = int(cfg["dimension"])
    _require(N in (1, 2), "dimension must be 1 or 2")
    datum = make_datum(cfg["datum"], m)
    prob = _problem(cfg, datum)
    K = float(datum.origin_value)
    res = ScenarioResult("linear_m1", cfg)
    if K > 0:
        _check_plateau(datum, prob.grid, m, cfg)
        prof = LinErfc(K, N)
        traj = solve(prob, _solver_config(cfg, Dirichlet(K), Dirichlet(0.0)))
        kind = "erfc"
        res.constants.update(K=K)
    else:
        w0 = _check_zero_origin(datum, prob.grid)
        omega = linear_omega(N)
        # M / omega is the conserved mass int w ds
        M = weighted_mass(w0) * omega
        prof = LinGauss(M, omega, N)
        traj = solve(prob, _solver_config(cfg))
        kind = "gauss"
        res.constants.update(M=M, omega=omega)
    res.constants["profile"] = kind
    rep = ConvergenceReport(f"{kind}_scaled_sup")
    for f in traj:
        e = sup_error(f.values, prof.log_value(f.s, f.t))
        rep.add(f.t, e, math.sqrt(f.t) * e)
    res.reports.append(rep)
    s = rep.scaled
    if kind == "gauss":
        res.checks["scaled_sup_nonincreasing"] = _nonincreasing(s)
    else:
        res.checks["scaled_sup_bounded"] = max(s) <= cfg["thresholds"]["bound_factor"] * s[0]
    res.diagnostics["steps"] = traj.steps
    res.plots.append(("solution", traj.fields, prof))
    return res


def _run_barenblatt(cfg):
    m = float(cfg["m"])
    _require(m > 1, "barenblatt_selftest needs m > 1")
    spec = cfg["datum"]
    C0 = calibrate_C0(float(spec["mass"]), m)
    prof = LogBarenblatt(C0, m)
    t0 = float(spec.get("t0", 1.0))
    g = cfg["grid"]
    grid = Grid1D(float(g["s_min"]), float(g["s_max"]), int(g["n_cells"]))
    times = [float(t) for t in cfg["times"]]
    _require(times and times[0] > t0, "output times must follow the start time")
    initial = Field(grid, t0, prof.log_value(grid.centers, t0))
    traj = solve_field(initial, m, times, _solver_config(cfg), convection=0)
    res = ScenarioResult("barenblatt_selftest", cfg)
    res.constants.update(C0=C0)
    rep = ConvergenceReport("rel_sup")
    for f in traj:
        ref = prof.log_value(f.s, f.t)
        e = sup_error(f.values, ref)
        rep.add(f.t, e, e / float(ref.max()))
    res.reports.append(rep)
    m0 = weighted_mass(initial)
    drift = max(abs(weighted_mass(f) - m0) / m0 for f in traj)
    thr = cfg["thresholds"]
    res.checks["rel_sup_final"] = rep.scaled[-1] <= thr["rel_sup"]
    res.checks["mass_drift"] = drift <= thr["mass_drift"]
    res.diagnostics.update(steps=traj.steps, mass_drift=drift)
    res.plots.append(("solution", traj.fields, prof))
    return res


def _run_tw(cfg):
    m = float(cfg["m"])
    _require(m > 1, "tw_selftest needs m > 1")
    spec = cfg["datum"]
    K = float(spec["K"])
    tw = TravelingWave(K, m, math.log(float(spec.get("x0", 1.0))))
    g = cfg["grid"]
    grid = Grid1D(float(g["s_min"]), float(g["s_max"]), int(g["n_cells"]))
    times = [float(t) for t in cfg["times"]]
    if cfg.get("times_in_units_of_1_over_c", False):
        times = [t / tw.c for t in times]
    initial = Field(grid, 0.0, tw.log_value(grid.centers, 0.0))
    conf = _solver_config(cfg, Dirichlet(K), Dirichlet(0.0))
    traj = solve_field(initial, m, times, conf, convection=1)
    res = ScenarioResult("tw_selftest", cfg)
    res.constants.update(K=K, c=tw.c, s0=tw.s0, x0=tw.x0)
    rep = ConvergenceReport("rel_sup")
    front = ConvergenceReport("front_cells")
    for f in traj:
        e = sup_error(f.values, tw.log_value(f.s, f.t))
        rep.add(f.t, e, e / K)
        idx = np.flatnonzero(f.values > 1e-6)
        off = abs(f.s[idx[-1]] - tw.front(f.t)) / f.grid.h if idx.size else math.inf
        front.add(f.t, off, off)
    res.reports.extend([rep, front])
    thr = cfg["thresholds"]
    res.checks["rel_sup_final"] = rep.scaled[-1] <= thr["rel_sup"]
    res.checks["front_position"] = front.scaled[-1] <= thr["front_cells"]
    res.diagnostics.update(steps=traj.steps, front_radial=tw.front_radial(times[-1]))
    res.plots.append(("solution", traj.fields, tw))
    return res


def _split_two_sided(spec, m):
    if spec.get("kind") != "two_sided":
        raise HypothesisViolation("nonradial_N1 needs a 'two_sided' datum")
    right = make_datum(spec["right"], m)
    left = make_datum(spec["left"], m)
    kr, kl = float(right.origin_value), float(left.origin_value)
    if abs(kr - kl) > 1e-12 * max(1.0, abs(kr), abs(kl)):
        raise HypothesisViolation(
            f"datum is discontinuous at the origin (u0(0+)={kr:g}, u0(0-)={kl:g})")
    return right, left


def stitch_nonradial(right, left, cfg) -> ScenarioResult:
    """Run the symmetrizations ``u0^+`` and ``u0^-`` and stitch them at the origin.

    ``right`` is the datum on ``x >= 0`` and ``left`` the reflected datum on
    ``x <= 0``, both as radial data.  ``u0(0) = K > 0`` compares with
    traveling waves calibrated on each side; ``K = 0`` with peak profiles.
    """
    cfg = resolve_config(dict(cfg, scenario="nonradial_N1"))
    m = float(cfg["m"])
    _require(m > 1, "nonradial_N1 needs m > 1")
    res = ScenarioResult("nonradial_N1", cfg)
    K = float(right.origin_value)
    halves = {}
    if K > 0:
        for label, datum in (("_plus", right), ("_minus", left)):
            traj, tw, l1, sup, bound = _thm4_half(cfg, datum, label, res)
            halves[label] = (traj, tw)
            res.reports.append(sup)
        res.constants["profile"] = "traveling_wave"
    else:
        for label, datum in (("_plus", right), ("_minus", left)):
            sub = _run_thm3(dict(cfg, datum=_datum_spec(datum), thresholds={"graph_ratio": 1.0},
                                 scenario="thm3_N1_zero"))
            traj = Trajectory(tuple(sub.plots[0][1]), m=m, convection=1)
            prof = sub.plots[0][2]
            halves[label] = (traj, prof)
            res.constants.update({f"M0{label}": sub.constants["M0"], f"k{label}": sub.constants["k"]})
        res.constants["profile"] = "peak"
    stitched = ConvergenceReport("stitched_sup")
    tp, pp = halves["_plus"]
    tm, pm = halves["_minus"]
    for fp, fm in zip(tp, tm):
        e = 0.0
        for f, p in ((fp, pp), (fm, pm)):
            ref = p.log_value(f.s, f.t) if p is not None else np.zeros_like(f.values)
            e = max(e, sup_error(f.values, ref))
        stitched.add(fp.t, e, e)
    res.reports.append(stitched)
    res.checks["stitched_sup_decreasing"] = all(
        b < a for a, b in zip(stitched.scaled, stitched.scaled[1:])) or max(stitched.scaled) == 0
    res.plots.append(("plus", tp.fields, pp))
    res.plots.append(("minus", tm.fields, pm))
    res.diagnostics["halves"] = halves
    return res


def _datum_spec(datum):
    if isinstance(datum, Bump):
        return {"kind": "bump", "amplitude": datum.amplitude, "radius": datum.radius,
                "hole": datum.hole}
    if isinstance(datum, Plateau):
        return {"kind": "plateau", "K": datum.K, "decay": datum.decay, "scale": datum.scale}
    if isinstance(datum, Table):
        return {"kind": "table", "r": list(datum.r), "values": list(datum.values)}
    raise HypothesisViolation(f"cannot serialize datum {datum!r}")


def _run_nonradial(cfg):
    right, left = _split_two_sided(cfg["datum"], float(cfg["m"]))
    return stitch_nonradial(right, left, cfg)


SCENARIOS = {
    "thm1_N2_zero": _run_thm1,
    "thm2_N2_plateau": _run_thm2,
    "thm3_N1_zero": _run_thm3,
    "thm4_N1_plateau": _run_thm4,
    "linear_m1": _run_linear,
    "nonradial_N1": _run_nonradial,
    "barenblatt_selftest": _run_barenblatt,
    "tw_selftest": _run_tw,
}


def describe_scenarios():
    return [(name, _DESCRIPTIONS[name]) for name in SCENARIOS]


def run_scenario(cfg: dict) -> ScenarioResult:
    """Resolve, check hypotheses, solve, measure.  Raises on hypothesis/numerical failures."""
    cfg = resolve_config(cfg)
    try:
        res = SCENARIOS[cfg["scenario"]](cfg)
    except DomainError as exc:
        raise HypothesisViolation(str(exc)) from exc
    _finish(res, float(cfg.get("burn_in", 0.0)))
    return res


def figure1_config(overrides: dict | None = None) -> dict:
    """The ``0.1 (0.5 - x^2)_+`` datum with ``m = 3`` in dimension 1."""
    base = {
        "scenario": "thm4_N1_plateau",
        "output_name": "figure1",
        "m": 3.0,
        "grid": {"s_min": -40.0, "s_max": 20.0, "n_cells": 3000},
        "times": [100.0, 400.0, 1000.0, 2000.0, 4000.0],
        "datum": {"kind": "bump", "amplitude": 0.1, "radius": 0.5},
        "solver": {"margin_tol": 5e-5},
        "holder_alpha": 1.0,
        "thresholds": {"l1_ratio": 0.2},
    }
    return resolve_config(_merge(base, overrides or {}))


# ---------------------------------------------------------------------------
# output


def output_dir(cfg: dict, override: str | None = None) -> Path:
    """CLI flag, then ``NHPME_OUTPUT_DIR``, then the config's ``output_dir``."""
    root = override or os.environ.get(OUTPUT_ENV) or cfg.get("output_dir") or "nhpme_output"
    return Path(root) / cfg.get("output_name", cfg["scenario"])


def _num(x):
    return format(float(x), ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if obj is None or isinstance(obj, str):
        return obj
    return repr(obj)


def report_csv(result: ScenarioResult) -> str:
    lines = ["t,raw_error,scaled_error,metric"]
    for rep in result.reports:
        for t, e, s in rep.rows:
            lines.append(f"{_num(t)},{_num(e)},{_num(s)},{rep.metric}")
    return "\n".join(lines) + "\n"


def summary_json(result: ScenarioResult) -> str:
    rates = {}
    for rep in result.reports:
        r = rep.rate
        rates[rep.metric] = None if r is None else {
            "slope": r.slope, "residual": r.residual, "n_points": r.n_points}
    diag = {k: v for k, v in result.diagnostics.items() if k != "halves"}
    doc = {
        "schema_version": SCHEMA_VERSION,
        "scenario": result.name,
        "config": result.config,
        "constants": result.constants,
        "rates": rates,
        "checks": result.checks,
        "passed": result.passed,
        "exit_code": result.exit_code,
        "diagnostics": diag,
    }
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def _write(path: Path, text: str):
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


_PLOT_SCRIPT = '''"""Plot solution/profile series written next to this script."""
import glob
import os

import matplotlib.pyplot as plt
import numpy as np

here = os.path.dirname(os.path.abspath(__file__))
fig, ax = plt.subplots()
for path in sorted(glob.glob(os.path.join(here, "{prefix}solution_t*.dat"))):
    t = open(path).readline().split("=")[1].strip()
    r, u = np.loadtxt(path, unpack=True)
    line, = ax.plot(np.r_[-r[::-1], r], np.r_[u[::-1], u], label=f"t = {{t}}")
    prof = path.replace("solution_", "profile_")
    if os.path.exists(prof):
        r, U = np.loadtxt(prof, unpack=True)
        ax.plot(np.r_[-r[::-1], r], np.r_[U[::-1], U], "--", color=line.get_color())
ax.set_xscale("symlog", linthresh=1e-2)
ax.set_xlabel("x")
ax.set_ylabel("u")
ax.legend()
fig.savefig(os.path.join(here, "{prefix}plot.png"), dpi=150)
'''


def emit_plot_data(fields, profile, path, prefix: str = "") -> list:
    """Write ``(r, u)`` series per output time for the solution and the profile.

    Files are ``{prefix}solution_tNNN.dat`` and ``{prefix}profile_tNNN.dat``
    (values at 17 significant digits) plus ``{prefix}plot.py``.
    """
    fields = list(fields)
    if not fields:
        raise DomainError("no output times to plot")
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for i, f in enumerate(fields):
        r = np.exp(f.s)
        head = f"# t = {_num(f.t)}\n"
        sol = head + "".join(f"{_num(a)} {_num(b)}\n" for a, b in zip(r, f.values))
        p = out / f"{prefix}solution_t{i:03d}.dat"
        _write(p, sol)
        written.append(p)
        if profile is not None:
            vals = np.asarray(profile.log_value(f.s, f.t), dtype=float)
            text = head + "".join(f"{_num(a)} {_num(b)}\n" for a, b in zip(r, vals))
            p = out / f"{prefix}profile_t{i:03d}.dat"
            _write(p, text)
            written.append(p)
    p = out / f"{prefix}plot.py"
    _write(p, _PLOT_SCRIPT.format(prefix=prefix))
    written.append(p)
    return written


def write_outputs(result: ScenarioResult, directory, plots: bool = True) -> list:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    p = out / "report.csv"
    _write(p, report_csv(result))
    written.append(p)
    p = out / "summary.json"
    _write(p, summary_json(result))
    written.append(p)
    if plots:
        for label, fields, prof in result.plots:
            prefix = "" if label == "solution" else f"{label}_"
            written.extend(emit_plot_data(fields, prof, out / "plot", prefix))
    return written
