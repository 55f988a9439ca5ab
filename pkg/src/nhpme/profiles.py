"""Asymptotic profiles: evaluators, calibrators and the Heaviside-trace table.

Every profile object exposes ``log_value(s, t)`` (with ``s = log|x|``) and
``radial_value(x, t)``.  Calibrations pin the free constants from the data:
``C0`` from the weighted mass, ``k`` from ``M0``, the translation ``s0`` from
a mass-matching identity, and ``D`` by least squares.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize, special
from scipy.interpolate import PchipInterpolator

from .core import DomainError, Field

__all__ = [
    "CalibrationError",
    "LogBarenblatt",
    "HeavisideSS",
    "FTable",
    "Peak",
    "TravelingWave",
    "InnerLog",
    "LinGauss",
    "LinErfc",
    "HolderEnvelope",
    "barenblatt_alpha",
    "barenblatt_k",
    "eval_log_barenblatt",
    "barenblatt_mass",
    "calibrate_C0",
    "solve_heaviside_profile",
    "eval_WK",
    "k_of_M0",
    "k_of_M0_quadrature",
    "peak_mass_quadrature",
    "eval_peak_profile",
    "eval_peak_ssvar",
    "eval_traveling_wave",
    "eval_U_x0",
    "calibrate_s0",
    "eval_inner_profile",
    "fit_D",
    "eval_linear_profiles",
    "linear_omega",
    "holder_envelopes",
]


class CalibrationError(RuntimeError):
    """A root-find failed to bracket or converge; carries the bracket history."""

    def __init__(self, message, history=()):
        super().__init__(message)
        self.history = list(history)


def _log_abs(x):
    x = np.abs(np.asarray(x, dtype=float))
    with np.errstate(divide="ignore"):
        return np.log(x)


def _pos_pow(base, p):
    return np.power(np.maximum(base, 0.0), p)


# ---------------------------------------------------------------------------
# Barenblatt in log variables


def barenblatt_alpha(m: float) -> float:
    return 1.0 / (m + 1.0)


def barenblatt_k(m: float) -> float:
    """Shape constant ``(m-1) / (2 m (m+1))`` of the Barenblatt solution of ``w_t = (w^m)_ss``."""
    return (m - 1.0) / (2.0 * m * (m + 1.0))


@dataclass(frozen=True)
class LogBarenblatt:
    C0: float
    m: float

    @property
    def alpha(self):
        return barenblatt_alpha(self.m)

    @property
    def k(self):
        return barenblatt_k(self.m)

    def log_value(self, s, t):
        s = np.asarray(s, dtype=float)
        ta = t ** self.alpha
        with np.errstate(invalid="ignore"):
            bracket = self.C0 - self.k * (s / ta) ** 2
        out = _pos_pow(bracket, 1.0 / (self.m - 1.0)) / ta
        return np.where(np.isfinite(s), out, 0.0)

    def radial_value(self, x, t):
        return self.log_value(_log_abs(x), t)

    def support_edge(self, t):
        return t ** self.alpha * math.sqrt(self.C0 / self.k)


def eval_log_barenblatt(C0: float, m: float, x_or_s, t: float, variable: str = "log"):
    """``t^-a [C0 - k (s / t^a)^2]_+^{1/(m-1)}`` with ``s = log|x|`` in radial mode.

    ``x = 0`` corresponds to ``s = -inf`` and evaluates to 0.
    """
    if not t > 0:
        raise DomainError("t must be > 0")
    if not C0 > 0:
        raise DomainError("C0 must be > 0")
    prof = LogBarenblatt(C0, m)
    if variable == "log":
        return prof.log_value(x_or_s, t)
    if variable == "radial":
        return prof.radial_value(x_or_s, t)
    raise ValueError("variable must be 'log' or 'radial'")


def barenblatt_mass(C0: float, m: float) -> float:
    """Adaptive quadrature of ``int B0(s, 1) ds`` over its compact support."""
    edge = math.sqrt(C0 / barenblatt_k(m))
    prof = LogBarenblatt(C0, m)
    val, _ = integrate.quad(lambda s: float(prof.log_value(s, 1.0)), -edge, edge,
                            epsabs=1e-15, epsrel=1e-13, limit=200)
    return val


def calibrate_C0(target_mass: float, m: float) -> float:
    """Find ``C0`` with ``int B0(s, 1) ds = target_mass`` (bracketing root-find)."""
    if not target_mass > 0:
        raise DomainError("target mass must be > 0")
    if not m > 1:
        raise DomainError("the log Barenblatt needs m > 1")

    def g(C0):
        return barenblatt_mass(C0, m) - target_mass

    lo, hi = 1e-3, 1.0
    history = []
    while g(lo) > 0:
        history.append(("lo", lo))
        lo /= 10.0
        if lo < 1e-300:
            raise CalibrationError("could not bracket C0 from below", history)
    while g(hi) < 0:
        history.append(("hi", hi))
        hi *= 10.0
        if hi > 1e300:
            raise CalibrationError("could not bracket C0 from above", history)
    return optimize.brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                           maxiter=500)


# ---------------------------------------------------------------------------
# Self-similar profile with Heaviside initial trace


@dataclass(frozen=True, eq=False)
class FTable:
    """Tabulated ``f`` on ``[xi[0], xi_star]``; 1 to the left, 0 beyond the front."""

    xi: np.ndarray
    f: np.ndarray
    m: float
    xi_star: float
    _interp: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        f = np.asarray(self.f, dtype=float)
        if xi.shape != f.shape or xi.size < 3:
            raise DomainError("FTable needs matching arrays of >= 3 points")
        if np.any(np.diff(xi) <= 0):
            raise DomainError("FTable abscissae must be increasing")
        for arr in (xi, f):
            arr.setflags(write=False)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "_interp", PchipInterpolator(xi, f, extrapolate=False))

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = self._interp(np.clip(xi, self.xi[0], self.xi[-1]))
        out = np.where(xi <= self.xi[0], self.f[0], out)
        out = np.where(xi >= self.xi_star, 0.0, out)
        return np.clip(out, 0.0, self.f[0])

    @property
    def spacing(self) -> float:
        return float(self.xi[1] - self.xi[0])

    def ode_residual(self, form: str = "density") -> np.ndarray:
        """Finite-difference residual at interior nodes.

        ``density``: ``(f^m)'' + xi f'/2``.  ``pressure``: the same equation for
        ``P = m/(m-1) f^{m-1}``, ``(m-1) P P'' + P'^2 + xi P'/2``, which stays
        smooth up to the front for every ``m``.
        """
        d = self.spacing
        xi = self.xi[1:-1]
        if form == "density":
            g = self.f ** self.m
            g2 = (g[2:] - 2 * g[1:-1] + g[:-2]) / d ** 2
            f1 = (self.f[2:] - self.f[:-2]) / (2 * d)
            return g2 + 0.5 * xi * f1
        if form == "pressure":
            m = self.m
            P = m / (m - 1) * self.f ** (m - 1)
            P1 = (P[2:] - P[:-2]) / (2 * d)
            P2 = (P[2:] - 2 * P[1:-1] + P[:-2]) / d ** 2
            return (m - 1) * P[1:-1] * P2 + P1 ** 2 + 0.5 * xi * P1
        raise ValueError("form must be 'density' or 'pressure'")

    def to_text(self) -> str:
        lines = [f"# m = {self.m!r}", f"# xi_star = {self.xi_star!r}", "# xi f"]
        lines += [f"{a:.17g} {b:.17g}" for a, b in zip(self.xi, self.f)]
        return "\n".join(lines) + "\n"

    def save(self, path):
        with open(path, "w", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "FTable":
        meta = {}
        rows = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line.startswith("#"):
                    if "=" in line:
                        key, val = line[1:].split("=")
                        meta[key.strip()] = float(val)
                elif line:
                    rows.append([float(v) for v in line.split()])
        arr = np.array(rows)
        return cls(arr[:, 0], arr[:, 1], meta["m"], meta["xi_star"])


def _pressure_shot(xi_star, m, x_left):
    """Integrate the pressure ODE leftward from the front at ``xi_star``."""
    a1 = xi_star / 2.0
    a2 = -1.0 / (4.0 * m)
    eps = 1e-7 * max(xi_star, 1e-3)
    P0 = a1 * eps + a2 * eps ** 2
    dP0 = -(a1 + 2 * a2 * eps)

    def rhs(xi, y):
        P, dP = y
        return [dP, (-0.5 * xi * dP - dP * dP) / ((m - 1.0) * P)]

    sol = integrate.solve_ivp(rhs, (xi_star - eps, -x_left), [P0, dP0], method="DOP853",
                              rtol=1e-13, atol=1e-15, dense_output=True)
    if not sol.success:
        raise CalibrationError(f"profile integration failed: {sol.message}")
    return sol


def _f_from_pressure(P, m):
    return _pos_pow((m - 1.0) / m * P, 1.0 / (m - 1.0))


@functools.lru_cache(maxsize=16)
def solve_heaviside_profile(m: float, tol: float = 1e-6) -> FTable:
    """Tabulate ``f`` solving ``(f^m)'' + xi f'/2 = 0``, ``f(-inf) = 1``, ``f = 0`` past ``xi*``.

    Shooting from the degenerate front: the pressure is started from its
    local expansion at ``xi*`` and integrated leftward; ``xi*`` is root-found
    so that the far-left value is 1.  Results are cached per ``(m, tol)``.
    """
    if not m > 1:
        raise DomainError("the Heaviside-trace profile needs m > 1")
    if not 0 < tol < 1:
        raise DomainError("tol must lie in (0, 1)")
    # 1 - f decays like a Gaussian with diffusivity m near the left end
    x_left = 2.0 + 1.5 * math.sqrt(4.0 * m * math.log(1.0 / tol))

    def g(xi_star):
        sol = _pressure_shot(xi_star, m, x_left)
        return float(_f_from_pressure(sol.y[0, -1], m)) - 1.0

    history = []
    lo, hi = 0.25, 2.0
    glo, ghi = g(lo), g(hi)
    history += [(lo, glo), (hi, ghi)]
    for _ in range(60):
        if glo < 0 < ghi:
            break
        if glo >= 0:
            lo /= 2.0
            glo = g(lo)
            history.append((lo, glo))
        if ghi <= 0:
            hi *= 2.0
            ghi = g(hi)
            history.append((hi, ghi))
    else:
        raise CalibrationError("could not bracket the front position xi*", history)
    xi_star = optimize.brentq(g, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)

    sol = _pressure_shot(xi_star, m, x_left)
    d = min(1e-3, math.sqrt(tol) * 0.5)
    n = int(math.ceil((xi_star + x_left) / d))
    xi = np.linspace(-x_left, xi_star, n + 1)
    P = np.empty_like(xi)
    inside = xi < sol.t[0]
    P[inside] = sol.sol(xi[inside])[0]
    # last sub-eps sliver: local expansion
    delta = xi_star - xi[~inside]
    P[~inside] = xi_star / 2.0 * delta - delta ** 2 / (4.0 * m)
    f = _f_from_pressure(P, m)
    f[-1] = 0.0
    table = FTable(xi, f, m, xi_star)

    if np.any(np.diff(table.f) > 1e-15):
        raise CalibrationError("tabulated profile is not nonincreasing", history)
    if table.f[0] < 1.0 - tol:
        raise CalibrationError("profile does not reach 1 at the left end", history)
    form = "density" if m <= 2 else "pressure"
    res = np.max(np.abs(table.ode_residual(form)))
    if res > tol:
        raise CalibrationError(f"ODE residual {res:.3e} exceeds tol {tol:.1e}", history)
    return table


@dataclass(frozen=True, eq=False)
class HeavisideSS:
    """``W_K(x, t) = K f(K^{-(m-1)/2} log|x| / sqrt(t))``."""

    K: float
    m: float
    table: FTable

    def log_value(self, s, t):
        s = np.asarray(s, dtype=float)
        xi = self.K ** (-(self.m - 1) / 2.0) * s / math.sqrt(t)
        return self.K * self.table(np.where(np.isfinite(xi), xi, -np.inf))

    def radial_value(self, x, t):
        return self.log_value(_log_abs(x), t)


def eval_WK(K: float, m: float, f_table: FTable, x, t: float):
    """Radial evaluation of ``W_K``; ``W_K(0, t) = K``."""
    if not t > 0:
        raise DomainError("t must be > 0")
    return HeavisideSS(K, m, f_table).radial_value(x, t)


# ---------------------------------------------------------------------------
# Peak profile (N = 1, u0(0) = 0)


def k_of_M0(M0: float, m: float) -> float:
    """Branching constant ``k = [M0 m^{m/(m-1)} / (m-1)]^{(m-1)/m}``."""
    if not M0 > 0:
        raise DomainError("M0 must be > 0")
    if not m > 1:
        raise DomainError("m must be > 1")
    return (M0 * m ** (m / (m - 1.0)) / (m - 1.0)) ** ((m - 1.0) / m)


def peak_mass_quadrature(k: float, m: float) -> float:
    """``int_0^k (y/m)^{1/(m-1)} dy`` by adaptive quadrature."""
    val, _ = integrate.quad(lambda y: (y / m) ** (1.0 / (m - 1.0)), 0.0, k,
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def k_of_M0_quadrature(M0: float, m: float) -> float:
    """Independent route to ``k``: root-find on the quadrature of the profile."""
    hi = 1.0
    while peak_mass_quadrature(hi, m) < M0:
        hi *= 2.0
    return optimize.brentq(lambda k: peak_mass_quadrature(k, m) - M0, 0.0, hi,
                           xtol=1e-15, rtol=4 * np.finfo(float).eps)


@dataclass(frozen=True)
class Peak:
    M0: float
    m: float

    @property
    def k(self):
        return k_of_M0(self.M0, self.m)

    def log_value(self, s, t):
        s = np.asarray(s, dtype=float)
        tm = t ** (1.0 / self.m)
        y = s / tm
        inside = (y >= 0) & (y < self.k)
        return np.where(inside, _pos_pow(y / self.m, 1.0 / (self.m - 1.0)) / tm, 0.0)

    def radial_value(self, x, t):
        return self.log_value(_log_abs(x), t)

    def ssvar_value(self, y):
        y = np.asarray(y, dtype=float)
        inside = (y >= 0) & (y < self.k)
        return np.where(inside, _pos_pow(y / self.m, 1.0 / (self.m - 1.0)), 0.0)

    def value_set(self, y):
        """Multivalued ssvar profile: ``(lo, hi)`` bounds, an interval only at ``y = k``."""
        y = np.asarray(y, dtype=float)
        v = self.ssvar_value(y)
        top = (self.k / self.m) ** (1.0 / (self.m - 1.0))
        at_jump = y == self.k
        lo = np.where(at_jump, 0.0, v)
        hi = np.where(at_jump, top, v)
        return lo, hi


def eval_peak_profile(M0: float, m: float, x, t: float):
    if not t > 0:
        raise DomainError("t must be > 0")
    return Peak(M0, m).radial_value(x, t)


def eval_peak_ssvar(M0: float, m: float, y):
    """Value set of the self-similar peak profile at ``y``, as ``(lo, hi)``."""
    return Peak(M0, m).value_set(y)


# ---------------------------------------------------------------------------
# Traveling waves (N = 1, u0(0) = K > 0)


@dataclass(frozen=True)
class TravelingWave:
    """``W_{s0}(s, t) = [c - exp((m-1)(s - s0 - c t)/m)]_+^{1/(m-1)}``, ``c = K^{m-1}``."""

    K: float
    m: float
    s0: float

    def __post_init__(self):
        if not self.K > 0:
            raise DomainError("K must be > 0")
        if not self.m > 1:
            raise DomainError("traveling waves need m > 1")

    @property
    def c(self):
        return self.K ** (self.m - 1.0)

    @property
    def x0(self):
        return math.exp(self.s0)

    def log_value(self, s, t):
        s = np.asarray(s, dtype=float)
        m = self.m
        with np.errstate(over="ignore"):
            e = np.exp((m - 1.0) * (s - self.s0 - self.c * t) / m)
        return _pos_pow(self.c - e, 1.0 / (m - 1.0))

    def radial_value(self, x, t):
        """``U_{x0}(x, t) = [K^{m-1} - (|x|/x0 e^{-ct})^{(m-1)/m}]_+^{1/(m-1)}``."""
        x = np.abs(np.asarray(x, dtype=float))
        m = self.m
        z = (x / self.x0 * math.exp(-self.c * t)) ** ((m - 1.0) / m)
        return _pos_pow(self.c - z, 1.0 / (m - 1.0))

    def front(self, t):
        """Front position in ``s``: ``s0 + c t + m log K``."""
        return self.s0 + self.c * t + self.m * math.log(self.K)

    def front_radial(self, t):
        return self.x0 * self.K ** self.m * math.exp(self.c * t)


def eval_traveling_wave(K: float, m: float, s0: float, s, t: float):
    return TravelingWave(K, m, s0).log_value(s, t)


def eval_U_x0(K: float, m: float, x0: float, x, t: float):
    if not x0 > 0:
        raise DomainError("x0 must be > 0")
    return TravelingWave(K, m, math.log(x0)).radial_value(x, t)


def calibrate_s0(w0_field: Field, K: float, m: float, margin: float = 0.01) -> float:
    """Translation ``s0`` with ``int (w0 - W_{s0}(., 0)) ds = 0`` on the field's grid."""
    v = np.asarray(w0_field.values)
    if v[0] < (1.0 - margin) * K or v[0] > K * (1 + 1e-12):
        raise DomainError(
            f"datum does not approach K={K:g} at the left end (w0={v[0]:.6g})")
    if v[-1] > margin * K:
        raise DomainError(f"datum does not vanish at the right end (w0={v[-1]:.6g})")
    if np.any(v > K * (1 + 1e-12)):
        raise DomainError("datum exceeds K")
    s = w0_field.s
    h = w0_field.grid.h
    mass = float(np.sum(v)) * h

    def g(s0):
        return mass - float(np.sum(TravelingWave(K, m, s0).log_value(s, 0.0))) * h

    # g decreases in s0; start from the step-function guess
    guess = s[0] + mass / K - m * math.log(K)
    lo, hi = guess - 1.0, guess + 1.0
    history = []
    for _ in range(200):
        glo, ghi = g(lo), g(hi)
        history.append((lo, glo, hi, ghi))
        if glo >= 0 >= ghi:
            break
        if glo < 0:
            lo -= 2.0 * (hi - lo)
        if ghi > 0:
            hi += 2.0 * (hi - lo)
    else:
        raise CalibrationError("could not bracket s0", history)
    return optimize.brentq(g, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps,
                           maxiter=500)


# ---------------------------------------------------------------------------
# Inner-region profile


@dataclass(frozen=True)
class InnerLog:
    """``B_D(x,t) = t^{-1/(m-1)} [D + log(|x| t^{1/(m-1)})/m]_+^{1/(m-1)}``."""

    D: float
    m: float

    def log_value(self, s, t):
        s = np.asarray(s, dtype=float)
        q = 1.0 / (self.m - 1.0)
        return t ** (-q) * _pos_pow(self.D + (s + q * math.log(t)) / self.m, q)

    def radial_value(self, x, t):
        return self.log_value(_log_abs(x), t)

    def window_edge(self, t, delta=1.0):
        """Right end, in ``s``, of the inner window ``|x| <= delta t^{-1/(m-1)}``."""
        return math.log(delta) - math.log(t) / (self.m - 1.0)


def eval_inner_profile(D: float, m: float, x, t: float):
    if not t > 0:
        raise DomainError("t must be > 0")
    return InnerLog(D, m).radial_value(x, t)


def fit_D(solution, m: float, delta: float = 1.0):
    """Least-squares ``D`` over the inner window at the solution's (final) time.

    Accepts a :class:`Field` or a trajectory (its last field is used).  Returns
    ``(D, residual)`` where the residual is the RMS of ``t^{1/(m-1)} (w - B_D)``
    over the window.
    """
    fld = solution if isinstance(solution, Field) else solution.fields[-1]
    t = fld.t
    if not t > 0:
        raise DomainError("fit_D needs t > 0")
    q = 1.0 / (m - 1.0)
    s = fld.s
    w = np.asarray(fld.values)
    edge = math.log(delta) - q * math.log(t)
    mask = (s <= edge) & (w > 0)
    if not np.any(mask):
        raise DomainError("inner window contains no positive values")
    scaled = t ** q * w[mask]
    D = float(np.mean(scaled ** (m - 1.0) - (s[mask] + q * math.log(t)) / m))
    model = t ** q * InnerLog(D, m).log_value(s[mask], t)
    residual = float(np.sqrt(np.mean((scaled - model) ** 2)))
    return D, residual


# ---------------------------------------------------------------------------
# Linear case m = 1


def linear_omega(N: int) -> float:
    if N == 2:
        return 2.0 * math.pi
    if N == 1:
        return 1.0
    raise DomainError("N must be 1 or 2")


@dataclass(frozen=True)
class LinGauss:
    """``(M/omega) (4 pi t)^{-1/2} exp(-((log|x| + (N-2) t) / (2 sqrt t))^2)``."""

    M: float
    omega: float
    N: int

    def log_value(self, s, t):
        xi = (np.asarray(s, dtype=float) + (self.N - 2) * t) / (2.0 * math.sqrt(t))
        return self.M / self.omega / math.sqrt(4.0 * math.pi * t) * np.exp(-xi * xi)

    def radial_value(self, x, t):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            out = self.log_value(_log_abs(x), t)
        return np.where(x == 0, 0.0, out)


@dataclass(frozen=True)
class LinErfc:
    """``(K/2) erfc((log|x| + (N-2) t) / (2 sqrt t))``, equal to ``K`` at ``x = 0``."""

    K: float
    N: int

    def log_value(self, s, t):
        xi = (np.asarray(s, dtype=float) + (self.N - 2) * t) / (2.0 * math.sqrt(t))
        return 0.5 * self.K * special.erfc(xi)

    def radial_value(self, x, t):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            out = self.log_value(_log_abs(x), t)
        return np.where(x == 0, self.K, out)


def eval_linear_profiles(kind: str, params: dict, x, t: float):
    """``kind='gauss'``: params ``M``, ``N`` (optional ``omega``); ``kind='erfc'``: ``K``, ``N``."""
    if not t > 0:
        raise DomainError("t must be > 0")
    N = int(params["N"])
    if kind == "gauss":
        omega = params.get("omega", linear_omega(N))
        return LinGauss(params["M"], omega, N).radial_value(x, t)
    if kind == "erfc":
        return LinErfc(params["K"], N).radial_value(x, t)
    raise ValueError("kind must be 'gauss' or 'erfc'")


# ---------------------------------------------------------------------------
# Hölder envelopes


@dataclass(frozen=True)
class HolderEnvelope:
    """``sign=-1``: ``[K - H x^alpha]_+``; ``sign=+1``: ``K + H x^alpha``."""

    K: float
    H: float
    alpha: float
    sign: int

    def radial_value(self, x, t=None):
        xa = np.abs(np.asarray(x, dtype=float)) ** self.alpha
        if self.sign < 0:
            return np.maximum(self.K - self.H * xa, 0.0)
        return self.K + self.H * xa

    def log_value(self, s, t=None):
        with np.errstate(over="ignore"):
            e = np.exp(self.alpha * np.asarray(s, dtype=float))
        if self.sign < 0:
            return np.maximum(self.K - self.H * e, 0.0)
        return self.K + self.H * e

    def support_edge(self):
        return (self.K / self.H) ** (1.0 / self.alpha)


def holder_envelopes(K: float, H: float, alpha: float, m: float):
    """Return ``(lower, upper, admissible)``.

    ``admissible`` is the supersolution condition ``alpha <= H/(m-1+H)``,
    checked as ``(m-1) alpha - H (1-alpha) <= 0`` up to round-off.
    """
    if not (K > 0 and H > 0):
        raise DomainError("K and H must be > 0")
    if not 0 < alpha < 1:
        raise DomainError("Hölder exponent must lie in (0, 1)")
    lower = HolderEnvelope(K, H, alpha, -1)
    upper = HolderEnvelope(K, H, alpha, +1)
    gap = (m - 1.0) * alpha - H * (1.0 - alpha)
    admissible = gap <= 1e-12 * max(1.0, H, (m - 1.0))
    return lower, upper, bool(admissible)
