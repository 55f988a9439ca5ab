import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhpme.core import (Bump, DomainError, Field, Grid1D, Plateau, ProblemSpec,
                        ProfileSnapshot, Table, build_initial_field, weighted_mass)
from nhpme.profiles import LogBarenblatt, calibrate_C0


class _Bad:
    def __init__(self, value):
        self.value = value

    def log_value(self, s):
        out = np.zeros_like(np.asarray(s, dtype=float))
        out[len(out) // 2] = self.value
        return out


def test_grid_basic():
    g = Grid1D(-1.0, 3.0, 8)
    assert g.h == 0.5
    assert g.centers[0] == pytest.approx(-0.75)
    assert g.centers[-1] == pytest.approx(2.75)
    assert g.length == 4.0


@pytest.mark.parametrize("s_min,s_max,n", [(-10, 10, 1000), (-320, 100, 1680), (-1e-3, 7.5, 4097)])
def test_grid_spacing_uniform(s_min, s_max, n):
    g = Grid1D(s_min, s_max, n)
    d = np.diff(g.centers)
    assert np.all(d > 0)
    assert np.max(np.abs(d - g.h)) <= 8 * np.finfo(float).eps * abs(s_max - s_min)


@pytest.mark.parametrize("args", [(1.0, 1.0, 4), (2.0, 1.0, 4), (0.0, 1.0, 0)])
def test_grid_rejects(args):
    with pytest.raises(DomainError):
        Grid1D(*args)


def test_field_invariants():
    g = Grid1D(-1, 1, 4)
    with pytest.raises(DomainError):
        Field(g, 0.0, [0, 1, -1e-3, 0])
    with pytest.raises(DomainError):
        Field(g, 0.0, [0, np.nan, 0, 0])
    with pytest.raises(DomainError):
        Field(g, 0.0, [0, 1, 0])
    f = Field(g, 0.0, [0, 1, 2, 3])
    with pytest.raises(ValueError):
        f.values[0] = 5.0


def test_plateau_limits():
    g = Grid1D(-10, 10, 400)
    f = build_initial_field(Plateau(1.0, 4.0), g)
    assert f.t == 0.0
    assert f.values[0] == pytest.approx(1.0, abs=1e-12)
    assert f.values[-1] == pytest.approx(0.0, abs=1e-12)
    assert np.all(np.diff(f.values) <= 0)


def test_zero_datum():
    f = build_initial_field(Bump(0.0, 1.0), Grid1D(-5, 5, 64))
    assert np.all(f.values == 0)
    assert weighted_mass(f) == 0.0


def test_figure_datum_pointwise():
    g = Grid1D(-6, 1, 700)
    f = build_initial_field(Bump(0.1, 0.5), g)
    x = np.exp(g.centers)
    np.testing.assert_allclose(f.values, 0.1 * np.maximum(0.5 - x ** 2, 0.0), rtol=0, atol=1e-16)


@pytest.mark.parametrize("datum", [Bump(0.1, 0.5), Bump(2.0, 1.0, 0.5), Plateau(1.5, 0.7, 2.0),
                                   Plateau(1.0, 3.0)])
def test_radial_sampling_commutes(datum):
    s = np.linspace(-8, 3, 501)
    np.testing.assert_allclose(datum.log_value(s), datum.radial(np.exp(s)), rtol=1e-12,
                               atol=1e-15)


def test_bump_hole_vanishes_at_origin():
    d = Bump(1.0, 1.0, 0.5)
    assert d.origin_value == 0.0
    assert d.radial(np.array([0.1, 0.5]))[0] == 0.0
    with pytest.raises(DomainError):
        Bump(1.0, 0.2, 0.5)


def test_table_datum():
    r = np.exp(np.linspace(math.log(0.01), math.log(5), 200))
    d = Table(r, np.exp(-r))
    g = Grid1D(math.log(0.01), math.log(5), 64)
    f = build_initial_field(d, g)
    np.testing.assert_allclose(f.values, np.exp(-np.exp(g.centers)), atol=1e-4)
    assert d.origin_value == pytest.approx(np.exp(-0.01))


@pytest.mark.parametrize("bad,match", [(np.nan, "finite"), (np.inf, "finite"), (-1.0, "negative")])
def test_build_rejects(bad, match):
    with pytest.raises(DomainError, match=match):
        build_initial_field(_Bad(bad), Grid1D(-1, 1, 16))


def test_mass_indicator():
    for n in (100, 1000, 10000):
        g = Grid1D(-2, 3, n)
        v = ((g.centers >= 0) & (g.centers <= 1)).astype(float)
        assert abs(weighted_mass(Field(g, 0, v)) - 1.0) <= 2 * g.h


# the edge behaves like a root of order 1/(m-1), so quadrature converges slower for m = 3
@pytest.mark.parametrize("m,tol", [(2.0, 1e-6), (3.0, 2e-5)])
def test_mass_barenblatt(m, tol):
    C0 = calibrate_C0(1.0, m)
    g = Grid1D(-12, 12, 2 ** 14)
    f = Field(g, 1.0, LogBarenblatt(C0, m).log_value(g.centers, 1.0))
    assert weighted_mass(f) == pytest.approx(1.0, abs=tol)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(0, 5), b=st.floats(0, 5), seed=st.integers(0, 2 ** 32 - 1))
def test_mass_linear_and_monotone(a, b, seed):
    rng = np.random.default_rng(seed)
    g = Grid1D(-3, 3, 32)
    v1 = rng.random(32)
    v2 = v1 + rng.random(32)
    f1, f2 = Field(g, 0, v1), Field(g, 0, v2)
    lin = weighted_mass(Field(g, 0, a * v1 + b * v2))
    assert lin == pytest.approx(a * weighted_mass(f1) + b * weighted_mass(f2), rel=1e-12, abs=1e-14)
    assert weighted_mass(f1) <= weighted_mass(f2)


def test_problem_spec_validation():
    d = Bump(1.0, 1.0)
    p = ProblemSpec(2, 2.0, d, -5, 5, 16, 1.0)
    assert p.output_times == (1.0,)
    assert p.grid.n_cells == 16
    bad = [
        dict(dimension=3), dict(m=0.5), dict(s_min=1.0), dict(s_max=-0.1), dict(n_cells=15),
        dict(t_end=0.0), dict(output_times=(0.5, 0.2)), dict(output_times=(0.5, 2.0)),
        dict(output_times=(0.0, 1.0)),
    ]
    base = dict(dimension=2, m=2.0, datum=d, s_min=-5, s_max=5, n_cells=16, t_end=1.0)
    for over in bad:
        with pytest.raises(DomainError):
            ProblemSpec(**{**base, **over})


def test_profile_snapshot():
    prof = LogBarenblatt(0.5, 2.0)
    snap = ProfileSnapshot(prof, 2.0)
    s = np.linspace(-3, 3, 11)
    np.testing.assert_array_equal(snap.log_value(s), prof.log_value(s, 2.0))
