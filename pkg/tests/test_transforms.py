import numpy as np
import pytest

from nhpme.core import DomainError, Field, Grid1D
from nhpme.profiles import LogBarenblatt, Peak, calibrate_C0, solve_heaviside_profile, HeavisideSS
from nhpme.transforms import (log_to_radial, moving_frame_shift, radial_to_log, resample_log,
                              self_similar_rescale_pme, to_ssvar)


def test_constant_roundtrip():
    g = Grid1D(-3, 2, 40)
    r = np.exp(np.linspace(-3.5, 2.5, 30))
    f = radial_to_log(np.column_stack([r, np.full(30, 0.7)]), g)
    assert np.all(f.values == 0.7)
    back = log_to_radial(f, np.exp(g.centers[3:9]))
    assert np.all(back[:, 1] == 0.7)


@pytest.mark.parametrize("m", [2.0, 3.0])
def test_log_substitution(m):
    r = np.exp(np.linspace(-2, 2, 4001))
    u = np.maximum(1 - np.log(r) ** 2, 0) ** (1 / (m - 1))
    g = Grid1D(-1.9, 1.9, 100)
    f = radial_to_log(np.column_stack([r, u]), g)
    np.testing.assert_allclose(f.values, np.maximum(1 - g.centers ** 2, 0) ** (1 / (m - 1)),
                               atol=2e-3)


def test_barenblatt_radial_to_log():
    m = 2.0
    B = LogBarenblatt(calibrate_C0(1.0, m), m)
    r = np.exp(np.linspace(-5, 5, 20001))
    g = Grid1D(-4.5, 4.5, 90)
    f = radial_to_log(np.column_stack([r, B.radial_value(r, 1.0)]), g)
    np.testing.assert_allclose(f.values, B.log_value(g.centers, 1.0), atol=1e-5)


def test_bounds_preserved(rng):
    r = np.sort(rng.random(50)) * 10 + 0.01
    v = rng.random(50)
    s = np.linspace(np.log(r[0]), np.log(r[-1]), 997)
    out = resample_log(r, v, s)
    assert out.min() >= v.min() and out.max() <= v.max()


@pytest.mark.parametrize("r,v,s", [
    ([0.0, 1.0, 2.0], [1, 1, 1], [0.1]),
    ([-1.0, 1.0], [1, 1], [0.0]),
    ([1.0, 0.5], [1, 1], [-0.1]),
    ([1.0, 2.0], [1, -1], [0.1]),
    ([1.0, 2.0], [1, 1], [1.0]),
])
def test_resample_rejects(r, v, s):
    with pytest.raises(DomainError):
        resample_log(r, v, s)


def test_log_to_radial_rejects():
    f = Field(Grid1D(-1, 1, 16), 0, np.ones(16))
    with pytest.raises(DomainError):
        log_to_radial(f, [np.exp(2.0)])
    with pytest.raises(DomainError):
        log_to_radial(f, [0.0])


def test_roundtrip_smooth():
    g = Grid1D(-4, 4, 2048)
    fn = lambda s: np.exp(-s ** 2) * (1 + 0.3 * np.sin(3 * s)) + 0.2
    f = Field(g, 0, fn(g.centers))
    # identity on the grid nodes
    back = radial_to_log(log_to_radial(f, np.exp(g.centers)), g)
    np.testing.assert_allclose(back.values, f.values, rtol=0, atol=1e-14)
    mid = 0.5 * (g.centers[:-1] + g.centers[1:])
    out = log_to_radial(f, np.exp(mid))
    assert np.max(np.abs(out[:, 1] - fn(mid))) <= 1e-3


def test_roundtrip_second_order():
    # symmetric C^2 bump with its maximum on a cell face: error f''(0) h^2 / 8
    errs = []
    for n in (256, 512, 1024, 2048):
        g = Grid1D(-4, 4, n)
        f = Field(g, 0, np.exp(-g.centers ** 2))
        mid = 0.5 * (g.centers[:-1] + g.centers[1:])
        errs.append(np.max(np.abs(log_to_radial(f, np.exp(mid))[:, 1] - np.exp(-mid ** 2))))
    for a, b in zip(errs, errs[1:]):
        assert 3.5 <= a / b <= 4.5


@pytest.mark.parametrize("m", [2.0, 3.0])
def test_barenblatt_center(m):
    C0 = calibrate_C0(1.0, m)
    g = Grid1D(-3, 3, 301)
    f = Field(g, 1.0, LogBarenblatt(C0, m).log_value(g.centers, 1.0))
    out = log_to_radial(f, [1.0])
    assert out[0, 1] == pytest.approx(C0 ** (1 / (m - 1)), rel=1e-12)


def test_moving_frame_shift():
    g = Grid1D(-10, 10, 20)
    f = Field(g, 3.0, np.arange(20.0))
    assert moving_frame_shift(f, 2, 3.0) is f
    assert moving_frame_shift(f, 1, 0.0) is f
    sh = moving_frame_shift(f, 1, 3.0)
    # w(s) = v(s + (N-2) t): the value stored at sigma now sits at s = sigma + 3
    np.testing.assert_allclose(sh.s, f.s + 3.0)
    np.testing.assert_array_equal(sh.values, f.values)
    with pytest.raises(DomainError):
        moving_frame_shift(f, 3, 1.0)


def _pme_residual(w, s, t, m, d=1e-3):
    wt = (w(s, t + d) - w(s, t - d)) / (2 * d)
    W = lambda x: w(x, t) ** m
    return wt - (W(s + d) - 2 * W(s) + W(s - d)) / d ** 2


def test_rescale_identity_and_constants():
    B = LogBarenblatt(0.4, 2.0)
    w = lambda s, t: B.log_value(s, t)
    s = np.linspace(-3, 3, 31)
    np.testing.assert_array_equal(self_similar_rescale_pme(w, 1.0)(s, 2.0), w(s, 2.0))
    const = lambda s, t: np.full_like(np.asarray(s, dtype=float), 0.7)
    for lam in (0.1, 1.0, 37.0):
        assert np.all(self_similar_rescale_pme(const, lam)(s, 1.5) == 0.7)
    with pytest.raises(DomainError):
        self_similar_rescale_pme(w, 0.0)


@pytest.mark.parametrize("lam", [0.25, 4.0, 100.0])
def test_rescale_heaviside_fixed_point(lam):
    W = HeavisideSS(1.0, 2.0, solve_heaviside_profile(2.0))
    w = lambda s, t: W.log_value(s, t)
    s = np.linspace(-6, 6, 241)
    np.testing.assert_allclose(self_similar_rescale_pme(w, lam)(s, 3.0), w(s, 3.0), atol=1e-14)


@pytest.mark.parametrize("lam", [0.5, 2.0, 10.0])
def test_rescale_preserves_residual(lam):
    m = 2.0
    B = LogBarenblatt(0.5, m)
    w = lambda s, t: B.log_value(s, t)
    wl = self_similar_rescale_pme(w, lam)
    s = np.linspace(-0.5, 0.5, 21)
    r0 = np.max(np.abs(_pme_residual(w, s, 2.0, m)))
    r1 = np.max(np.abs(_pme_residual(wl, s, 2.0, m)))
    assert r1 <= 10 * max(r0, 1e-12)


def test_ssvar():
    g = Grid1D(-2, 8, 200)
    m = 2.0
    zero = Field(g, 4.0, np.zeros(200))
    y, u = to_ssvar(zero, m)
    assert np.all(u == 0)
    f1 = Field(g, 1.0, np.linspace(0, 1, 200))
    y, u = to_ssvar(f1, m)
    np.testing.assert_array_equal(y, f1.s)
    np.testing.assert_array_equal(u, f1.values)
    with pytest.raises(DomainError):
        to_ssvar(Field(g, 0.0, np.zeros(200)), m)


@pytest.mark.parametrize("m,t", [(2.0, 4.0), (3.0, 8.0), (2.0, 100.0)])
def test_ssvar_peak(m, t):
    P = Peak(1.0, m)
    g = Grid1D(-3, 30, 3301)
    f = Field(g, t, P.log_value(g.centers, t))
    y, u = to_ssvar(f, m)
    expected = np.where((y >= 0) & (y < P.k), np.maximum(y / m, 0) ** (1 / (m - 1)), 0.0)
    np.testing.assert_allclose(u, expected, rtol=1e-12, atol=1e-15)


def test_ssvar_sup_identity(rng):
    m, t = 3.0, 5.0
    g = Grid1D(-4, 4, 100)
    a, b = rng.random(100), rng.random(100)
    ya, ua = to_ssvar(Field(g, t, a), m)
    yb, ub = to_ssvar(Field(g, t, b), m)
    assert np.max(np.abs(ua - ub)) == pytest.approx(t ** (1 / m) * np.max(np.abs(a - b)),
                                                    rel=1e-14)
