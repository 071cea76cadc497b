import numpy as np
import pytest
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from qccd._pchip import (
    hermite_eval_shared,
    pchip_slopes,
    row_cumulative,
    row_eval,
    row_integral,
)

X = (2.0 * np.arange(1, 11) - 1) / 20.0


@pytest.mark.parametrize("seed", range(5))
def test_slopes_match_scipy(seed):
    y = np.random.default_rng(seed).uniform(0, 3, size=X.size)
    ref = PchipInterpolator(X, y).derivative()(X)
    np.testing.assert_allclose(pchip_slopes(X, y), ref, rtol=1e-12, atol=1e-12)


def test_shared_eval_matches_scipy_inside_and_constant_outside():
    rng = np.random.default_rng(1)
    y = rng.uniform(0, 2, size=(X.size, 3))
    d = pchip_slopes(X, y, axis=0)
    xq = np.linspace(0, 1, 57)
    got = hermite_eval_shared(X, y, d, xq)
    inside = (xq >= X[0]) & (xq <= X[-1])
    ref = PchipInterpolator(X, y, axis=0)(xq[inside])
    np.testing.assert_allclose(got[inside], ref, rtol=1e-12, atol=1e-14)
    np.testing.assert_array_equal(got[xq < X[0]], np.broadcast_to(y[0], got[xq < X[0]].shape))
    np.testing.assert_array_equal(got[xq > X[-1]], np.broadcast_to(y[-1], got[xq > X[-1]].shape))


def test_row_integral_matches_quadrature():
    rng = np.random.default_rng(2)
    y = rng.uniform(0, 2, size=(4, X.size))
    d = pchip_slopes(X, y, axis=1)
    cum, total = row_cumulative(X, y, d)
    t = np.array([0.01, 0.33, 0.9, 1.0])
    got = row_integral(X, y, d, cum, t)
    for i in range(4):
        f = lambda s: row_eval(X, y[i:i + 1], d[i:i + 1], np.array([s]))[0]  # noqa: E731
        ref, _ = quad(f, 0, t[i], points=list(X[X < t[i]]), limit=200, epsabs=1e-13)
        assert got[i] == pytest.approx(ref, abs=1e-10)
    assert np.all(got[-1] == total[-1])


def test_nonnegative_data_gives_nonnegative_interpolant():
    y = np.zeros((1, X.size))
    y[0, 4] = 5.0
    d = pchip_slopes(X, y, axis=1)
    vals = row_eval(X, np.repeat(y, 500, axis=0), np.repeat(d, 500, axis=0), np.linspace(0, 1, 500))
    assert vals.min() >= 0.0
