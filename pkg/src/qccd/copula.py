"""Transformation kernel estimator of a bivariate copula on a fixed grid.

Pseudo-observations are mapped to normal scores, a bivariate Gaussian kernel
density is evaluated there, and the result is divided by the product of the
standard normal densities.  The density is stored on a 30 x 30 grid and
interpolated with shape-preserving cubics; conditional distributions
(h-functions) are integrals of the interpolated density, normalized per
conditioning value, and are inverted by bisection.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from ._pchip import (
    hermite_eval_shared,
    pchip_slopes,
    row_cumulative,
    row_eval,
    row_integral,
)
from .marginals import sorted_quantile

GRID_SIZE = 30
MIN_OBS = 10
DEGENERATE_INFLATION = 1e-4
BISECTION_MAX_ITER = 50
BISECTION_TOL = 1e-13

_LOG_2PI = np.log(2.0 * np.pi)
_CDF_POINTS, _CDF_WEIGHTS = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class BandwidthMatrix:
    """Symmetric positive definite 2x2 kernel covariance on the normal-score scale."""

    b11: float
    b12: float
    b22: float

    def __post_init__(self):
        if not (self.b11 > 0 and self.b22 > 0 and self.det > 0):
            raise ValueError(f"bandwidth matrix is not positive definite: {self}")

    @property
    def det(self):
        return self.b11 * self.b22 - self.b12 * self.b12

    def as_array(self):
        return np.array([[self.b11, self.b12], [self.b12, self.b22]])


def normal_scores(u, v):
    """Standard normal quantiles of both pseudo-observation columns, shape (n, 2)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any((u <= 0) | (u >= 1)) or np.any((v <= 0) | (v >= 1)):
        raise ValueError("pseudo-observations must lie strictly inside (0, 1)")
    return np.column_stack([ndtri(u), ndtri(v)])


def select_bandwidth(scores):
    """Normal-reference rule ``n**(-1/3) * cov(scores)``.

    When the sample covariance is singular (perfect rank dependence) its
    diagonal is inflated by 1e-4 first.
    """
    z = np.asarray(scores, dtype=float)
    n = z.shape[0]
    if n < MIN_OBS:
        raise ValueError(f"bandwidth selection needs at least {MIN_OBS} observations, got {n}")
    c1 = z[:, 0] - z[:, 0].mean()
    c2 = z[:, 1] - z[:, 1].mean()
    s11 = np.sum(c1 * c1) / (n - 1)
    s22 = np.sum(c2 * c2) / (n - 1)
    s12 = np.sum(c1 * c2) / (n - 1)
    if s11 * s22 - s12 * s12 <= 1e-10 * s11 * s22:
        s11 += DEGENERATE_INFLATION
        s22 += DEGENERATE_INFLATION
    scale = n ** (-1.0 / 3.0)
    return BandwidthMatrix(scale * s11, scale * s12, scale * s22)


def _kde_grid(scores, bw, z1, z2):
    """Kernel density of ``scores`` at every point of the product grid z1 x z2.

    The quadratic form is written so that swapping both the coordinates and
    the bandwidth entries gives bit-identical results (exchange symmetry).
    """
    det = bw.det
    norm = 1.0 / (2.0 * np.pi * np.sqrt(det))
    n = scores.shape[0]
    d2 = z2[:, None] - scores[None, :, 1]
    d2sq = bw.b11 * (d2 * d2)
    out = np.empty((z1.size, z2.size))
    for k, zk in enumerate(z1):
        d1 = zk - scores[:, 0]
        q = (bw.b22 * (d1 * d1) + d2sq - 2.0 * bw.b12 * (d1 * d2)) / det
        out[k] = np.sum(np.exp(-0.5 * q), axis=-1) / n
    return norm * out


def kernel_density(scores, bw, z):
    """Gaussian kernel estimate ``(1/n) sum_i W_B(z - Z_i)`` at the points ``z``.

    ``z`` is a pair or an array of shape (k, 2); a float or an array of
    length k is returned.
    """
    scores = np.asarray(scores, dtype=float).reshape(-1, 2)
    pts = np.asarray(z, dtype=float)
    flat = pts.reshape(-1, 2)
    vals = np.array([_kde_grid(scores, bw, p[:1], p[1:])[0, 0] for p in flat])
    return float(vals[0]) if pts.ndim == 1 else vals


def copula_density(scores, bw, u, v):
    """Transformation estimator ``g(Phi^-1(u), Phi^-1(v)) / (phi(.) phi(.))``."""
    z = normal_scores(np.atleast_1d(u), np.atleast_1d(v))
    g = kernel_density(scores, bw, z)
    dens = g / (_phi(z[:, 0]) * _phi(z[:, 1]))
    return float(dens[0]) if np.ndim(u) == 0 and np.ndim(v) == 0 else dens


def _phi(z):
    return np.exp(-0.5 * z * z - 0.5 * _LOG_2PI)


class _Conditional:
    """Normalized conditional CDFs along the second grid axis.

    One row per conditioning value ``w``: the grid is first interpolated
    along its first axis at ``w``, then each resulting profile is
    interpolated and integrated along the second axis.
    """

    def __init__(self, nodes, grid, slopes, w):
        self.nodes = nodes
        prof = hermite_eval_shared(nodes, grid, slopes, np.asarray(w, dtype=float).ravel())
        # monotone cubics never undershoot nonnegative data; this is a guard only
        np.maximum(prof, 0.0, out=prof)
        self.values = prof
        self.slopes = pchip_slopes(nodes, prof, axis=1)
        self.cum, self.total = row_cumulative(nodes, prof, self.slopes)
        self.flat = ~(self.total > 1e-300)

    def integral(self, t):
        return row_integral(self.nodes, self.values, self.slopes, self.cum, t)

    def density(self, t):
        return np.maximum(row_eval(self.nodes, self.values, self.slopes, t), 0.0)

    def cdf(self, t):
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        with np.errstate(invalid="ignore", divide="ignore"):
            h = self.integral(t) / self.total
        # an all-zero profile carries no information; fall back to uniform
        h = np.where(self.flat, t, h)
        return np.clip(h, 0.0, 1.0)

    def inverse(self, tau):
        tau = np.asarray(tau, dtype=float)
        lo = np.zeros(np.broadcast_shapes(tau.shape, self.total.shape))
        hi = np.ones_like(lo)
        for _ in range(BISECTION_MAX_ITER):
            mid = 0.5 * (lo + hi)
            below = self.cdf(mid) < tau
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.max(hi - lo) < BISECTION_TOL:
                break
        return 0.5 * (lo + hi)


class CopulaModel:
    """Fitted copula surface; immutable after construction.

    Attributes
    ----------
    nodes : ndarray of shape (G,)
        Grid coordinates in (0, 1), shared by both axes.
    density : ndarray of shape (G, G)
        Estimated copula density; ``density[k, l]`` is at ``(nodes[k], nodes[l])``.
    bandwidth : BandwidthMatrix
    n : int
        Number of observations used in the fit.
    """

    def __init__(self, nodes, density, bandwidth, n):
        self.nodes = np.asarray(nodes, dtype=float)
        self.density = np.maximum(np.asarray(density, dtype=float), 0.0)
        self.bandwidth = bandwidth
        self.n = n
        self._density_t = np.ascontiguousarray(self.density.T)
        self._slopes = pchip_slopes(self.nodes, self.density, axis=0)
        self._slopes_t = pchip_slopes(self.nodes, self._density_t, axis=0)
        for arr in (self.nodes, self.density, self._density_t, self._slopes, self._slopes_t):
            arr.flags.writeable = False
        self._total_mass = None

    def __repr__(self):
        return f"CopulaModel(n={self.n}, grid={self.nodes.size}x{self.nodes.size}, bandwidth={self.bandwidth})"

    def given_u(self, u):
        """Conditional distributions of V given each value in ``u``."""
        return _Conditional(self.nodes, self.density, self._slopes, u)

    def given_v(self, v):
        """Conditional distributions of U given each value in ``v``."""
        return _Conditional(self.nodes, self._density_t, self._slopes_t, v)

    def pdf(self, u, v):
        """Interpolated (unnormalized) density surface, clamped at zero."""
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        out = self.given_u(u).density(v.ravel())
        return out.reshape(u.shape) if u.ndim else float(out[0])

    def hfunc1(self, u, v):
        """P(V <= v | U = u), i.e. the normalized derivative of C in u."""
        return self._apply(self.given_u, u, v, "cdf")

    def hfunc2(self, u, v):
        """P(U <= u | V = v), i.e. the normalized derivative of C in v."""
        return self._apply(self.given_v, v, u, "cdf")

    def hinv1(self, u, tau):
        """Inverse of ``hfunc1`` in its second argument, by bisection on [0, 1]."""
        return self._apply(self.given_u, u, tau, "inverse")

    def hinv2(self, v, tau):
        """Inverse of ``hfunc2`` in its first argument: returns u with
        ``hfunc2(u, v) = tau``."""
        return self._apply(self.given_v, v, tau, "inverse")

    @staticmethod
    def _apply(make, cond, arg, method):
        cond, arg = np.broadcast_arrays(np.asarray(cond, dtype=float), np.asarray(arg, dtype=float))
        c = make(cond.ravel())
        out = getattr(c, method)(arg.ravel())
        return out.reshape(cond.shape) if cond.ndim else float(out[0])

    def cdf(self, u, v):
        """Copula distribution function, the double integral of the surface
        normalized so that ``C(1, 1) == 1``."""
        if self._total_mass is None:
            self._total_mass = self._mass(1.0, 1.0)
        u, v = np.broadcast_arrays(np.clip(np.asarray(u, dtype=float), 0, 1),
                                   np.clip(np.asarray(v, dtype=float), 0, 1))
        out = np.array([self._mass(a, b) for a, b in zip(u.ravel(), v.ravel())]) / self._total_mass
        return out.reshape(u.shape) if u.ndim else float(out[0])

    def _mass(self, u, v):
        if u <= 0.0 or v <= 0.0:
            return 0.0
        breaks = np.concatenate([[0.0], self.nodes, [1.0]])
        lo = breaks[:-1][breaks[:-1] < u]
        hi = np.minimum(breaks[1:][: lo.size], u)
        half = 0.5 * (hi - lo)
        pts = (lo + half)[:, None] + half[:, None] * _CDF_POINTS[None, :]
        wts = half[:, None] * _CDF_WEIGHTS[None, :]
        inner = self.given_u(pts.ravel()).integral(np.full(pts.size, v))
        return float(np.sum(wts.ravel() * inner))


def fit(u, v, grid_size=GRID_SIZE):
    """Fit the copula surface to pseudo-observations ``u`` and ``v``.

    The density is evaluated at the cell centres ``(2k - 1) / (2 * grid_size)``
    so that no node sits on the singular boundary of the normal transform.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError("u and v must be one-dimensional arrays of equal length")
    if u.size < MIN_OBS:
        raise ValueError(f"copula fit needs at least {MIN_OBS} observations, got {u.size}")
    scores = normal_scores(u, v)
    bw = select_bandwidth(scores)
    nodes = (2.0 * np.arange(1, grid_size + 1) - 1.0) / (2.0 * grid_size)
    zn = ndtri(nodes)
    g = _kde_grid(scores, bw, zn, zn)
    phi = _phi(zn)
    dens = g / (phi[:, None] * phi[None, :])
    return CopulaModel(nodes, dens, bw, u.size)


def conditional_quantile_y_given_x(model, sample_y, u, tau):
    """tau-quantile of Y given U = u: ``F_Y^-1(hinv1(u, tau))``."""
    p = model.hinv1(u, tau)
    return sorted_quantile(np.sort(np.asarray(sample_y, dtype=float)), p)


def conditional_quantile_x_given_y(model, sample_x, v, tau):
    """tau-quantile of X given V = v: ``F_X^-1(hinv2(v, tau))``."""
    p = model.hinv2(v, tau)
    return sorted_quantile(np.sort(np.asarray(sample_x, dtype=float)), p)
