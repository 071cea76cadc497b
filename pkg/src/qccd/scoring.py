"""Quantile scores of a bivariate sample in both causal directions.

A single copula is fitted per pair and reused for the conditional quantiles
of Y given X and of X given Y, so both directions share one model of the
joint distribution.  Per-level scores are combined by Gauss-Legendre
quadrature over the quantile level.
"""

import zlib
from dataclasses import dataclass

import numpy as np

from . import copula
from .marginals import has_ties, jitter, pseudo_observations, sorted_quantile

DEFAULT_M = 3
MAX_M = 64
DEGENERATE_SCORE = 1e-12


def quantile_loss(forecast, observation, tau):
    """Pinball loss ``(1{f >= o} - tau) * (f - o)``; vectorized, always >= 0."""
    f = np.asarray(forecast, dtype=float)
    o = np.asarray(observation, dtype=float)
    loss = ((f >= o).astype(float) - tau) * (f - o)
    return float(loss) if loss.ndim == 0 else loss


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, func):
        return float(np.sum(self.weights * func(self.nodes)))


def gauss_legendre(m):
    """Gauss-Legendre rule on [0, 1] with ``m`` nodes.

    Roots of the degree-``m`` Legendre polynomial are found by Newton
    iteration from Chebyshev-like starting points, then mapped from
    [-1, 1]; the weights sum to one.
    """
    if not (isinstance(m, (int, np.integer)) and 1 <= m <= MAX_M):
        raise ValueError(f"number of quadrature nodes must be an integer in [1, {MAX_M}], got {m!r}")
    i = np.arange(1, m + 1)
    x = np.cos(np.pi * (i - 0.25) / (m + 0.5))
    for _ in range(100):
        p, dp = _legendre(m, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) < 1e-16:
            break
    _, dp = _legendre(m, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    return QuadratureRule(nodes=(x[order] + 1.0) / 2.0, weights=w[order] / 2.0)


def _legendre(m, x):
    """P_m(x) and its derivative by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, m + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    if m == 0:
        return p0, np.zeros_like(x)
    dp = m * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@dataclass(frozen=True)
class DirectionalScores:
    """Average pinball losses at one quantile level.

    ``s_y_given_x`` is in units of Y and ``s_x_given_y`` in units of X.
    """

    tau: float
    s_y_given_x: float
    s_x_given_y: float

    @property
    def s_xy(self):
        return normalized_score(self.s_y_given_x, self.s_x_given_y)

    @property
    def s_yx(self):
        return normalized_score(self.s_x_given_y, self.s_y_given_x)


def normalized_score(s_y_given_x, s_x_given_y):
    """``S_X|Y / (S_Y|X + S_X|Y)``, with 0.5 for degenerate or numerically tied scores."""
    a = np.asarray(s_y_given_x, dtype=float)
    b = np.asarray(s_x_given_y, dtype=float)
    tie = ((a < DEGENERATE_SCORE) & (b < DEGENERATE_SCORE)) | (np.abs(a - b) <= 1e-12 * (a + b))
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(tie, 0.5, b / (a + b))
    return float(s) if s.ndim == 0 else s


@dataclass(frozen=True)
class FittedPair:
    """A pair after tie-breaking and ranking, with its copula fit."""

    x: np.ndarray
    y: np.ndarray
    u: np.ndarray
    v: np.ndarray
    model: copula.CopulaModel

    @property
    def n(self):
        return self.x.size


def column_seed(seed, values):
    """Jitter seed for one column, derived from the global seed and the column
    contents so that it does not depend on the column's position."""
    digest = zlib.crc32(np.ascontiguousarray(values, dtype=float).tobytes())
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFF, digest])


def prepare_column(values, seed=0):
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise ValueError("columns must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise ValueError("columns must contain finite values only")
    if has_ties(x):
        x = jitter(x, column_seed(seed, x))
    return x


def fit_pair(x, y, seed=0):
    """Jitter ties, compute pseudo-observations and fit the shared copula."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"columns differ in length: {x.shape} vs {y.shape}")
    if x.size < copula.MIN_OBS:
        raise ValueError(f"need at least {copula.MIN_OBS} observations, got {x.size}")
    xj = prepare_column(x, seed)
    yj = prepare_column(y, seed)
    u = pseudo_observations(xj)
    v = pseudo_observations(yj)
    return FittedPair(xj, yj, u, v, copula.fit(u, v))


def score_arrays(fitted, taus):
    """Directional scores at each level in ``taus``; returns two arrays.

    All levels are inverted in one vectorized bisection sharing the
    conditional profiles of each observation.
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any((taus <= 0) | (taus >= 1)):
        raise ValueError("quantile levels must lie strictly inside (0, 1)")
    model = fitted.model
    t = taus[:, None]

    p_y = model.given_u(fitted.u).inverse(t)
    q_y = _quantiles(fitted.y, p_y)
    s_y_given_x = np.mean(quantile_loss(q_y, fitted.y[None, :], t), axis=1)

    p_x = model.given_v(fitted.v).inverse(t)
    q_x = _quantiles(fitted.x, p_x)
    s_x_given_y = np.mean(quantile_loss(q_x, fitted.x[None, :], t), axis=1)
    return s_y_given_x, s_x_given_y


def _quantiles(sample, p):
    return sorted_quantile(np.sort(sample), p)


def directional_scores(fitted, tau):
    """Quantile scores of both directions at level ``tau`` for a fitted pair."""
    a, b = score_arrays(fitted, [tau])
    return DirectionalScores(float(tau), float(a[0]), float(b[0]))


def aggregate_score(x, y, m=DEFAULT_M, seed=0):
    """Integrated score ``S_{X->Y}`` in [0, 1]; above 0.5 favours X causing Y.

    Parameters
    ----------
    x, y : array_like
        Paired observations, at least 10 of each.
    m : int
        Number of Gauss-Legendre nodes over the quantile level.  ``m = 1``
        uses the conditional median only.
    seed : int
        Seed for breaking ties; irrelevant for continuous data.
    """
    rule = gauss_legendre(m)
    fitted = fit_pair(x, y, seed)
    a, b = score_arrays(fitted, rule.nodes)
    # centred sum keeps an all-undecided pair at exactly 0.5
    centred = float(np.sum(rule.weights * (normalized_score(a, b) - 0.5)))
    return min(1.0, max(0.0, 0.5 + centred))
