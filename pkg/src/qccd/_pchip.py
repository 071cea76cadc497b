"""Shape-preserving piecewise cubic Hermite helpers (Fritsch-Carlson slopes).

All routines share one strictly increasing abscissa ``x`` and use constant
extension outside ``[x[0], x[-1]]``.  On each interval the interpolant stays
between its two endpoint values, so nonnegative data give a nonnegative
interpolant.
"""

import numpy as np


def pchip_slopes(x, y, axis=-1):
    """Derivatives at the nodes ``x`` of the monotone cubic through ``y``.

    Follows the weighted harmonic mean rule in the interior and the
    shape-preserving three-point formula at the ends.  ``y`` may carry any
    number of extra dimensions; interpolation runs along ``axis``.
    """
    y = np.moveaxis(np.asarray(y, dtype=float), axis, -1)
    x = np.asarray(x, dtype=float)
    h = np.diff(x)
    delta = np.diff(y, axis=-1) / h
    d = np.zeros_like(y)
    if x.size == 2:
        d[..., 0] = delta[..., 0]
        d[..., 1] = delta[..., 0]
        return np.moveaxis(d, -1, axis)

    w1 = 2.0 * h[1:] + h[:-1]
    w2 = h[1:] + 2.0 * h[:-1]
    dl, dr = delta[..., :-1], delta[..., 1:]
    same_sign = (np.sign(dl) * np.sign(dr)) > 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        hm = (w1 + w2) / (w1 / dl + w2 / dr)
    d[..., 1:-1] = np.where(same_sign, hm, 0.0)

    d[..., 0] = _edge_slope(h[0], h[1], delta[..., 0], delta[..., 1])
    d[..., -1] = _edge_slope(h[-1], h[-2], delta[..., -1], delta[..., -2])
    return np.moveaxis(d, -1, axis)


def _edge_slope(h0, h1, m0, m1):
    d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1)
    d = np.where(np.sign(d) != np.sign(m0), 0.0, d)
    flip = (np.sign(m0) != np.sign(m1)) & (np.abs(d) > np.abs(3.0 * m0))
    return np.where(flip, 3.0 * m0, d)


def _locate(x, xq):
    """Interval index and local coordinate ``s`` in [0, 1] for each query."""
    idx = np.clip(np.searchsorted(x, xq, side="right") - 1, 0, x.size - 2)
    h = x[idx + 1] - x[idx]
    s = np.clip((xq - x[idx]) / h, 0.0, 1.0)
    return idx, s, h


def hermite_eval_shared(x, y, d, xq):
    """Evaluate the interpolants stored in the columns of ``y`` at ``xq``.

    ``y`` and ``d`` have shape (len(x), k); the result has shape
    (len(xq), k).  Queries outside the node range get the end values.
    """
    xq = np.asarray(xq, dtype=float)
    idx, s, h = _locate(x, xq)
    s = s[:, None]
    h = h[:, None]
    s2 = s * s
    s3 = s2 * s
    y0, y1 = y[idx], y[idx + 1]
    d0, d1 = d[idx], d[idx + 1]
    # s is clipped to [0, 1], which already yields the constant tails
    return ((2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0
            + (3 * s2 - 2 * s3) * y1 + (s3 - s2) * h * d1)


def row_cumulative(x, y, d):
    """Running integrals of row-wise interpolants from 0 up to each node.

    Rows of ``y`` are independent interpolants on the common nodes ``x``;
    the constant tail on ``[0, x[0]]`` is included.  Returns an array of the
    same shape as ``y`` and the total integral over ``[0, 1]``.
    """
    h = np.diff(x)
    pieces = h * (y[:, :-1] + y[:, 1:]) / 2.0 + h * h * (d[:, :-1] - d[:, 1:]) / 12.0
    cum = np.empty_like(y)
    cum[:, 0] = x[0] * y[:, 0]
    cum[:, 1:] = cum[:, :1] + np.cumsum(pieces, axis=1)
    total = cum[:, -1] + (1.0 - x[-1]) * y[:, -1]
    return cum, total


def row_integral(x, y, d, cum, t):
    """Integral from 0 to ``t[i]`` of row ``i``'s interpolant.

    ``t`` broadcasts against the row axis: shape (n,) or (m, n) for ``n``
    rows.  Values outside [0, 1] are not special-cased; the tails are
    constant.
    """
    t = np.asarray(t, dtype=float)
    rows = np.broadcast_to(np.arange(y.shape[0]), t.shape)
    idx, s, h = _locate(x, t)
    y0, y1 = y[rows, idx], y[rows, idx + 1]
    d0, d1 = d[rows, idx], d[rows, idx + 1]
    s2 = s * s
    s3 = s2 * s
    s4 = s2 * s2
    part = h * (y0 * (s4 / 2 - s3 + s) + h * d0 * (s4 / 4 - 2 * s3 / 3 + s2 / 2)
                + y1 * (s3 - s4 / 2) + h * d1 * (s4 / 4 - s3 / 3))
    out = cum[rows, idx] + part
    below = t < x[0]
    above = t > x[-1]
    out = np.where(below, t * y[rows, 0], out)
    out = np.where(above, cum[rows, -1] + (t - x[-1]) * y[rows, -1], out)
    return out


def row_eval(x, y, d, t):
    """Value of row ``i``'s interpolant at ``t[i]`` (constant tails)."""
    t = np.asarray(t, dtype=float)
    rows = np.broadcast_to(np.arange(y.shape[0]), t.shape)
    idx, s, h = _locate(x, t)
    s2 = s * s
    s3 = s2 * s
    return ((2 * s3 - 3 * s2 + 1) * y[rows, idx] + (s3 - 2 * s2 + s) * h * d[rows, idx]
            + (3 * s2 - 2 * s3) * y[rows, idx + 1] + (s3 - s2) * h * d[rows, idx + 1])
