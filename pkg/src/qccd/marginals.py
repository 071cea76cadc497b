"""Rank transforms, tie jittering and empirical quantiles of a single variable."""

import numpy as np


def _as_sample(sample, min_size=2):
    x = np.asarray(sample, dtype=float)
    if x.ndim != 1:
        raise ValueError("sample must be one-dimensional")
    if x.size < min_size:
        raise ValueError(f"sample needs at least {min_size} observations, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample contains non-finite values")
    return x


def has_ties(sample):
    x = np.sort(np.asarray(sample, dtype=float))
    return bool(np.any(x[1:] == x[:-1]))


def jitter(sample, seed=0):
    """Break exact ties at random while keeping the order of distinct values.

    Every member of a tie group is shifted by uniform noise on
    ``(-g/4, g/4)``, where ``g`` is the smallest gap between distinct
    values; untied values are returned unchanged.  If all values are equal
    there is no gap and unit-scale noise on ``(-1/2, 1/2)`` is used.

    Parameters
    ----------
    sample : array_like
        One-dimensional sample, at least two observations.
    seed : int or numpy.random.SeedSequence
        Seed for the noise; the output is a deterministic function of
        ``(sample, seed)``.

    Returns
    -------
    numpy.ndarray
        A float copy of the sample without exact ties.
    """
    x = _as_sample(sample).copy()
    if not has_ties(x):
        return x
    rng = np.random.default_rng(seed)
    distinct = np.unique(x)
    half_width = np.min(np.diff(distinct)) / 4.0 if distinct.size > 1 else 0.5

    _, inverse, counts = np.unique(x, return_inverse=True, return_counts=True)
    tied = counts[inverse] > 1
    base = x[tied]
    # a redraw is only needed on a float collision, which is astronomically rare
    for _ in range(100):
        x[tied] = base + rng.uniform(-half_width, half_width, size=base.size)
        if not has_ties(x):
            return x
    raise RuntimeError("could not break ties by jittering")


def pseudo_observations(sample):
    """Ranks scaled by ``1/(n+1)``, strictly inside (0, 1).

    Raises
    ------
    ValueError
        If the sample has fewer than two values or contains ties; call
        :func:`jitter` first.
    """
    x = _as_sample(sample)
    if has_ties(x):
        raise ValueError("sample has ties; jitter it before ranking")
    n = x.size
    ranks = np.empty(n, dtype=float)
    ranks[np.argsort(x, kind="stable")] = np.arange(1, n + 1)
    return ranks / (n + 1)


def empirical_cdf(sample, x):
    """``(1/(n+1)) * #{X_i <= x}``; right-continuous, at most ``n/(n+1)``."""
    s = np.sort(np.asarray(sample, dtype=float))
    counts = np.searchsorted(s, x, side="right")
    return counts / (s.size + 1.0)


def sorted_quantile(sorted_sample, p):
    """Order statistic ``ceil(p*n)`` of an already sorted sample, no checks.

    ``p`` is clipped so that values at or beyond the ends map to the
    extreme order statistics.
    """
    n = sorted_sample.size
    k = np.clip(np.ceil(np.asarray(p) * n), 1, n).astype(np.intp)
    return sorted_sample[k - 1]


def empirical_quantile(sample, p):
    """Left-continuous inverse of the empirical CDF: the ``ceil(p*n)``-th
    order statistic.

    >>> empirical_quantile([10, 20, 30, 40], 0.51)
    30.0
    """
    x = _as_sample(sample)
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr <= 0) | (p_arr >= 1)) or not np.all(np.isfinite(p_arr)):
        raise ValueError("probabilities must lie strictly inside (0, 1)")
    out = sorted_quantile(np.sort(x), p_arr)
    return float(out) if np.ndim(out) == 0 else out
