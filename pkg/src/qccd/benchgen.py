"""Synthetic cause-effect benchmarks with known direction.

Families
--------
AN, AN-s     Y = f(X) + E,              E ~ N(0, sigma)
HN, HN-s     Y = a f(X) + (1 + b X) E,  a, b ~ U[0.1, 0.9]
MN-U, MN-G   Y = f(X) E,                E ~ U(-1, 1) or N(0, 1)

X ~ N(0, sd=sqrt(2)) and sigma ~ U[1/5, sqrt(2/5)] throughout.  ``f`` is a
Gaussian-process draw on standardized X, except for the ``-s`` families
which use a random sigmoid.  Column order is decided by a fair coin and the
recorded truth refers to the stored order.
"""

from dataclasses import dataclass

import numpy as np

from .decision import Direction
from .pairs import Pair

FAMILIES = ("AN", "AN-s", "HN", "HN-s", "MN-U", "MN-G")
MAX_GP_POINTS = 5000
_JITTERS = (1e-10, 1e-9, 1e-8, 1e-7, 1e-6)


@dataclass(frozen=True)
class Scenario:
    family: str
    n: int = 1000
    n_pairs: int = 100
    seed: int = 0
    length_scale: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 1 or self.n_pairs < 0:
            raise ValueError("n must be positive and n_pairs nonnegative")

    def rng(self, pair_index):
        """Generator for one pair, derived from (seed, pair_index) only."""
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(pair_index,)))


def sample_gp_function(xs, length_scale=1.0, amplitude=1.0, seed=0):
    """One draw of a zero-mean GP with squared-exponential kernel at ``xs``.

    Repeated inputs share one latent value.  The kernel matrix is factorized
    by Cholesky with a diagonal jitter that grows from 1e-10 to 1e-6.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or not np.all(np.isfinite(xs)):
        raise ValueError("xs must be a one-dimensional array of finite values")
    if xs.size > MAX_GP_POINTS:
        raise ValueError(f"at most {MAX_GP_POINTS} points supported, got {xs.size}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if amplitude == 0 or xs.size == 0:
        return np.zeros_like(xs)
    uniq, inverse = np.unique(xs, return_inverse=True)
    diff = uniq[:, None] - uniq[None, :]
    K = amplitude ** 2 * np.exp(-0.5 * (diff / length_scale) ** 2)
    z = rng.standard_normal(uniq.size)
    for eps in _JITTERS:
        try:
            L = np.linalg.cholesky(K + eps * amplitude ** 2 * np.eye(uniq.size))
            break
        except np.linalg.LinAlgError:
            continue
    else:
        raise np.linalg.LinAlgError("GP kernel matrix is not positive definite even with jitter 1e-6")
    return (L @ z)[inverse]


def random_sigmoid(rng):
    """``f(x) = a b (x + c) / (1 + |b (x + c)|)`` with random sign on ``a``."""
    a = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
    b = rng.uniform(0.5, 2.0)
    c = rng.uniform(-2.0, 2.0)

    def f(x):
        t = b * (x + c)
        return a * t / (1.0 + np.abs(t))

    return f, {"a": a, "b": b, "c": c}


def _mechanism(scenario, x, rng):
    if scenario.family.endswith("-s"):
        f, params = random_sigmoid(rng)
        return scenario.amplitude * f(x), params
    xs = (x - x.mean()) / x.std() if x.size > 1 and x.std() > 0 else x - x.mean()
    fx = sample_gp_function(xs, scenario.length_scale, scenario.amplitude, rng)
    return fx, {}


def simulate_cause_effect(scenario, rng):
    """Draw (cause, effect) in causal order; returns x, y and a dict of the
    generating quantities."""
    n = scenario.n
    fam = scenario.family
    x = rng.normal(0.0, np.sqrt(2.0), size=n)
    fx, params = _mechanism(scenario, x, rng)
    if fam.startswith("MN"):
        e = rng.uniform(-1.0, 1.0, size=n) if fam == "MN-U" else rng.standard_normal(n)
        y = fx * e
    else:
        sigma = rng.uniform(0.2, np.sqrt(0.4))
        e = rng.normal(0.0, sigma, size=n)
        params["sigma"] = sigma
        if fam.startswith("AN"):
            y = fx + e
        else:
            a = rng.uniform(0.1, 0.9)
            b = rng.uniform(0.1, 0.9)
            params.update(a=a, b=b)
            y = a * fx + (1.0 + b * x) * e
    info = {"family": fam, "f": fx, "noise": e, "cause": x, "effect": y, **params}
    return x, y, info


def gen_pair(scenario, pair_index):
    rng = scenario.rng(pair_index)
    x, y, info = simulate_cause_effect(scenario, rng)
    swap = rng.random() < 0.5
    info["swapped"] = bool(swap)
    name = f"pair{pair_index + 1:04d}"
    if swap:
        return Pair(y, x, Direction.Y_TO_X, 1.0, name, info)
    return Pair(x, y, Direction.X_TO_Y, 1.0, name, info)


def gen_benchmark(scenario):
    return [gen_pair(scenario, i) for i in range(scenario.n_pairs)]
