"""Acceptance criteria, each at its stated tolerance.

External datasets are opt-in through environment variables:

``QCCD_SIM_ROOT``        directory holding ``SIM``, ``SIM-ln`` and ``SIM-G`` pair sets
``QCCD_TUEBINGEN_DIR``   Tuebingen cause-effect pairs with ``pairmeta.txt``
``QCCD_OCTET_DIR``       ``data.csv``, ``skeleton.txt`` and ``truth.txt`` (``A -> B`` lines)
"""

import itertools
import os
import time
from pathlib import Path

import numpy as np
import pytest

from qccd import copula
from qccd.benchgen import Scenario, gen_benchmark
from qccd.dataio import load_tuebingen
from qccd.decision import Direction, decide
from qccd.evaluation import accuracy, roc_auc, run_benchmark, score_pairs
from qccd.graph import Skeleton, is_acyclic, orient, orient_scored, parse_skeleton
from qccd.marginals import pseudo_observations
from qccd.scoring import aggregate_score, fit_pair, gauss_legendre, normalized_score, score_arrays

pytestmark = pytest.mark.slow


# 1 -------------------------------------------------------------------------

TABLE1_TAUS = [0.05, 0.25, 0.5, 0.75, 0.95]
TABLE1_TARGET = [0.757, 0.730, 0.738, 0.731, 0.758]


def test_c01_tanh_per_level_scores(report):
    per_level = []
    for rep in range(300):
        rng = np.random.default_rng(rep)
        x = rng.standard_normal(500)
        y = np.tanh(x) * rng.uniform(size=500)
        a, b = score_arrays(fit_pair(x, y, seed=rep), TABLE1_TAUS)
        per_level.append(normalized_score(a, b))
    means = np.mean(per_level, axis=0)
    errs = np.abs(means - TABLE1_TARGET)
    ok = bool(np.all(errs <= 0.03))
    report("C1 per-level scores, 300 reps", ok,
           " ".join(f"tau={t}:{m:.3f}" for t, m in zip(TABLE1_TAUS, means)) + f" max_err={errs.max():.3f}")
    assert ok


# 2 -------------------------------------------------------------------------

STRONG = ["AN", "AN-s", "HN", "HN-s", "MN-U"]


@pytest.mark.parametrize("family", STRONG + ["MN-G"])
def test_c02_synthetic_families(family, report):
    pairs = gen_benchmark(Scenario(family, n=1000, n_pairs=100, seed=2024))
    res = run_benchmark(pairs, m=3, seed=0, ranking_mode="raw", workers=1)
    acc_min, auc_min = (0.95, 0.95) if family in STRONG else (0.70, 0.80)
    ok = res.accuracy >= acc_min and res.roc_auc >= auc_min and res.pr_auc >= auc_min
    report(f"C2 {family}", ok,
           f"accuracy={res.accuracy:.3f} roc={res.roc_auc:.3f} pr={res.pr_auc:.3f} "
           f"time={res.wall_time:.1f}s")
    assert ok and not res.failures


SIM_TARGETS = {"SIM": 0.49, "SIM-ln": 0.77, "SIM-G": 0.76}


@pytest.mark.parametrize("name", list(SIM_TARGETS))
def test_c02_external_sim(name, report):
    root = os.environ.get("QCCD_SIM_ROOT")
    if not root:
        report.skip(f"C2 {name}", "QCCD_SIM_ROOT not set")
    pairs, _ = load_tuebingen(Path(root) / name)
    res = run_benchmark(pairs, workers=int(os.environ.get("QCCD_WORKERS", "1")))
    ok = abs(res.accuracy - SIM_TARGETS[name]) <= 0.10
    report(f"C2 {name}", ok, f"accuracy={res.accuracy:.3f} target={SIM_TARGETS[name]}")
    assert ok


# 3 -------------------------------------------------------------------------

def test_c03_tuebingen(report):
    directory = os.environ.get("QCCD_TUEBINGEN_DIR")
    if not directory:
        report.skip("C3 Tuebingen", "QCCD_TUEBINGEN_DIR not set")
    pairs, skipped = load_tuebingen(directory)
    res = run_benchmark(pairs, workers=int(os.environ.get("QCCD_WORKERS", "1")))
    ok = (res.accuracy >= 0.60 and res.roc_auc >= 0.62 and res.pr_auc >= 0.74
          and res.wall_time <= 4 * 13 * 60)
    report("C3 Tuebingen", ok,
           f"pairs={len(pairs)} skipped={len(skipped)} accuracy={res.accuracy:.3f} "
           f"roc={res.roc_auc:.3f} pr={res.pr_auc:.3f} time={res.wall_time:.0f}s")
    assert ok


# 4 -------------------------------------------------------------------------

def test_c04_antisymmetry(report):
    worst = 0.0
    families = ["AN", "AN-s", "HN", "HN-s", "MN-U", "MN-G"]
    for i in range(50):
        fam = families[i % len(families)]
        p = gen_benchmark(Scenario(fam, n=300, n_pairs=1, seed=100 + i))[0]
        x, y = p.x, p.y
        if i % 5 == 0:
            x = np.round(x, 1)  # exercise the tie-breaking path too
        worst = max(worst, abs(aggregate_score(x, y, seed=i) + aggregate_score(y, x, seed=i) - 1.0))
    ok = worst <= 1e-12
    report("C4 antisymmetry, 50 pairs", ok, f"max_dev={worst:.2e}")
    assert ok


# 5 -------------------------------------------------------------------------

def test_c05_copula_suite(report):
    rng = np.random.default_rng(2025)
    x, y = rng.uniform(size=(2, 5000))
    ind = copula.fit(pseudo_observations(x), pseudo_observations(y))
    lat = np.arange(1, 10) / 10
    U, T = np.meshgrid(lat, lat, indexing="ij")
    recovery = np.abs(ind.hfunc1(U, T) - T).max()

    xd = rng.standard_normal(1000)
    yd = np.tanh(xd) * rng.uniform(size=1000)
    dep = copula.fit(pseudo_observations(xd), pseudo_observations(yd))
    g = (np.arange(1, 21) - 0.5) / 20
    U2, T2 = np.meshgrid(g, g, indexing="ij")
    roundtrip = max(np.abs(m.hfunc1(U2, m.hinv1(U2, T2)) - T2).max() for m in (ind, dep))
    roundtrip = max(roundtrip, max(np.abs(m.hfunc2(m.hinv2(U2, T2), U2) - T2).max() for m in (ind, dep)))

    mass = [m.cdf(1.0, 1.0) for m in (ind, dep)]
    g50 = np.linspace(0.01, 0.99, 50)
    monotone = all(np.all(np.diff(m.hfunc1(g50[:, None], g50[None, :]), axis=1) >= 0)
                   and np.all(np.diff(m.hfunc2(g50[None, :], g50[:, None]), axis=1) >= 0)
                   for m in (ind, dep))
    ok = recovery <= 0.05 and roundtrip <= 1e-6 and mass == [1.0, 1.0] and monotone
    report("C5 copula suite", ok,
           f"recovery={recovery:.4f} roundtrip={roundtrip:.1e} mass={mass} monotone={monotone}")
    assert ok


# 6 -------------------------------------------------------------------------

def test_c06_quadrature(report):
    worst = 0.0
    for m in range(1, 11):
        rule = gauss_legendre(m)
        for k in range(2 * m):
            worst = max(worst, abs(rule.integrate(lambda t: t ** k) - 1.0 / (k + 1)))
    ok = worst <= 1e-12
    report("C6 Gauss-Legendre exactness m=1..10", ok, f"max_err={worst:.1e}")
    assert ok


# 7 -------------------------------------------------------------------------

def test_c07_null_behaviour(report):
    rng = np.random.default_rng(77)
    devs = [abs(aggregate_score(*rng.uniform(size=(2, 1000)), seed=i) - 0.5) for i in range(100)]
    ok = np.mean(devs) <= 0.05
    report("C7 independent pairs", ok, f"mean|s-0.5|={np.mean(devs):.4f} max={np.max(devs):.4f}")
    assert ok


# 8 -------------------------------------------------------------------------

def _best_time(pairs, repeats=3):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        score_pairs(pairs, workers=1)
        best = min(best, time.perf_counter() - start)
    return best


def test_c08_linear_scaling(report):
    small = gen_benchmark(Scenario("AN", n=1000, n_pairs=20, seed=8))
    large = gen_benchmark(Scenario("AN", n=2000, n_pairs=20, seed=8))
    score_pairs(small[:2], workers=1)  # warm caches and lazy imports
    t1, t2 = _best_time(small), _best_time(large)
    ratio = t2 / t1
    ok = 1.5 <= ratio <= 3.0
    report("C8 time ratio n=2000/n=1000", ok, f"t1000={t1:.2f}s t2000={t2:.2f}s ratio={ratio:.2f}")
    assert ok


# 9 -------------------------------------------------------------------------

def _brute_roc(scores, labels):
    pos = [s for s, lab in zip(scores, labels) if lab]
    neg = [s for s, lab in zip(scores, labels) if not lab]
    hits = sum(1.0 if p > q else 0.5 if p == q else 0.0 for p in pos for q in neg)
    return hits / (len(pos) * len(neg))


def test_c09_metrics_oracle(report):
    rng = np.random.default_rng(9)
    mismatches = 0
    checked = 0
    for n in range(2, 7):
        for scores in (rng.random(n), np.round(rng.random(n), 1), np.full(n, 0.3)):
            for labels in itertools.product([0, 1], repeat=n):
                if 0 < sum(labels) < n:
                    checked += 1
                    mismatches += roc_auc(scores, labels) != _brute_roc(scores, labels)
    X, Y = Direction.X_TO_Y, Direction.Y_TO_X
    hand = [accuracy([X, Y], [X, X], [2, 1]) == 2 / 3, accuracy([X, Y], [X, Y]) == 1.0,
            accuracy([Direction.UNDECIDED], [X]) == 0.5]
    ok = mismatches == 0 and all(hand)
    report("C9 metrics oracle", ok, f"labelings={checked} mismatches={mismatches} hand={hand}")
    assert ok


# 10 ------------------------------------------------------------------------

def test_c10_graph_orientation(report):
    acyclic_all = True
    for confs in itertools.permutations([0.95, 0.8, 0.65, 0.3, 0.1], 3):
        sk = Skeleton(["A", "B", "C"], [("A", "B"), ("B", "C"), ("C", "A")])
        # scores above 0.5 follow the cycle, below 0.5 follow its reverse
        g = orient_scored(sk, dict(zip(sk.undirected, confs)))
        idx = {"A": 0, "B": 1, "C": 2}
        acyclic_all &= is_acyclic([(idx[a], idx[b]) for a, b in g.edge_list()], 3)

    rng = np.random.default_rng(10)
    x = rng.standard_normal(500)
    y = np.tanh(x) * rng.uniform(size=500)
    g = orient(parse_skeleton("X -- Y"), {"X": x, "Y": y})
    single = decide(aggregate_score(x, y)).direction
    matches = g.edge_list() == ([("X", "Y")] if single is Direction.X_TO_Y else [("Y", "X")])
    ok = acyclic_all and matches
    report("C10 graph orientation", ok, f"triangle_acyclic={acyclic_all} single_edge_match={matches}")
    assert ok


def test_c10_octet(report):
    directory = os.environ.get("QCCD_OCTET_DIR")
    if not directory:
        report.skip("C10 octet", "QCCD_OCTET_DIR not set")
    from qccd.graph import load_data_csv
    d = Path(directory)
    g = orient(parse_skeleton((d / "skeleton.txt").read_text()), load_data_csv(d / "data.csv"))
    truth = set(parse_skeleton((d / "truth.txt").read_text()).oriented)
    correct = sum(e in truth for e in g.edge_list())
    ok = correct == len(truth) == 7
    report("C10 octet", ok, f"correct={correct}/{len(truth)}")
    assert ok
