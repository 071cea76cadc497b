"""Forced-decision accuracy and ranked-decision ROC/PR areas over labeled pairs."""

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decision import Direction, decide
from .scoring import DEFAULT_M, aggregate_score

logger = logging.getLogger(__name__)

RANKING_MODES = ("raw", "confidence")


def accuracy(decisions, truths, weights=None):
    """Weighted share of correct forced decisions; undecided earns half credit."""
    decisions = [Direction(d) for d in decisions]
    truths = [Direction(t) for t in truths]
    if not decisions:
        raise ValueError("accuracy of an empty result set is undefined")
    if len(decisions) != len(truths):
        raise ValueError("decisions and truths differ in length")
    w = np.ones(len(decisions)) if weights is None else np.asarray(weights, dtype=float)
    credit = np.array([0.5 if d is Direction.UNDECIDED else float(d is t)
                       for d, t in zip(decisions, truths)])
    return float(np.sum(w * credit) / np.sum(w))


def _prepare(scores, labels, weights):
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels).astype(bool)
    w = np.ones(s.size) if weights is None else np.asarray(weights, dtype=float)
    if not (s.shape == y.shape == w.shape) or s.ndim != 1:
        raise ValueError("scores, labels and weights must be 1-D and of equal length")
    return s, y, w


def _tie_groups(s, descending):
    """Sort order and the group id of each sorted item (equal scores share an id)."""
    order = np.argsort(-s if descending else s, kind="stable")
    ss = s[order]
    group = np.concatenate([[0], np.cumsum(ss[1:] != ss[:-1])])
    return order, group


def roc_auc(scores, labels, weights=None):
    """Area under the ROC curve as the (weighted) Mann-Whitney statistic,
    counting tied scores as half."""
    s, y, w = _prepare(scores, labels, weights)
    if y.all() or not y.any():
        raise ValueError("ROC-AUC needs both positive and negative labels")
    order, group = _tie_groups(s, descending=False)
    wp = np.bincount(group, weights=(w * y)[order])
    wn = np.bincount(group, weights=(w * ~y)[order])
    neg_below = np.cumsum(wn) - wn
    return float(np.sum(wp * (neg_below + 0.5 * wn)) / (wp.sum() * wn.sum()))


def pr_auc(scores, labels, weights=None):
    """Area under the step-wise precision-recall curve (average precision).

    Thresholds run over distinct scores from high to low; each recall
    increment is multiplied by the precision at that threshold.
    """
    s, y, w = _prepare(scores, labels, weights)
    if not y.any():
        raise ValueError("PR-AUC needs at least one positive label")
    order, group = _tie_groups(s, descending=True)
    tp = np.cumsum(np.bincount(group, weights=(w * y)[order]))
    fp = np.cumsum(np.bincount(group, weights=(w * ~y)[order]))
    precision = tp / (tp + fp)
    recall = tp / tp[-1]
    return float(np.sum(np.diff(np.concatenate([[0.0], recall])) * precision))


@dataclass
class PairRecord:
    pair_id: str
    score: float
    decision: Direction
    truth: Direction
    weight: float = 1.0

    @property
    def confidence(self):
        return max(self.score, 1.0 - self.score)

    @property
    def correct(self):
        return self.decision is self.truth


@dataclass
class BenchmarkResult:
    records: list
    accuracy: float
    roc_auc: float
    pr_auc: float
    ranking_mode: str = "raw"
    wall_time: float = 0.0
    failures: list = field(default_factory=list)
    by_mode: dict = field(default_factory=dict)

    @property
    def n_pairs(self):
        return len(self.records)

    def summary(self):
        def clean(v):
            return None if v is None or (isinstance(v, float) and np.isnan(v)) else v

        return {
            "accuracy": clean(self.accuracy),
            "roc_auc": clean(self.roc_auc),
            "pr_auc": clean(self.pr_auc),
            "ranking_mode": self.ranking_mode,
            "wall_time": self.wall_time,
            "n_pairs": self.n_pairs,
            "failures": len(self.failures),
            "failed_pairs": [f[0] for f in self.failures],
            "by_mode": {m: {k: clean(v) for k, v in d.items()} for m, d in self.by_mode.items()},
        }


def ranking_inputs(records, mode):
    """Scores and binary labels for ranked-decision curves.

    ``raw``: score ``s`` against the label "first column causes second".
    ``confidence``: ``max(s, 1 - s)`` against the label "decision correct".
    """
    if mode == "raw":
        return ([r.score for r in records], [r.truth is Direction.X_TO_Y for r in records])
    if mode == "confidence":
        return ([r.confidence for r in records], [r.correct for r in records])
    raise ValueError(f"unknown ranking mode {mode!r}; expected one of {RANKING_MODES}")


def _safe(metric, *args):
    try:
        return metric(*args)
    except ValueError as exc:
        logger.info("%s undefined: %s", metric.__name__, exc)
        return float("nan")


def summarize(records, ranking_mode="raw", wall_time=0.0, failures=()):
    if not records:
        raise ValueError("no scored pairs to summarize")
    if ranking_mode not in RANKING_MODES:
        raise ValueError(f"unknown ranking mode {ranking_mode!r}; expected one of {RANKING_MODES}")
    weights = [r.weight for r in records]
    acc = accuracy([r.decision for r in records], [r.truth for r in records], weights)
    by_mode = {}
    for mode in RANKING_MODES:
        s, y = ranking_inputs(records, mode)
        by_mode[mode] = {"roc_auc": _safe(roc_auc, s, y, weights),
                         "pr_auc": _safe(pr_auc, s, y, weights)}
    chosen = by_mode[ranking_mode]
    return BenchmarkResult(list(records), acc, chosen["roc_auc"], chosen["pr_auc"],
                           ranking_mode, wall_time, list(failures), by_mode)


def pair_seed(seed, index):
    """Counter-based per-pair seed: depends only on (seed, index)."""
    return int(np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1)[0])


def _score_job(job):
    x, y, m, seed = job
    try:
        return aggregate_score(x, y, m=m, seed=seed), None
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def default_workers():
    env = os.environ.get("QCCD_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def score_pairs(pairs, m=DEFAULT_M, seed=0, workers=1):
    """Aggregate score of every pair, in input order; failures give ``None``."""
    jobs = [(p.x, p.y, m, pair_seed(seed, i)) for i, p in enumerate(pairs)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_score_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_score_job(j) for j in jobs]


def run_benchmark(pairs, m=DEFAULT_M, seed=0, ranking_mode="raw", workers=1):
    """Score and decide every labeled pair, then compute all metrics.

    Pairs whose scoring raises are excluded from the metrics and listed in
    ``BenchmarkResult.failures``.
    """
    if not pairs:
        raise ValueError("no pairs to benchmark")
    if ranking_mode not in RANKING_MODES:
        raise ValueError(f"unknown ranking mode {ranking_mode!r}")
    start = time.perf_counter()
    outcomes = score_pairs(pairs, m=m, seed=seed, workers=workers)
    records, failures = [], []
    for i, (pair, (score, err)) in enumerate(zip(pairs, outcomes)):
        pid = pair.name or f"pair{i + 1:04d}"
        if err is not None:
            failures.append((pid, err))
            continue
        if pair.truth is None:
            raise ValueError(f"pair {pid} has no ground-truth direction")
        records.append(PairRecord(pid, score, decide(score).direction, pair.truth, pair.weight))
    if failures:
        logger.warning("%d of %d pairs failed and were excluded", len(failures), len(pairs))
    return summarize(records, ranking_mode, time.perf_counter() - start, failures)
