"""Pair files, the Tuebingen ``pairmeta`` index and benchmark result files.

Pair file: whitespace-separated numeric columns, one observation per row,
no header.  Meta file: one row per pair with six fields,
``<id> <cause_start> <cause_end> <effect_start> <effect_end> <weight>``
(1-based inclusive column ranges).  An id of digits such as ``0001`` refers
to ``pair0001.txt``; an id like ``pair0001`` refers to ``pair0001.txt`` too.
"""

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .decision import Direction
from .evaluation import PairRecord
from .pairs import Pair

logger = logging.getLogger(__name__)

FLOAT_FMT = "%.17g"
META_NAME = "pairmeta.txt"
CSV_FIELDS = ("id", "score", "confidence", "decision", "truth", "weight", "correct")


class DataFormatError(ValueError):
    """A data file does not follow the expected layout."""


def read_table(path):
    """Parse a whitespace-separated numeric table into an (n, k) array."""
    path = Path(path)
    rows = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            tokens = line.split()
            if not tokens:
                continue
            try:
                row = [float(t) for t in tokens]
            except ValueError:
                bad = next(t for t in tokens if not _is_float(t))
                raise DataFormatError(f"{path}: line {lineno}: non-numeric token {bad!r}") from None
            if not all(np.isfinite(row)):
                raise DataFormatError(f"{path}: line {lineno}: non-finite value")
            if rows and len(row) != len(rows[0]):
                raise DataFormatError(
                    f"{path}: line {lineno}: expected {len(rows[0])} columns, found {len(row)}")
            rows.append(row)
    if not rows:
        raise DataFormatError(f"{path}: file is empty")
    return np.array(rows, dtype=float)


def _is_float(token):
    try:
        float(token)
    except ValueError:
        return False
    return True


def load_pair(path):
    """First two columns of a pair file as a :class:`Pair` without truth."""
    data = read_table(path)
    if data.shape[1] < 2:
        raise DataFormatError(f"{path}: need at least 2 columns, found {data.shape[1]}")
    return Pair(data[:, 0], data[:, 1], name=Path(path).stem)


def write_pair(pair, path):
    np.savetxt(path, np.column_stack([pair.x, pair.y]), fmt=FLOAT_FMT, delimiter=" ")


@dataclass(frozen=True)
class MetaRow:
    pair_id: str
    cause: tuple
    effect: tuple
    weight: float

    @property
    def univariate(self):
        return self.cause[0] == self.cause[1] and self.effect[0] == self.effect[1]

    @property
    def filename(self):
        return f"{self.pair_id}.txt" if self.pair_id.startswith("pair") else f"pair{self.pair_id}.txt"


def read_meta(path):
    path = Path(path)
    rows = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields or fields[0].startswith("#"):
                continue
            if len(fields) < 6:
                raise DataFormatError(f"{path}: line {lineno}: expected 6 fields, found {len(fields)}")
            if len(fields) > 6:
                logger.warning("%s: line %d: ignoring %d extra fields", path, lineno, len(fields) - 6)
            try:
                cs, ce, es, ee = (int(f) for f in fields[1:5])
                weight = float(fields[5])
            except ValueError:
                raise DataFormatError(f"{path}: line {lineno}: malformed meta row") from None
            if min(cs, ce, es, ee) < 1 or cs > ce or es > ee or not weight > 0:
                raise DataFormatError(f"{path}: line {lineno}: invalid column ranges or weight")
            rows.append(MetaRow(fields[0], (cs, ce), (es, ee), weight))
    return rows


def load_tuebingen(directory, meta_path=None, limit=None):
    """Load the univariate pairs listed in a meta file.

    Columns keep their file order; ``truth`` says whether the first kept
    column causes the second.  Pairs with a multivariate cause or effect
    are skipped.

    Returns
    -------
    pairs : list of Pair
    skipped : list of str
        Ids of the skipped multivariate pairs.
    """
    directory = Path(directory)
    meta_path = Path(meta_path) if meta_path is not None else directory / META_NAME
    if not meta_path.is_file():
        raise FileNotFoundError(f"meta file not found: {meta_path}")
    pairs, skipped = [], []
    for row in read_meta(meta_path):
        if not row.univariate:
            skipped.append(row.pair_id)
            continue
        if limit is not None and len(pairs) >= limit:
            break
        file = directory / row.filename
        if not file.is_file():
            raise FileNotFoundError(f"pair {row.pair_id}: data file not found: {file}")
        data = read_table(file)
        c, e = row.cause[0], row.effect[0]
        if max(c, e) > data.shape[1]:
            raise DataFormatError(f"pair {row.pair_id}: column range exceeds file width {data.shape[1]}")
        first, second = sorted((c, e))
        truth = Direction.X_TO_Y if c == first else Direction.Y_TO_X
        pairs.append(Pair(data[:, first - 1], data[:, second - 1], truth, row.weight, row.pair_id))
    if skipped:
        logger.info("skipped %d multivariate pairs: %s", len(skipped), " ".join(skipped))
    return pairs, skipped


def write_benchmark(pairs, directory):
    """Write pair files plus a meta file so the set can be reloaded with
    :func:`load_tuebingen`."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines = []
    for i, pair in enumerate(pairs):
        pid = pair.name or f"pair{i + 1:04d}"
        write_pair(pair, directory / f"{pid}.txt")
        cause, effect = (1, 2) if pair.truth is Direction.X_TO_Y else (2, 1)
        lines.append(f"{pid} {cause} {cause} {effect} {effect} {FLOAT_FMT % pair.weight}\n")
    (directory / META_NAME).write_text("".join(lines))


def write_results(result, path, fmt="csv"):
    """Per-pair CSV or JSON summary of a :class:`BenchmarkResult`."""
    path = Path(path)
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_FIELDS)
            for r in result.records:
                writer.writerow([r.pair_id, FLOAT_FMT % r.score, FLOAT_FMT % r.confidence,
                                 r.decision.value, r.truth.value, FLOAT_FMT % r.weight, int(r.correct)])
    elif fmt == "json":
        path.write_text(json.dumps(result.summary(), indent=2, sort_keys=True) + "\n")
    else:
        raise ValueError(f"unknown result format {fmt!r}")


def read_results_csv(path):
    with Path(path).open(newline="") as fh:
        return [PairRecord(row["id"], float(row["score"]), Direction(row["decision"]),
                           Direction(row["truth"]), float(row["weight"]))
                for row in csv.DictReader(fh)]
