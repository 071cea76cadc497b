"""Command-line interface.

Exit codes: 0 on success (or a decided direction), 1 on any error, 3 when
``discover`` cannot decide.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from . import benchgen, dataio, graph
from .decision import Direction, decide
from .evaluation import RANKING_MODES, default_workers, run_benchmark
from .scoring import DEFAULT_M, aggregate_score

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDECIDED = 3

log = logging.getLogger("qccd")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_discover(args):
    pair = dataio.load_pair(args.input)
    score = aggregate_score(pair.x, pair.y, m=args.m, seed=args.seed)
    d = decide(score)
    if args.format == "json":
        text = json.dumps({"input": str(args.input), "direction": d.direction.value,
                           "score": score, "confidence": d.confidence, "m": args.m}, indent=2) + "\n"
    else:
        text = f"{d.direction.value}\tscore={score:.6f}\tconfidence={d.confidence:.6f}\n"
    _emit(text, args.out)
    return EXIT_UNDECIDED if d.direction is Direction.UNDECIDED else EXIT_OK


def cmd_simulate(args):
    if not args.out:
        raise ValueError("--out DIR is required for simulate")
    scenario = benchgen.Scenario(args.scenario, n=args.n, n_pairs=args.pairs, seed=args.seed)
    pairs = benchgen.gen_benchmark(scenario)
    dataio.write_benchmark(pairs, args.out)
    print(f"wrote {len(pairs)} {args.scenario} pairs of size {args.n} to {args.out}")
    return EXIT_OK


def _report(result, args):
    s = result.summary()
    fmt = lambda v: "nan" if v is None else f"{v:.4f}"  # noqa: E731
    lines = [f"pairs={s['n_pairs']} failures={s['failures']} ranking={s['ranking_mode']}",
             f"accuracy={fmt(s['accuracy'])} roc_auc={fmt(s['roc_auc'])} pr_auc={fmt(s['pr_auc'])}",
             f"wall_time={s['wall_time']:.2f}s"]
    if args.out and args.format in ("csv", "json"):
        dataio.write_results(result, args.out, args.format)
    elif args.out:
        Path(args.out).write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return EXIT_OK


def _run_dir(args, limit=None):
    if not args.dir or not Path(args.dir).is_dir():
        raise FileNotFoundError(f"pair directory not found: {args.dir}")
    pairs, skipped = dataio.load_tuebingen(args.dir, args.meta, limit=limit)
    if skipped:
        print(f"skipped {len(skipped)} multivariate pairs")
    if not pairs:
        raise ValueError(f"no usable pairs in {args.dir}")
    workers = args.workers or default_workers()
    result = run_benchmark(pairs, m=args.m, seed=args.seed, ranking_mode=args.ranking_mode,
                           workers=workers)
    return _report(result, args)


def cmd_benchmark(args):
    return _run_dir(args)


def cmd_tuebingen(args):
    if args.meta is None:
        raise ValueError("--meta is required for tuebingen")
    return _run_dir(args, limit=args.pairs)


def cmd_orient(args):
    if not args.data:
        raise ValueError("--data CSV is required for orient")
    skeleton = graph.parse_skeleton(Path(args.input).read_text())
    data = graph.load_data_csv(args.data)
    result = graph.orient(skeleton, data, m=args.m, seed=args.seed)
    if args.format == "json":
        text = json.dumps({
            "edges": [{"source": e.source, "target": e.target, "score": e.score,
                       "confidence": e.confidence, "status": e.status} for e in result.edges],
            "dropped": [list(d) for d in result.dropped],
            "v_structures_created": [list(v) for v in result.v_structures_created],
            "v_structures_destroyed": [list(v) for v in result.v_structures_destroyed],
        }, indent=2) + "\n"
    else:
        rows = ["source,target,score,confidence,status"]
        for e in result.edges:
            score = "" if e.score is None else dataio.FLOAT_FMT % e.score
            conf = "" if e.confidence is None else dataio.FLOAT_FMT % e.confidence
            rows.append(f"{e.source},{e.target},{score},{conf},{e.status}")
        text = "\n".join(rows) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="qccd", description="Quantile copula causal discovery.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--m", type=_positive_int, default=DEFAULT_M,
                       help="number of Gauss-Legendre quantile levels (default 3)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output path (stdout if omitted)")

    p = sub.add_parser("discover", help="decide the direction for one pair file")
    p.add_argument("--input", required=True)
    common(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("simulate", help="write a synthetic benchmark directory")
    p.add_argument("--scenario", choices=benchgen.FAMILIES, required=True)
    p.add_argument("--pairs", type=int, default=100)
    p.add_argument("--n", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    for name, func, help_ in (("benchmark", cmd_benchmark, "score a directory of labeled pairs"),
                              ("tuebingen", cmd_tuebingen, "score the Tuebingen cause-effect pairs")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--dir", required=True)
        p.add_argument("--meta", help="meta file (default DIR/pairmeta.txt)")
        common(p)
        p.add_argument("--workers", type=_positive_int, default=None,
                       help="worker processes (default $QCCD_WORKERS or all cores)")
        p.add_argument("--ranking-mode", choices=RANKING_MODES, default="raw")
        p.add_argument("--format", choices=("csv", "json", "text"), default="text")
        if name == "tuebingen":
            p.add_argument("--pairs", type=_positive_int, default=None,
                           help="only score the first K univariate pairs")
        p.set_defaults(func=func)

    p = sub.add_parser("orient", help="orient the undirected edges of a skeleton")
    p.add_argument("--input", required=True, help="edge list: 'A -- B' or 'A -> B' per line")
    p.add_argument("--data", help="CSV data matrix with a header row")
    common(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_orient)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
