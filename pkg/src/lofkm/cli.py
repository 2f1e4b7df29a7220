"""Command-line entry point.

    lofkm run --data data/yeast.csv --out yeast.tsv      # K-Means vs LOFKM report
    lofkm weights --data data/yeast.csv --t 3 --out w.csv
    lofkm cluster --data data/yeast.csv --method lofkm --t 3 --seed 1

``run`` is the default subcommand, so ``lofkm --data ...`` works too.
"""

import argparse
import csv
import json
import logging
import os
import sys

from .bench import ExperimentConfig, emit_report, run_experiment
from .cluster import LloydParams, run_kmeans, run_lofkm
from .data import NORMALIZE_MODES, DataError, load_csv, normalize
from .lcd import lcd_dataset
from .neighbors import local_outlier_factor, weights_from_lof

log = logging.getLogger("lofkm")
SUBCOMMANDS = ("run", "weights", "cluster")


def _label_col(text):
    if text is None or text.lower() == "none":
        return None
    try:
        return int(text)
    except ValueError:
        return text


def _int_list(text):
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common(p):
    p.add_argument("--data", required=True, metavar="PATH", help="CSV file")
    p.add_argument("--label-col", default="-1", metavar="NAME|INDEX",
                   help="label column by header name or index (default: last; 'none' for unlabeled)")
    p.add_argument("--normalize", choices=NORMALIZE_MODES, default="none")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")


def build_parser():
    ap = argparse.ArgumentParser(prog="lofkm", description="LOF-weighted K-Means benchmark")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command")

    run = sub.add_parser("run", help="KM vs LOFKM over paired random restarts")
    _common(run)
    run.add_argument("--k", type=int, help="cluster count (default: number of distinct labels)")
    run.add_argument("--t", type=_int_list, default=(3, 4, 5), metavar="LIST",
                     help="LCD/LOF neighborhood sizes (default 3,4,5)")
    run.add_argument("--restarts", type=int, default=100)
    run.add_argument("--seed", type=int, default=42)
    run.add_argument("--method", choices=("km", "lofkm", "both"), default="both")
    run.add_argument("--max-iters", type=int, default=300)
    run.add_argument("--workers", type=int, default=1, help="processes for restarts")
    run.add_argument("--format", choices=("tsv", "json"), default="tsv")
    run.add_argument("--figure", metavar="PATH",
                     help="figure path (default: next to --out with a .png suffix)")
    run.add_argument("--no-figure", action="store_true", help="skip the figure")

    w = sub.add_parser("weights", help="export per-object LOF scores and weights as CSV")
    _common(w)
    w.add_argument("--t", type=int, default=3, help="LOF neighborhood size")

    c = sub.add_parser("cluster", help="one clustering plus its LCD report, as JSON")
    _common(c)
    c.add_argument("--k", type=int)
    c.add_argument("--t", type=int, default=3)
    c.add_argument("--method", choices=("km", "lofkm"), default="lofkm")
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--max-iters", type=int, default=300)
    return ap


def _write(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_run(args):
    methods = ("km", "lofkm") if args.method == "both" else (args.method,)
    config = ExperimentConfig(
        data_path=args.data, label_column=_label_col(args.label_col), normalize=args.normalize,
        k=args.k, t_values=args.t, restarts=args.restarts, seed=args.seed, methods=methods,
        max_iters=args.max_iters, workers=args.workers,
    )
    report = run_experiment(config)
    _write(emit_report(report, args.format), args.out)
    figure = args.figure
    if figure is None and args.out:
        figure = os.path.splitext(args.out)[0] + ".png"
    if figure and not args.no_figure and report.methods:
        from .plotting import plot_report

        plot_report(report, figure)
        log.info("wrote %s", figure)


def _load(args):
    ds = load_csv(args.data, label_column=_label_col(args.label_col))
    return normalize(ds, args.normalize)


def _cmd_weights(args):
    ds = _load(args)
    res = local_outlier_factor(ds, args.t)
    w = weights_from_lof(res.lof)
    rows = [["index", "lrd", "lof", "weight"]]
    rows += [[i, repr(float(res.lrd[i])), repr(float(res.lof[i])), repr(float(w[i]))]
             for i in range(ds.n)]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)
    else:
        csv.writer(sys.stdout, lineterminator="\n").writerows(rows)


def _cmd_cluster(args):
    ds = _load(args)
    k = args.k if args.k is not None else ds.n_classes
    params = LloydParams(k, max_iters=args.max_iters, seed=args.seed)
    cl = run_kmeans(ds, params) if args.method == "km" else run_lofkm(ds, args.t, params)
    out = {"method": args.method, "clustering": cl.to_dict(),
           "lcd": lcd_dataset(ds, cl, args.t).to_dict()}
    _write(json.dumps(out, indent=2) + "\n", args.out)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] not in SUBCOMMANDS and argv[0] not in ("-h", "--help", "-v", "--verbose"):
        argv.insert(0, "run")
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command is None:
        build_parser().print_help()
        return 2
    handler = {"run": _cmd_run, "weights": _cmd_weights, "cluster": _cmd_cluster}[args.command]
    try:
        handler(args)
    except BrokenPipeError:
        return 0
    except (DataError, ValueError, OSError) as exc:
        print(f"lofkm: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
