"""Command-line interface: ``swimnet <subcommand> [flags]``.

Exit codes: 0 success, 1 runtime failure, 2 usage error. Logs and errors go
to stderr as single lines; results go to files or stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time

import numpy as np

from . import benchmark, dataio
from .network import forward, predict_labels
from .sampler import FitConfig, fit

log = logging.getLogger("swimnet")


def _int_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list is empty")
    return values


def _positive_list(text: str) -> list[int]:
    values = _int_list(text)
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"all values must be >= 1, got {text!r}")
    return values


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _default_seed() -> int:
    env = os.environ.get("SWIMNET_SEED")
    try:
        return int(env) if env else 0
    except ValueError:
        return 0


def _default_jobs() -> int:
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="swimnet", description="Sampled neural networks without gradient training.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    seed_help = "RNG seed (falls back to $SWIMNET_SEED)"

    def add_data_flags(p, required=True):
        p.add_argument("--data", required=required, help="input CSV file")
        p.add_argument("--target-col", default="-1", help="target column name or index")
        p.add_argument("--no-header", action="store_true", help="the CSV has no header row")
        p.add_argument("--impute-median", action="store_true", help="fill missing feature cells with the column median")

    def add_model_flags(p, layers_default="500"):
        p.add_argument("--activation", default="tanh", choices=["tanh", "relu", "sine"], help="hidden activation")
        p.add_argument("--epsilon", type=_positive_float, default=1e-6, help="distance floor in the pair density for layers > 1")
        p.add_argument("--pool-mult", type=_positive_int, default=1, help="candidate pool multiplier")
        p.add_argument("--ridge", type=_nonneg_float, default=1e-10, help="ridge penalty of the output solve")
        p.add_argument("--seed", type=int, default=_default_seed(), help=seed_help)

    p = sub.add_parser("fit", help="fit a sampled network to a CSV file", formatter_class=fmt)
    add_data_flags(p)
    p.add_argument("--label-mode", default="categorical", choices=["categorical", "numeric"], help="how to read the target column")
    p.add_argument("--layers", type=_positive_list, default="500", help="comma-separated hidden widths")
    add_model_flags(p)
    p.add_argument("--out", default="model.swim", help="model file to write")

    p = sub.add_parser("predict", help="evaluate a saved model on a CSV file", formatter_class=fmt)
    p.add_argument("--model", required=True, help="model file")
    p.add_argument("--data", required=True, help="feature CSV file")
    p.add_argument("--no-header", action="store_true", help="the CSV has no header row")
    p.add_argument("--out", default="predictions.csv", help="prediction CSV to write ('-' for stdout)")

    p = sub.add_parser("inspect", help="summarise a saved model", formatter_class=fmt)
    p.add_argument("--model", required=True, help="model file")

    p = sub.add_parser("bench-barron", help="Barron function study: sampling vs random features", formatter_class=fmt)
    p.add_argument("--dim", type=_positive_int, required=True, help="input dimension")
    p.add_argument("--widths", type=_positive_list, default="64,256,1024", help="comma-separated hidden widths")
    p.add_argument("--depths", type=_positive_list, default="1", help="comma-separated depths")
    p.add_argument("--seeds", type=_int_list, default="0", help="comma-separated seeds")
    p.add_argument("--points", type=_positive_int, default=10_000, help="train and test points each")
    p.add_argument("--activation", default="sine", choices=["tanh", "relu", "sine"], help="activation of the sampled networks")
    p.add_argument("--ridge", type=_nonneg_float, default=1e-10, help="ridge penalty of the output solve")
    p.add_argument("--jobs", type=_positive_int, default=_default_jobs(), help="worker threads")
    p.add_argument("--out", default="results.csv", help="results CSV to write")

    p = sub.add_parser("bench-classify", help="stratified k-fold accuracy over depths", formatter_class=fmt)
    add_data_flags(p)
    p.add_argument("--folds", type=_positive_int, default=10, help="number of folds (>= 2)")
    p.add_argument("--depths", type=_positive_list, default="1,2,3,4,5", help="comma-separated depths")
    p.add_argument("--width", type=_positive_int, default=500, help="neurons per hidden layer")
    p.add_argument("--max-rows", type=_positive_int, default=5000, help="seeded subsample cap on dataset rows")
    add_model_flags(p)
    p.add_argument("--jobs", type=_positive_int, default=_default_jobs(), help="worker threads")
    p.add_argument("--out", default="results.csv", help="results CSV to write")

    p = sub.add_parser("bench-timing", help="fit time versus training-set size", formatter_class=fmt)
    p.add_argument("--sizes", type=_positive_list, default="5000,10000,20000,40000", help="comma-separated sample sizes")
    p.add_argument("--layers", type=_positive_list, default="500", help="comma-separated hidden widths")
    p.add_argument("--dim", type=_positive_int, default=5, help="input dimension of the synthetic data")
    p.add_argument("--repeats", type=_positive_int, default=3, help="timed repeats per size (>= 3)")
    p.add_argument("--activation", default="tanh", choices=["tanh", "relu", "sine"], help="hidden activation")
    p.add_argument("--seed", type=int, default=_default_seed(), help=seed_help)
    p.add_argument("--jobs", type=_positive_int, default=1, help="ignored; timing always runs on one worker")
    p.add_argument("--out", default="timing.csv", help="results CSV to write")
    return parser


def _fit_config(args, layers) -> FitConfig:
    return FitConfig(layers=layers, activation=args.activation, epsilon=args.epsilon,
                     pool_multiplier=args.pool_mult, ridge_lambda=args.ridge, seed=args.seed)


def _load(args, label_mode):
    schema = dataio.CsvSchema(target_columns=[args.target_col], has_header=not args.no_header, label_mode=label_mode)
    return dataio.load_csv(args.data, schema, impute_median=args.impute_median)


def cmd_fit(args) -> int:
    ds = _load(args, args.label_mode)
    cfg = _fit_config(args, args.layers)
    t0 = time.perf_counter()
    net = fit(ds.X, ds.Y, cfg)
    elapsed = time.perf_counter() - t0
    net.labels = ds.labels
    net.config.update(feature_names=ds.feature_names, target_names=ds.target_names)
    dataio.save_model(net, args.out)
    M, D = ds.X.shape
    print(f"M={M} D={D} layers={','.join(map(str, args.layers))} outputs={ds.Y.shape[1]} "
          f"residual={net.train_residual_norm:.6g} seconds={elapsed:.3f}")
    return 0


def cmd_predict(args) -> int:
    net = dataio.load_model(args.model)
    X = dataio.load_features(args.data, has_header=not args.no_header,
                             columns=net.config.get("feature_names"))
    if X.shape[1] != net.input_dim:
        raise ValueError(f"feature width mismatch: model expects D={net.input_dim}, file has {X.shape[1]}")
    if net.labels is not None:
        header, rows = ["label"], [[lab] for lab in predict_labels(net, X)]
    else:
        out = forward(net, X)
        names = net.config.get("target_names") or [f"y{k}" for k in range(out.shape[1])]
        header, rows = list(names), [[repr(float(v)) for v in r] for r in out]
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="", encoding="utf-8")
    try:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_inspect(args) -> int:
    net = dataio.load_model(args.model)
    summary = {
        "input_dim": net.input_dim,
        "hidden_widths": net.widths,
        "output_dim": net.output_dim,
        "activation": {"kind": net.activation.kind, "s1": net.activation.s1, "s2": net.activation.s2},
        "seed": net.seed,
        "labels": net.labels,
        "train_residual_norm": net.train_residual_norm,
        "config": net.config,
    }
    print(json.dumps(summary, indent=2))
    return 0


def cmd_bench_barron(args) -> int:
    spec = benchmark.BarronSpec(dim=args.dim, train_points=args.points, test_points=args.points,
                                widths=args.widths, depths=args.depths, activation=args.activation,
                                seeds=args.seeds, ridge_lambda=args.ridge)
    rows = benchmark.run_barron(spec, jobs=args.jobs)
    dataio.write_results(rows, args.out)
    failed = sum(r.failed for r in rows)
    log.info("wrote %d rows to %s (%d failed)", len(rows), args.out, failed)
    return 1 if failed else 0


def cmd_bench_classify(args) -> int:
    ds = _load(args, "categorical")
    X, labels = ds.X, np.asarray(ds.raw_labels)
    if len(X) > args.max_rows:
        keep = np.sort(np.random.default_rng(args.seed).choice(len(X), args.max_rows, replace=False))
        X, labels = X[keep], labels[keep]
    cfg = _fit_config(args, [args.width])
    report = benchmark.run_classification(X, labels, folds=args.folds, depths=args.depths,
                                          width=args.width, cfg=cfg, jobs=args.jobs)
    dataio.write_results(report.rows, args.out)
    for depth, acc in report.mean_accuracy.items():
        print(f"depth={depth} mean_accuracy={acc:.6f}")
    print(f"best_depth={report.best_depth}")
    return 0


def cmd_bench_timing(args) -> int:
    cfg = FitConfig(layers=args.layers, activation=args.activation, seed=args.seed)
    report = benchmark.timing_scaling(args.layers, args.sizes, cfg, repeats=args.repeats, dim=args.dim)
    rows = [benchmark.ExperimentRow("swim", len(args.layers), max(args.layers), args.seed,
                                    "n_samples", m, t) for m, t in zip(report.sizes, report.medians)]
    dataio.write_results(rows, args.out)
    for m, t in zip(report.sizes, report.medians):
        print(f"M={m} median_seconds={t:.4f}")
    print(f"slope={report.slope:.4f} ratios={','.join(f'{r:.3f}' for r in report.ratios)}")
    return 0


COMMANDS = {
    "fit": cmd_fit,
    "predict": cmd_predict,
    "inspect": cmd_inspect,
    "bench-barron": cmd_bench_barron,
    "bench-classify": cmd_bench_classify,
    "bench-timing": cmd_bench_timing,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except Exception as exc:  # noqa: BLE001 - top-level boundary
        msg = " ".join(str(exc).split())
        print(f"swimnet: error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
