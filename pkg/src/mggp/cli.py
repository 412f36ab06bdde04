"""Command-line front end.

Subcommands: ``fit``, ``predict``, ``bench``, ``baseline``, ``stats``,
``synth`` and ``solar``. Run ``mggp <command> --help`` for options.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import functools
import io
import json
import logging
import math
import os
import sys

import numpy as np

from . import artifacts, baselines, dataio, solar
from .config import GpConfig, load_config
from .engine import multi_run_stats, run
from .errors import MggpError
from .fitting import fit_metrics

log = logging.getLogger("mggp")


def split_rng(seed):
    """Generator for the train/test split, independent of the GP stream."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1,)))


def _reports_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        err = kwargs.pop("err", None) or sys.stderr
        try:
            return func(*args, **kwargs)
        except MggpError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=err)
            return exc.exit_code
        except (OSError, ValueError) as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=err)
            return 2 if isinstance(exc, ValueError) else 1

    return wrapper


def _config(config_path, mode="mggp", seed=None):
    config = load_config(config_path) if config_path else GpConfig()
    if mode == "sggp":
        config = config.sggp()
    if seed is not None:
        config = dataclasses.replace(config, rng_seed=seed)
    return config


def _fmt_metric(x):
    return f"{x:.6f}" if math.isfinite(x) else str(x)


@_reports_errors
def cmd_fit(dataset_path, config_path=None, mode="mggp", out_dir="mggp-out", seed=None, threads=1, out=None):
    """Split, scale, evolve and write run artifacts to ``out_dir``."""
    out = out or sys.stdout
    dataset = dataio.load_csv(dataset_path)
    config = _config(config_path, mode, seed)
    seed = config.rng_seed
    train, test = dataio.split(split_rng(seed), dataset)

    started = artifacts.now()
    trace = run(config, train, test, threads=threads)
    finished = artifacts.now()

    manifest = artifacts.build_manifest(config, dataset, seed, extra={"mode": mode})
    model = artifacts.model_to_dict(trace, manifest, dataset.feature_names)
    os.makedirs(out_dir, exist_ok=True)
    artifacts.write_model(os.path.join(out_dir, "best_model.json"), model)
    with open(os.path.join(out_dir, "trace.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(artifacts.trace_csv(trace))
    with open(os.path.join(out_dir, "pareto.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(artifacts.pareto_csv(trace.population))
    dataio.write_csv(train, os.path.join(out_dir, "train.csv"))
    dataio.write_csv(test, os.path.join(out_dir, "test.csv"))
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(artifacts.run_manifest(manifest, threads, started, finished), fh, indent=2, sort_keys=True)
        fh.write("\n")

    print(f"mode: {mode}  generations: {trace.generations_run}  genes: {len(trace.best.genes)}"
          f"  complexity: {trace.best.complexity}", file=out)
    for label, m in (("train", trace.train_metrics), ("test", trace.test_metrics)):
        if m is None:
            continue
        fit_pct = 100.0 * m.r2 if math.isfinite(m.r2) else m.r2
        print(f"{label}: rmse={_fmt_metric(m.rmse)} r2={_fmt_metric(m.r2)} fit={fit_pct:.2f}%", file=out)
    print(f"artifacts written to {out_dir}", file=out)
    return 0


@_reports_errors
def cmd_predict(model_path, dataset_path, out=None):
    """Print one prediction per row, plus RMSE and R^2 when targets exist."""
    out = out or sys.stdout
    model = artifacts.load_model(model_path)
    dataset = dataio.load_csv(dataset_path)
    yhat = model.predict(dataset.X)
    print("row,prediction", file=out)
    for i, v in enumerate(yhat, start=1):
        print(f"{i},{float(v)!r}", file=out)
    if dataset.has_target:
        if np.isfinite(yhat).all():
            m = fit_metrics(dataset.y, yhat)
            print(f"rmse={float(m.rmse)!r} r2={float(m.r2)!r}", file=out)
        else:
            print("rmse=inf r2=-inf", file=out)
    return 0


def format_bench_table(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["algorithm", "mean", "std", "max", "min"])
    for name, s in rows:
        writer.writerow([name] + [repr(float(v)) for v in (s.mean, s.std, s.max, s.min)])
    return buf.getvalue()


@_reports_errors
def cmd_bench(dataset_path, config_path=None, n_runs=30, seed=0, threads=1, out_path=None, out=None):
    """MGGP and SGGP over ``n_runs`` seeded runs each; best training RMSE statistics."""
    out = out or sys.stdout
    if n_runs < 2:
        raise MggpError("bench needs at least two runs")
    dataset = dataio.load_csv(dataset_path)
    config = _config(config_path)
    train, test = dataio.split(split_rng(seed), dataset)
    rows = []
    for name, cfg in (("MGGP", config), ("SGGP", config.sggp())):
        stats = multi_run_stats(cfg, train, test, n_runs=n_runs, master_seed=seed, threads=threads)
        rows.append((name, stats))
    table = format_bench_table(rows)
    out.write(table)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(table)
    return 0


@_reports_errors
def cmd_baseline(dataset_path, out_path=None, out=None):
    out = out or sys.stdout
    dataset = dataio.load_csv(dataset_path)
    text = baselines.format_baseline_report(baselines.baseline_report(dataset))
    out.write(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


@_reports_errors
def cmd_stats(dataset_path, out=None):
    out = out or sys.stdout
    out.write(dataio.format_stats_table(dataio.summary_stats(dataio.load_csv(dataset_path))))
    return 0


@_reports_errors
def cmd_synth(n=192, noise=0.01, seed=0, out_path="synthetic.csv", out=None):
    out = out or sys.stdout
    dataset = dataio.synth_generate(np.random.default_rng(seed), n, noise)
    dataio.write_csv(dataset, out_path)
    print(f"wrote {n} rows to {out_path}", file=out)
    return 0


@_reports_errors
def cmd_solar(latitude, day, out=None):
    out = out or sys.stdout
    s = solar.solar_summary(latitude, day)
    print(f"latitude: {s.latitude:.3f} deg  day: {s.day}", file=out)
    print(f"declination: {s.declination:.3f} deg", file=out)
    print(f"sunset_hour_angle: {s.sunset_hour_angle:.3f} deg", file=out)
    print(f"S0: {s.day_length:.3f} h", file=out)
    print(f"H0: {s.h0:.1f} J/m^2/day ({s.h0_mj:.3f} MJ/m^2/day)", file=out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="mggp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="evolve a model on a dataset")
    p.add_argument("dataset")
    p.add_argument("--config", help="key = value parameter file (defaults: MGGP settings)")
    p.add_argument("--mode", choices=("mggp", "sggp"), default="mggp")
    p.add_argument("--seed", type=int, help="master seed (overrides rng_seed)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default="mggp-out", help="output directory")

    p = sub.add_parser("predict", help="apply a saved model")
    p.add_argument("model")
    p.add_argument("dataset")

    p = sub.add_parser("bench", help="multi-run MGGP vs SGGP statistics")
    p.add_argument("dataset")
    p.add_argument("--config")
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="also write the table to this CSV file")

    p = sub.add_parser("baseline", help="classical regression baselines on the whole dataset")
    p.add_argument("dataset")
    p.add_argument("--out")

    p = sub.add_parser("stats", help="summary statistics per column")
    p.add_argument("dataset")

    p = sub.add_parser("synth", help="write a synthetic dataset")
    p.add_argument("--n", type=int, default=192)
    p.add_argument("--noise", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="synthetic.csv")

    p = sub.add_parser("solar", help="declination, sunset hour angle, day length and H0")
    p.add_argument("latitude", type=float)
    p.add_argument("day", type=int)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.command == "fit":
        return cmd_fit(args.dataset, args.config, args.mode, args.out, args.seed, args.threads)
    if args.command == "predict":
        return cmd_predict(args.model, args.dataset)
    if args.command == "bench":
        return cmd_bench(args.dataset, args.config, args.runs, args.seed, args.threads, args.out)
    if args.command == "baseline":
        return cmd_baseline(args.dataset, args.out)
    if args.command == "stats":
        return cmd_stats(args.dataset)
    if args.command == "synth":
        return cmd_synth(args.n, args.noise, args.seed, args.out)
    return cmd_solar(args.latitude, args.day)


if __name__ == "__main__":
    sys.exit(main())
