"""Run artifacts: best-model JSON, trace CSV, Pareto dump and manifest.

The best-model file holds nothing that varies between identical runs
(no timestamps, no thread count), so the same seed, config and data give
a byte-identical file. Wall-clock details go to ``manifest.json``.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math

from . import __version__
from .dataio import ScalingParams
from .engine import Individual, predict
from .errors import MggpError, ParseError
from .exprtree import deserialize, serialize, to_infix
from .fitting import WeightVector
from .pareto import pareto_front, points_from_population, tag_representatives

MODEL_FORMAT = "mggp-model/1"


def _num(x):
    """JSON-safe float: non-finite values become strings such as ``"inf"``."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _metrics_dict(m):
    return None if m is None else {"rmse": _num(m.rmse), "r2": _num(m.r2)}


def build_manifest(config, dataset, seed, train_fraction=0.7, extra=None):
    manifest = {
        "tool": "mggp",
        "version": __version__,
        "format": MODEL_FORMAT,
        "seed": seed,
        "train_fraction": train_fraction,
        "config": config.to_dict(),
        "dataset": dataset.fingerprint(),
    }
    if extra:
        manifest.update(extra)
    return manifest


def model_to_dict(trace, manifest, feature_names=None):
    best = trace.best
    return {
        "format": MODEL_FORMAT,
        "manifest": manifest,
        "mode": "sggp" if trace.config.single_gene else "mggp",
        "genes": [serialize(g) for g in best.genes],
        "infix": [to_infix(g, feature_names) for g in best.genes],
        "weights": None
        if best.weights is None
        else {"bias": _num(best.weights.w0), "genes": [_num(w) for w in best.weights.w]},
        "scaling": trace.scaling.to_dict(),
        "fitness": _num(best.fitness),
        "complexity": best.complexity,
        "generations_run": trace.generations_run,
        "train": _metrics_dict(trace.train_metrics),
        "test": _metrics_dict(trace.test_metrics),
    }


def dumps_model(model):
    return json.dumps(model, indent=2, sort_keys=True) + "\n"


def write_model(path, model):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_model(model))


class LoadedModel:
    """A persisted model ready for prediction."""

    def __init__(self, genes, weights, scaling, raw):
        self.genes = genes
        self.weights = weights
        self.scaling = scaling
        self.raw = raw

    def predict(self, X):
        return predict(self.genes, self.weights, self.scaling, X)

    def individual(self):
        return Individual(tuple(self.genes), self.weights)


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MggpError(f"model file is not valid JSON: {exc}") from None
    return model_from_dict(raw)


def model_from_dict(raw):
    try:
        gene_texts = raw["genes"]
        w = raw["weights"]
        scaling = ScalingParams.from_dict(raw["scaling"])
    except (KeyError, TypeError) as exc:
        raise MggpError(f"model file is missing field {exc}") from None
    if w is None:
        raise MggpError("model has no fitted weights")
    genes = []
    for i, text in enumerate(gene_texts, start=1):
        try:
            genes.append(deserialize(text))
        except ParseError as exc:
            raise ParseError(f"gene {i}: {exc.message}", exc.position, exc.token) from None
    if len(w["genes"]) != len(genes):
        raise MggpError("weight count does not match gene count")
    weights = WeightVector.from_array([float(w["bias"])] + [float(v) for v in w["genes"]])
    return LoadedModel(genes, weights, scaling, raw)


def trace_csv(trace):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["generation", "best_fitness", "mean_fitness", "best_complexity"])
    for r in trace.records:
        writer.writerow([r.generation, repr(float(r.best_fitness)), repr(float(r.mean_fitness)), r.best_complexity])
    return out.getvalue()


def pareto_rows(population):
    """Rows ``(id, fitness, complexity, on_front, tag)`` for every individual."""
    points = points_from_population(population)
    front = pareto_front(points)
    on_front = {p.id for p in front}
    tags = tag_representatives(front)
    rows = []
    for i, ind in enumerate(population):
        fit = ind.fitness if ind.fitness is not None else math.inf
        rows.append((i, fit, ind.complexity, int(i in on_front), tags.get(i, "")))
    return rows


def pareto_csv(population):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["id", "fitness", "complexity", "on_front", "tag"])
    for i, fit, comp, front, tag in pareto_rows(population):
        writer.writerow([i, repr(float(fit)) if math.isfinite(fit) else "inf", comp, front, tag])
    return out.getvalue()


def run_manifest(manifest, threads, started, finished):
    """Full manifest including the non-reproducible details."""
    d = dict(manifest)
    d["threads"] = threads
    d["started"] = started.isoformat(timespec="seconds")
    d["finished"] = finished.isoformat(timespec="seconds")
    return d


def now():
    return _dt.datetime.now(_dt.timezone.utc)
