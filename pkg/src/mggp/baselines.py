"""Classical polynomial regression baselines fitted by least squares.

Term order in every design matrix: intercept, linear terms x1..xd, pair
products xi*xj (i < j, lexicographic), squares x1^2..xd^2, restricted to
the terms of the chosen family.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .fitting import FitMetrics, fit_metrics, least_squares


class BaselineKind(Enum):
    LINEAR = ("Linear", "intercept and linear terms", False, False)
    INTERACTIONS = (
        "Interactions",
        "intercept, linear terms and all products of pairs of distinct predictors",
        True,
        False,
    )
    PURE_QUADRATIC = ("Pure quadratic", "intercept, linear terms, and squared terms", False, True)
    QUADRATIC = ("Quadratic", "intercept, linear terms, interactions, and squared terms", True, True)

    def __init__(self, label, characteristics, interactions, squares):
        self.label = label
        self.characteristics = characteristics
        self.interactions = interactions
        self.squares = squares

    def terms(self, d=6):
        """Term descriptors as tuples of 0-based column indices (``()`` is the intercept)."""
        out = [()] + [(i,) for i in range(d)]
        if self.interactions:
            out += list(combinations(range(d), 2))
        if self.squares:
            out += [(i, i) for i in range(d)]
        return out

    def term_count(self, d=6):
        return len(self.terms(d))


def term_name(term, names=None):
    if not term:
        return "1"
    label = [names[i] if names else f"x{i + 1}" for i in term]
    if len(term) == 2 and term[0] == term[1]:
        return f"{label[0]}^2"
    return "*".join(label)


@dataclass(frozen=True)
class BaselineModel:
    kind: BaselineKind
    coefficients: np.ndarray
    terms: tuple

    def describe(self, names=None):
        return [(term_name(t, names), float(c)) for t, c in zip(self.terms, self.coefficients)]


def _design(X, terms):
    X = np.asarray(X, dtype=float)
    cols = []
    for t in terms:
        col = np.ones(X.shape[0])
        for i in t:
            col = col * X[:, i]
        cols.append(col)
    return np.column_stack(cols)


def build_design(dataset, kind):
    """Design matrix of ``kind`` for the dataset's (unscaled) inputs."""
    return _design(dataset.X, kind.terms(dataset.X.shape[1]))


def fit_baseline(dataset, kind, holdout=None):
    """Least-squares fit of ``kind`` on ``dataset``.

    Metrics are computed on the same rows the model was fitted on. When
    ``holdout`` is given its metrics are returned as a third element.
    """
    terms = tuple(kind.terms(dataset.X.shape[1]))
    if dataset.n <= len(terms):
        raise ValueError(f"{kind.label} needs more than {len(terms)} rows")
    design = _design(dataset.X, terms)
    coef = least_squares(design, dataset.y).as_array()
    model = BaselineModel(kind, coef, terms)
    metrics = fit_metrics(dataset.y, design @ coef)
    if holdout is None:
        return model, metrics
    return model, metrics, fit_metrics(holdout.y, predict_baseline(model, holdout))


def predict_baseline(model, dataset):
    return _design(dataset.X, model.terms) @ model.coefficients


def baseline_report(dataset):
    """All four families fitted on the whole dataset, as report rows."""
    rows = []
    for kind in BaselineKind:
        _, m = fit_baseline(dataset, kind)
        rows.append({"model": kind.label, "characteristics": kind.characteristics, "rmse": m.rmse, "r2": m.r2})
    return rows


def format_baseline_report(rows):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["model", "characteristics", "rmse", "r2"])
    for r in rows:
        writer.writerow([r["model"], r["characteristics"], f"{r['rmse']:.4f}", f"{r['r2']:.3f}"])
    return out.getvalue()


__all__ = [
    "BaselineKind",
    "BaselineModel",
    "FitMetrics",
    "build_design",
    "fit_baseline",
    "predict_baseline",
    "baseline_report",
    "format_baseline_report",
]
