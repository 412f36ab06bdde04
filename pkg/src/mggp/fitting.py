"""Least-squares gene weighting and regression metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTarget, IllConditioned

__all__ = [
    "WeightVector",
    "FitMetrics",
    "least_squares",
    "design_matrix",
    "rmse",
    "r_squared",
    "fit_metrics",
]


@dataclass(frozen=True)
class WeightVector:
    """Bias ``w0`` plus one weight per gene."""

    w0: float
    w: np.ndarray

    def as_array(self):
        return np.concatenate(([self.w0], self.w))

    @classmethod
    def from_array(cls, coef):
        coef = np.asarray(coef, dtype=float)
        return cls(w0=float(coef[0]), w=coef[1:].copy())


@dataclass(frozen=True)
class FitMetrics:
    rmse: float
    r2: float


def design_matrix(columns, n=None):
    """Stack gene outputs behind a leading column of ones."""
    columns = [np.asarray(c, dtype=float) for c in columns]
    if n is None:
        if not columns:
            raise ValueError("n is required when there are no gene columns")
        n = columns[0].shape[0]
    return np.column_stack([np.ones(n)] + columns)


def least_squares(design, y):
    """Minimum-norm least-squares solution of ``design @ coef ~= y``.

    Solved through a thin SVD. Singular values at or below
    ``max(n, p) * eps * max_column_norm`` are treated as zero, so duplicated
    or constant gene columns share weight instead of blowing up.

    Returns
    -------
    WeightVector
        ``w0`` multiplies the leading ones column.

    Raises
    ------
    IllConditioned
        If the decomposition fails or produces non-finite weights.
    """
    A = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = A.shape
    if n < 1 or y.shape != (n,):
        raise ValueError("design and target shapes disagree")
    if not np.isfinite(A).all():
        raise IllConditioned("design matrix has non-finite entries")
    with np.errstate(all="ignore"):
        col_norm = np.sqrt((A * A).sum(axis=0)).max()
        if not np.isfinite(col_norm):
            raise IllConditioned("column norms overflow")
        try:
            U, s, Vt = np.linalg.svd(A, full_matrices=False)
        except np.linalg.LinAlgError as exc:
            raise IllConditioned(str(exc)) from None
        tol = max(n, p) * np.finfo(float).eps * col_norm
        keep = s > tol
        coef = Vt[keep].T @ ((U[:, keep].T @ y) / s[keep])
    if not np.isfinite(coef).all():
        raise IllConditioned("non-finite weights")
    return WeightVector.from_array(coef)


def rmse(y, yhat):
    y = np.asarray(y, dtype=float)
    yhat = np.asarray(yhat, dtype=float)
    if y.shape != yhat.shape or y.size < 1:
        raise ValueError("rmse needs two equal-length non-empty vectors")
    return float(np.sqrt(np.mean((y - yhat) ** 2)))


def r_squared(y, yhat):
    """Coefficient of determination, ``1 - SS_res / SS_tot``.

    The mean in ``SS_tot`` is taken over the sample being scored.
    """
    y = np.asarray(y, dtype=float)
    yhat = np.asarray(yhat, dtype=float)
    if y.shape != yhat.shape or y.size < 2:
        raise ValueError("r_squared needs two equal-length vectors of length >= 2")
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise DegenerateTarget("target has zero variance")
    ss_res = float(np.sum((y - yhat) ** 2))
    return 1.0 - ss_res / ss_tot


def fit_metrics(y, yhat):
    return FitMetrics(rmse=rmse(y, yhat), r2=r_squared(y, yhat))
