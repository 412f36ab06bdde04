"""Dataset loading, summary statistics, hold-out splitting, z-score scaling
and the synthetic clearness-index generator.

Column schema (CSV header, in order)::

    latitude,longitude,altitude,month,s_ratio,t_ratio,clearness_index

The last column is the target and may be omitted for prediction-only
files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy import optimize, stats

from .errors import BadValue, ConstantColumn, SchemaMismatch

log = logging.getLogger(__name__)

INPUT_COLUMNS = ("latitude", "longitude", "altitude", "month", "s_ratio", "t_ratio")
TARGET_COLUMN = "clearness_index"
COLUMNS = INPUT_COLUMNS + (TARGET_COLUMN,)

_RATIO_RANGE = (0.0, 1.2)


@dataclass(frozen=True)
class Dataset:
    """Input matrix ``X`` (n x d) and optional target ``y``.

    Arrays are copied and marked read-only on construction.
    """

    X: np.ndarray
    y: np.ndarray | None = None
    feature_names: tuple = INPUT_COLUMNS

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim != 2 or X.shape[0] < 1:
            raise ValueError("X must be a non-empty 2-D array")
        if X.shape[1] != len(self.feature_names):
            raise ValueError("feature_names does not match X's column count")
        if not np.isfinite(X).all():
            raise ValueError("X contains non-finite values")
        X.flags.writeable = False
        object.__setattr__(self, "X", X)
        if self.y is not None:
            y = np.array(self.y, dtype=float)
            if y.shape != (X.shape[0],):
                raise ValueError("y must have one entry per row of X")
            if not np.isfinite(y).all():
                raise ValueError("y contains non-finite values")
            y.flags.writeable = False
            object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def has_target(self):
        return self.y is not None

    def take(self, rows):
        rows = np.asarray(rows, dtype=int)
        y = None if self.y is None else self.y[rows]
        return Dataset(self.X[rows], y, self.feature_names)

    def fingerprint(self):
        """Row count plus a short SHA-256 checksum per column."""
        cols = {}
        for j, name in enumerate(self.feature_names):
            cols[name] = _checksum(self.X[:, j])
        if self.y is not None:
            cols[TARGET_COLUMN] = _checksum(self.y)
        return {"rows": self.n, "columns": cols}


def _checksum(column):
    data = np.ascontiguousarray(column, dtype="<f8").tobytes()
    return hashlib.sha256(data).hexdigest()[:16]


# ---------------------------------------------------------------------------
# CSV


def _data_lines(text):
    for lineno, line in enumerate(io.StringIO(text, newline=None), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, stripped


def read_csv_text(text):
    """Parse CSV text in the dataset schema. See :func:`load_csv`."""
    lines = list(_data_lines(text))
    if not lines:
        raise SchemaMismatch("file has no header")
    _, header_line = lines[0]
    header = [h.strip() for h in next(csv.reader([header_line]))]
    missing = [c for c in INPUT_COLUMNS if c not in header]
    if missing:
        raise SchemaMismatch(f"missing column(s): {', '.join(missing)}")
    has_target = TARGET_COLUMN in header
    expected = list(COLUMNS if has_target else INPUT_COLUMNS)
    if header != expected:
        raise SchemaMismatch(
            f"header must be {','.join(expected)!r}, got {','.join(header)!r}"
        )

    rows = []
    for row_no, (lineno, line) in enumerate(lines[1:], start=1):
        cells = next(csv.reader([line]))
        if len(cells) != len(header):
            raise BadValue(row_no, "*", line, f"expected {len(header)} fields on line {lineno}")
        values = []
        for name, cell in zip(header, cells):
            token = cell.strip()
            try:
                value = float(token)
            except ValueError:
                raise BadValue(row_no, name, token, "not a number") from None
            if not math.isfinite(value):
                raise BadValue(row_no, name, token, "non-finite value")
            _check_cell(row_no, name, token, value)
            values.append(value)
        rows.append(values)
    if not rows:
        raise SchemaMismatch("file has a header but no data rows")
    data = np.array(rows, dtype=float)
    k = len(INPUT_COLUMNS)
    y = data[:, k] if has_target else None
    return Dataset(data[:, :k], y)


def _check_cell(row_no, name, token, value):
    if name == "month":
        if value != int(value) or not 1 <= value <= 12:
            raise BadValue(row_no, name, token, "month must be an integer in 1..12")
    elif name in ("s_ratio", "t_ratio"):
        lo, hi = _RATIO_RANGE
        if not lo <= value <= hi:
            log.warning("row %d: %s=%s outside the sanity range [%g, %g]", row_no, name, token, lo, hi)


def load_csv(path):
    """Read a dataset file.

    ``#`` comment lines and blank lines are skipped; LF and CRLF endings
    are both accepted.

    Raises
    ------
    SchemaMismatch
        Header is missing a column or has them in the wrong order.
    BadValue
        A cell is unparsable, non-finite or violates its column rule.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        return read_csv_text(fh.read())


def format_csv(dataset):
    names = list(dataset.feature_names)
    if dataset.has_target:
        names.append(TARGET_COLUMN)
    out = io.StringIO()
    out.write(",".join(names) + "\n")
    for i in range(dataset.n):
        row = list(dataset.X[i])
        if dataset.has_target:
            row.append(dataset.y[i])
        out.write(",".join(_fmt(v) for v in row) + "\n")
    return out.getvalue()


def _fmt(v):
    # repr round-trips exactly; integral values print without the trailing .0
    v = float(v)
    return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)


def write_csv(dataset, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_csv(dataset))


# ---------------------------------------------------------------------------
# statistics


@dataclass(frozen=True)
class ColumnStats:
    name: str
    minimum: float
    maximum: float
    mean: float
    std: float


def summary_stats(dataset):
    """Minimum, maximum, mean and sample standard deviation per column."""
    if dataset.n < 2:
        raise ValueError("summary statistics need at least two rows")
    cols = [(name, dataset.X[:, j]) for j, name in enumerate(dataset.feature_names)]
    if dataset.has_target:
        cols.append((TARGET_COLUMN, dataset.y))
    return [
        ColumnStats(name, float(c.min()), float(c.max()), float(c.mean()), float(c.std(ddof=1)))
        for name, c in cols
    ]


def format_stats_table(table):
    """Render statistics with measures as rows and variables as columns."""
    header = "measure," + ",".join(s.name for s in table)
    lines = [header]
    for label, attr in (
        ("Minimum", "minimum"),
        ("Maximum", "maximum"),
        ("Mean", "mean"),
        ("Standard deviation", "std"),
    ):
        lines.append(label + "," + ",".join(f"{getattr(s, attr):.3f}" for s in table))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# split and scaling


def train_size(n, train_fraction=0.7):
    return int(round(train_fraction * n))


def split(rng, dataset, train_fraction=0.7):
    """Random non-contiguous hold-out split.

    Rows are drawn without replacement; each part keeps the original row
    order. The training part has ``round(train_fraction * n)`` rows.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    n = dataset.n
    if n < 10:
        raise ValueError("splitting needs at least 10 rows")
    k = train_size(n, train_fraction)
    chosen = np.zeros(n, dtype=bool)
    chosen[rng.choice(n, size=k, replace=False)] = True
    idx = np.arange(n)
    return dataset.take(idx[chosen]), dataset.take(idx[~chosen])


@dataclass(frozen=True)
class ScalingParams:
    mu_x: np.ndarray
    sigma_x: np.ndarray
    mu_y: float
    sigma_y: float

    def scale_x(self, X):
        return (np.asarray(X, dtype=float) - self.mu_x) / self.sigma_x

    def scale_y(self, y):
        return (np.asarray(y, dtype=float) - self.mu_y) / self.sigma_y

    def unscale_y(self, y):
        return self.sigma_y * np.asarray(y, dtype=float) + self.mu_y

    def to_dict(self):
        return {
            "mu_x": [float(v) for v in self.mu_x],
            "sigma_x": [float(v) for v in self.sigma_x],
            "mu_y": float(self.mu_y),
            "sigma_y": float(self.sigma_y),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            mu_x=np.asarray(d["mu_x"], dtype=float),
            sigma_x=np.asarray(d["sigma_x"], dtype=float),
            mu_y=float(d["mu_y"]),
            sigma_y=float(d["sigma_y"]),
        )


def fit_scaling(train):
    """Z-score parameters (mean, sample std) of the training subset."""
    if not train.has_target:
        raise ValueError("scaling needs a target column")
    mu_x = train.X.mean(axis=0)
    sigma_x = train.X.std(axis=0, ddof=1)
    sigma_y = float(train.y.std(ddof=1))
    bad = [name for name, s in zip(train.feature_names, sigma_x) if not s > 0]
    if not sigma_y > 0:
        bad.append(TARGET_COLUMN)
    if bad:
        raise ConstantColumn(f"zero standard deviation in column(s): {', '.join(bad)}")
    return ScalingParams(mu_x=mu_x, sigma_x=sigma_x, mu_y=float(train.y.mean()), sigma_y=sigma_y)


# ---------------------------------------------------------------------------
# stations and the synthetic generator


@dataclass(frozen=True)
class Station:
    name: str
    latitude: float
    longitude: float
    altitude: float
    climate_zone: str


@lru_cache(maxsize=None)
def load_stations():
    """The 23 radiation stations bundled in ``data/stations.csv``."""
    text = resources.files("mggp").joinpath("data/stations.csv").read_text(encoding="utf-8")
    reader = csv.DictReader(io.StringIO(text))
    return tuple(
        Station(r["station"], float(r["latitude"]), float(r["longitude"]), float(r["altitude"]), r["climate_zone"])
        for r in reader
    )


# The 16 stations whose 12 monthly rows reproduce the geographic minimum,
# maximum, mean and standard deviation of the published 192-row summary
# to every printed digit. Found by exhaustive search over all 16-subsets.
DATASET_STATIONS = (
    "New Delhi",
    "Ahmedabad",
    "Jodhpur",
    "Kolkata",
    "Vishakhapatnam",
    "Srinagar",
    "Jaipur",
    "Bhopal",
    "Mumbai",
    "Pune",
    "Hyderabad",
    "Goa",
    "Chennai",
    "Bangalore",
    "Port Blair",
    "Minicoy",
)

# (mean, std, min, max) of the published ratio columns
S_RATIO_STATS = (0.769, 0.112, 0.460, 1.002)
T_RATIO_STATS = (0.714, 0.161, 0.026, 0.940)


@lru_cache(maxsize=None)
def _truncnorm_params(mean, std, lo, hi):
    """Underlying (loc, scale) whose truncation to [lo, hi] has the given moments."""

    def residual(p):
        loc, scale = p[0], abs(p[1])
        d = stats.truncnorm((lo - loc) / scale, (hi - loc) / scale, loc=loc, scale=scale)
        return [d.mean() - mean, d.std() - std]

    loc, scale = optimize.fsolve(residual, [mean, std], xtol=1e-12)
    return float(loc), float(abs(scale))


def ratio_distribution(mean, std, lo, hi):
    loc, scale = _truncnorm_params(mean, std, lo, hi)
    return stats.truncnorm((lo - loc) / scale, (hi - loc) / scale, loc=loc, scale=scale)


def clearness_ground_truth(X):
    """Noise-free clearness index used by the synthetic generator.

    An Angstrom-type line ``a + b * s_ratio`` whose intercept and slope
    vary smoothly with month and latitude::

        phase = 2*pi*(month - 1)/12
        a = 0.195 + 0.06*sin(phase) + 0.05*cos(2*lat)
        b = 0.42 + 0.10*cos(phase)*cos(lat)          (lat in radians)
    """
    X = np.asarray(X, dtype=float)
    lat = np.radians(X[:, 0])
    phase = 2.0 * np.pi * (X[:, 3] - 1.0) / 12.0
    a = 0.195 + 0.06 * np.sin(phase) + 0.05 * np.cos(2.0 * lat)
    b = 0.42 + 0.10 * np.cos(phase) * np.cos(lat)
    return a + b * X[:, 4]


def synth_generate(rng, n, noise_sigma=0.01):
    """Synthetic dataset statistically matched to the published summary.

    Rows walk the station/month grid (16 stations x 12 months, station
    major) and wrap around after 192 rows, so geography and month match
    the published columns exactly whenever ``n`` is a multiple of 192.
    ``s_ratio`` and ``t_ratio`` are truncated normals whose truncated
    mean and standard deviation equal the published ones. The target is
    :func:`clearness_ground_truth` plus Gaussian noise.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    by_name = {s.name: s for s in load_stations()}
    grid = [by_name[name] for name in DATASET_STATIONS]
    i = np.arange(n)
    station_idx = (i // 12) % len(grid)
    month = (i % 12 + 1).astype(float)
    geo = np.array([[s.latitude, s.longitude, s.altitude] for s in grid])[station_idx]
    s_ratio = ratio_distribution(*S_RATIO_STATS).rvs(size=n, random_state=rng)
    t_ratio = ratio_distribution(*T_RATIO_STATS).rvs(size=n, random_state=rng)
    X = np.column_stack([geo, month, s_ratio, t_ratio])
    y = clearness_ground_truth(X)
    if noise_sigma > 0:
        y = y + rng.normal(0.0, noise_sigma, size=n)
    return Dataset(X, y)


def bundled_synthetic():
    """The 192-row benchmark dataset shipped with the package (seed 0, noise 0.01)."""
    text = resources.files("mggp").joinpath("data/synthetic_192.csv").read_text(encoding="utf-8")
    return read_csv_text(text)


BUNDLED_SEED = 0
BUNDLED_NOISE = 0.01
