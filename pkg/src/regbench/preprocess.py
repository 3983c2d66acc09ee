"""Scaling transforms, normality screening, dispersion summaries and the
train/test split."""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .data import CONTINUOUS, IGNORED
from .errors import DataError
from .numeric import chi2_sf
from .rng import SplitMix64

TRANSFORMS = ("log", "zscore", "none")


@dataclass(frozen=True)
class ColumnTransform:
    kind: str = "none"  # none | natural-log | zscore
    mean: float = 0.0
    sd: float = 1.0

    def apply(self, x):
        if self.kind == "natural-log":
            return np.log(x)
        if self.kind == "zscore":
            return (x - self.mean) / self.sd
        return x

    def invert(self, x):
        if self.kind == "natural-log":
            return np.exp(x)
        if self.kind == "zscore":
            return x * self.sd + self.mean
        return x


@dataclass(frozen=True)
class TransformRecord:
    """Per-column transforms applied to a dataset; enough to undo them."""

    entries: dict = field(default_factory=dict)

    def invert(self, d):
        values = np.array(d.values)
        for name, t in self.entries.items():
            j = d.index(name)
            obs = ~d.missing[:, j]
            values[obs, j] = t.invert(values[obs, j])
        return d.with_values(values)

    def merged(self, other):
        return TransformRecord({**self.entries, **other.entries})


def _select(d, columns):
    if columns is None:
        return [c.name for c in d.columns if c.kind == CONTINUOUS and c.role != IGNORED]
    return list(columns)


def _zscore_params(x, name):
    if x.size < 2:
        raise DataError(f"column {name!r} has fewer than two observed values")
    mean = np.mean(x)
    mean += np.mean(x - mean)  # second pass removes rounding in the first
    sd = float(np.std(x - mean, ddof=1))
    if not sd > 0.0:
        raise DataError(f"column {name!r} has zero variance")
    return float(mean), sd


def zscore(d, columns=None):
    """Standardize columns to mean 0 and unit sample standard deviation.

    Only observed cells enter the statistics; missing cells stay missing.
    """
    values = np.array(d.values)
    entries = {}
    for name in _select(d, columns):
        j = d.index(name)
        obs = ~d.missing[:, j]
        mean, sd = _zscore_params(values[obs, j], name)
        t = ColumnTransform("zscore", mean, sd)
        values[obs, j] = t.apply(values[obs, j])
        entries[name] = t
    return d.with_values(values), TransformRecord(entries)


def log_transform(d, columns=None):
    """Natural log of strictly positive columns.

    A column holding any value <= 0 is z-scored instead, and the record says
    so. A column that can be neither logged nor standardized (non-positive
    and constant) is left unchanged.
    """
    values = np.array(d.values)
    entries = {}
    for name in _select(d, columns):
        j = d.index(name)
        if d.columns[j].kind != CONTINUOUS:
            raise DataError(f"log transform requested for non-continuous column {name!r}")
        obs = ~d.missing[:, j]
        x = values[obs, j]
        if np.all(x > 0):
            t = ColumnTransform("natural-log")
        else:
            try:
                t = ColumnTransform("zscore", *_zscore_params(x, name))
            except DataError:
                t = ColumnTransform("none")
        values[obs, j] = t.apply(x)
        entries[name] = t
    return d.with_values(values), TransformRecord(entries)


def apply_transform(d, kind):
    """Dataset-wide transform by name: ``log``, ``zscore`` or ``none``."""
    if kind == "log":
        return log_transform(d)
    if kind == "zscore":
        return zscore(d)
    if kind == "none":
        return d, TransformRecord()
    raise ValueError(f"unknown transform {kind!r}")


def _moments(x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 4:
        raise DataError("need at least four observations")
    d = x - x.mean()
    m2 = np.mean(d * d)
    if not m2 > 0.0:
        raise DataError("sample has zero variance")
    return d, m2


def skewness_kurtosis(x):
    """Moment estimators ``m3 / m2**1.5`` and ``m4 / m2**2`` (1/n weights).

    The kurtosis is not excess kurtosis: a normal sample gives about 3.
    """
    d, m2 = _moments(x)
    m3 = np.mean(d**3)
    m4 = np.mean(d**4)
    return float(m3 / m2**1.5), float(m4 / m2**2)


def jarque_bera(x):
    """Jarque-Bera statistic ``n/6 (S^2 + (K-3)^2/4)`` and its chi2(2) p-value."""
    n = len(x)
    s, k = skewness_kurtosis(x)
    jb = n / 6.0 * (s * s + 0.25 * (k - 3.0) ** 2)
    return float(jb), chi2_sf(jb, 2)


@dataclass(frozen=True)
class BoxPlotStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    lower_fence: float
    upper_fence: float
    outliers: tuple


def boxplot_stats(x):
    """Five-number summary with Tukey hinges and 1.5 IQR fences.

    The hinges are the medians of the lower and upper halves of the sorted
    sample; for odd sizes both halves include the median.
    """
    x = np.sort(np.asarray(x, dtype=np.float64))
    n = x.size
    if n < 5:
        raise DataError(f"box plot needs at least 5 values, got {n}")
    half = (n + 1) // 2
    q1 = float(np.median(x[:half]))
    q3 = float(np.median(x[n - half:]))
    iqr = q3 - q1
    lo, hi = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    outliers = tuple(float(v) for v in x if v < lo or v > hi)
    return BoxPlotStats(float(x[0]), q1, float(np.median(x)), q3, float(x[-1]), lo, hi, outliers)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.7
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    def train_size(self, n):
        return math.floor(Fraction(str(self.train_fraction)) * n)


def split_indices(n, s):
    """Sorted (train, test) row indices from a seeded Fisher-Yates shuffle."""
    if n < 10:
        raise DataError(f"need at least 10 rows to split, got {n}")
    perm = SplitMix64(s.seed).permutation(n)
    m = s.train_size(n)
    return np.sort(perm[:m]), np.sort(perm[m:])


def split(d, s):
    train, test = split_indices(d.n, s)
    return d.take(train), d.take(test)
