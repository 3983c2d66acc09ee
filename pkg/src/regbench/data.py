"""Tabular datasets: CSV ingestion, missing-value handling and synthetic data."""

import csv
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DataError, ParseError
from .rng import SplitMix64

log = logging.getLogger(__name__)

CONTINUOUS = "continuous"
CATEGORICAL = "integer-coded-categorical"
KINDS = (CONTINUOUS, CATEGORICAL)

PREDICTOR = "predictor"
RESPONSE = "response"
IGNORED = "ignored"
ROLES = (PREDICTOR, RESPONSE, IGNORED)

MISSING_TOKENS = frozenset({"", "NA", "?"})
MISSING_POLICIES = ("listwise-delete", "mean-impute")


@dataclass(frozen=True)
class ColumnMeta:
    name: str
    kind: str = CONTINUOUS
    role: str = PREDICTOR

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown column kind {self.kind!r}")
        if self.role not in ROLES:
            raise ValueError(f"unknown column role {self.role!r}")

    def to_dict(self):
        return {"name": self.name, "kind": self.kind, "role": self.role}

    @classmethod
    def from_dict(cls, d):
        return cls(d["name"], d.get("kind", CONTINUOUS), d.get("role", PREDICTOR))


@dataclass(frozen=True, eq=False)
class Dataset:
    """An ``n x p`` numeric table with per-cell missing mask.

    Missing cells hold NaN in ``values``; every other cell is finite.
    Instances are treated as immutable: the arrays are flagged read-only.
    """

    name: str
    columns: tuple
    values: np.ndarray
    missing: np.ndarray = field(default=None)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise DataError("dataset values must be a 2-d table")
        missing = (np.isnan(values) if self.missing is None
                   else np.array(self.missing, dtype=bool))
        columns = tuple(self.columns)
        n, p = values.shape
        if missing.shape != values.shape:
            raise DataError("missing mask does not match value table")
        if len(columns) != p:
            raise DataError(f"{len(columns)} column descriptors for {p} columns")
        if n < 1 or p < 2:
            raise DataError(f"dataset {self.name!r} needs n >= 1 and p >= 2, got {n} x {p}")
        names = [c.name for c in columns]
        if len(set(names)) != len(names):
            raise DataError(f"duplicate column names in {self.name!r}")
        if sum(c.role == RESPONSE for c in columns) > 1:
            raise DataError("more than one response column")
        values[missing] = np.nan
        if not np.all(np.isfinite(values[~missing])):
            raise DataError("non-missing entries must be finite")
        values.flags.writeable = False
        missing.flags.writeable = False
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "missing", missing)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def p(self):
        return self.values.shape[1]

    @property
    def names(self):
        return [c.name for c in self.columns]

    @property
    def response(self):
        for c in self.columns:
            if c.role == RESPONSE:
                return c.name
        return None

    def index(self, name):
        for i, c in enumerate(self.columns):
            if c.name == name:
                return i
        raise DataError(f"no column named {name!r} in dataset {self.name!r}")

    def meta(self, name):
        return self.columns[self.index(name)]

    def column(self, name):
        return self.values[:, self.index(name)]

    def matrix(self, names):
        return self.values[:, [self.index(nm) for nm in names]]

    def predictors(self, response=None):
        """Names of predictor columns, excluding ``response`` and ignored columns."""
        response = response or self.response
        return [c.name for c in self.columns if c.role != IGNORED and c.name != response]

    def with_roles(self, response, ignored=()):
        """Copy with ``response`` as the single response column.

        Columns listed in ``ignored`` get the ignored role, the rest become
        predictors.
        """
        self.index(response)
        for nm in ignored:
            self.index(nm)
        cols = []
        for c in self.columns:
            role = RESPONSE if c.name == response else IGNORED if c.name in ignored else PREDICTOR
            cols.append(replace(c, role=role))
        return replace(self, columns=tuple(cols))

    def take(self, rows):
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.name, self.columns, self.values[rows], self.missing[rows])

    def with_values(self, values, columns=None):
        return Dataset(self.name, self.columns if columns is None else columns, values, None)

    def missing_count(self):
        return int(self.missing.sum())

    def equals(self, other, tol=0.0):
        if self.names != other.names or self.values.shape != other.values.shape:
            return False
        if not np.array_equal(self.missing, other.missing):
            return False
        a = self.values[~self.missing]
        b = other.values[~other.missing]
        return bool(np.all(np.abs(a - b) <= tol))


def _parse_float(token):
    try:
        x = float(token)
    except ValueError:
        return None
    return x if math.isfinite(x) else None


def load_csv(path, schema=None, name=None):
    """Read a CSV file with a header row into a :class:`Dataset`.

    Empty fields, ``NA`` and ``?`` are missing. Without ``schema`` a column
    is continuous when all its non-missing fields parse as numbers and is
    otherwise coded as integers 0, 1, ... in order of first appearance.
    """
    path = str(path)
    try:
        fh = open(path, newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc.strerror}") from exc
    rows, lines = [], []
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader, None)
            if header is None:
                raise ParseError(f"{path} is empty", line=1)
            header = [h.strip() for h in header]
            for row in reader:
                if not row or (len(row) == 1 and not row[0].strip() and len(header) > 1):
                    continue
                if len(row) != len(header):
                    raise ParseError(
                        f"ragged row: {len(row)} fields, header has {len(header)}",
                        line=reader.line_num,
                    )
                rows.append([t.strip() for t in row])
                lines.append(reader.line_num)
        except csv.Error as exc:
            raise ParseError(str(exc), line=reader.line_num) from exc
    if not rows:
        raise DataError(f"{path} has no data rows")

    if schema is not None:
        by_name = {c.name: c for c in schema}
        if set(by_name) != set(header) or len(schema) != len(header):
            raise DataError(f"schema columns {sorted(by_name)} do not match header {header}")
        metas = [by_name[h] for h in header]
    else:
        metas = [None] * len(header)

    n, p = len(rows), len(header)
    values = np.full((n, p), np.nan)
    missing = np.zeros((n, p), dtype=bool)
    columns = []
    for j, h in enumerate(header):
        tokens = [r[j] for r in rows]
        miss = [t in MISSING_TOKENS for t in tokens]
        parsed = [None if m else _parse_float(t) for t, m in zip(tokens, miss)]
        numeric = all(m or x is not None for m, x in zip(miss, parsed))
        meta = metas[j]
        if meta is not None and meta.kind == CONTINUOUS and not numeric:
            i = next(i for i, (m, x) in enumerate(zip(miss, parsed)) if not m and x is None)
            raise ParseError(f"non-numeric value {tokens[i]!r} in continuous column {h!r}",
                             line=lines[i])
        if numeric:
            col = [np.nan if m else x for m, x in zip(miss, parsed)]
            kind = meta.kind if meta is not None else CONTINUOUS
        else:
            codes = {}
            col = [np.nan if m else codes.setdefault(t, len(codes)) for t, m in zip(tokens, miss)]
            kind = CATEGORICAL
        values[:, j] = col
        missing[:, j] = miss
        columns.append(ColumnMeta(h, kind, meta.role if meta is not None else PREDICTOR))
    log.info("loaded %s: %d rows x %d columns, %d missing cells", path, n, p, int(missing.sum()))
    return Dataset(name or path, tuple(columns), values, missing)


def save_csv(d, path):
    """Write ``d`` as CSV to a path or open text file; missing cells become
    ``NA``. Values round-trip exactly."""
    if hasattr(path, "write"):
        _write_csv(d, path)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _write_csv(d, fh)


def _write_csv(d, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(d.names)
    for vals, miss in zip(d.values, d.missing):
        w.writerow(["NA" if m else repr(float(v)) for v, m in zip(vals, miss)])


def apply_missing_policy(d, policy="listwise-delete", response=None):
    """Remove missing cells from ``d``.

    ``listwise-delete`` drops every row with a missing cell in a
    non-ignored column. ``mean-impute`` drops rows whose response is
    missing and fills the remaining missing cells with the column mean of
    the observed entries. Ignored columns are left untouched.
    """
    if policy not in MISSING_POLICIES:
        raise ValueError(f"unknown missing policy {policy!r}")
    response = response or d.response
    used = np.array([c.role != IGNORED for c in d.columns])
    if policy == "listwise-delete":
        keep = ~np.any(d.missing[:, used], axis=1)
        if not keep.any():
            raise DataError(f"listwise deletion removed every row of {d.name!r}")
        return d.take(np.flatnonzero(keep))

    if response is not None:
        keep = ~d.missing[:, d.index(response)]
        if not keep.any():
            raise DataError(f"response {response!r} is missing in every row")
        d = d.take(np.flatnonzero(keep))
    values = np.array(d.values)
    missing = np.array(d.missing)
    for j in np.flatnonzero(used):
        m = missing[:, j]
        if not m.any():
            continue
        if m.all():
            raise DataError(f"column {d.columns[j].name!r} has no observed values")
        values[m, j] = values[~m, j].mean()
        missing[m, j] = False
    return Dataset(d.name, d.columns, values, missing)


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a synthetic regression dataset.

    Predictor 1 is standard normal (``exp(skew * z)`` when ``skew > 0``);
    predictor ``j > 1`` is ``collinearity * x1 + (1 - collinearity) * e_j``.
    """

    n: int
    p: int
    collinearity: float = 0.0
    noise_sd: float = 1.0
    outlier_fraction: float = 0.0
    skew: float = 0.0
    seed: int = 0

    def __post_init__(self):
        problems = []
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 2):
            problems.append("n must be an integer >= 2")
        if not (isinstance(self.p, (int, np.integer)) and self.p >= 1):
            problems.append("p must be an integer >= 1")
        if not 0.0 <= self.collinearity < 1.0:
            problems.append("collinearity must lie in [0, 1)")
        if not self.noise_sd > 0.0:
            problems.append("noise_sd must be positive")
        if not 0.0 <= self.outlier_fraction < 1.0:
            problems.append("outlier_fraction must lie in [0, 1)")
        if not self.skew >= 0.0:
            problems.append("skew must be non-negative")
        if not 0 <= int(self.seed) < 2**64:
            problems.append("seed must fit in 64 unsigned bits")
        if problems:
            raise ValueError("invalid SynthSpec: " + "; ".join(problems))

    def to_dict(self):
        return {"n": self.n, "p": self.p, "collinearity": self.collinearity,
                "noise_sd": self.noise_sd, "outlier_fraction": self.outlier_fraction,
                "skew": self.skew, "seed": self.seed}


@dataclass(frozen=True)
class SynthTruth:
    intercept: float
    coefficients: np.ndarray
    outlier_rows: np.ndarray


def true_coefficients(p):
    """Coefficients used by :func:`generate_synthetic`: 1, -1.25, 1.5, -1.75, ..."""
    j = np.arange(p)
    return np.where(j % 2 == 0, 1.0, -1.0) * (1.0 + 0.25 * j)


def generate_synthetic(spec):
    """Draw a dataset with columns ``x1..xp, y`` from ``spec``.

    The SplitMix64 stream seeded with ``spec.seed`` is consumed in a fixed
    order: ``n`` normals for predictor 1, ``n`` normals for each further
    predictor in turn, ``n`` normals for the response noise, then a
    Fisher-Yates permutation whose first ``floor(outlier_fraction * n)``
    entries are the outlier rows. The response is
    ``1 + X b + noise_sd * eps``, shifted by ``10 * noise_sd`` on outlier rows.

    Returns
    -------
    (Dataset, SynthTruth)
    """
    n, p = int(spec.n), int(spec.p)
    stream = SplitMix64(spec.seed)
    z1 = stream.normal(n)
    x1 = np.exp(spec.skew * z1) if spec.skew > 0 else z1
    X = np.empty((n, p))
    X[:, 0] = x1
    c = spec.collinearity
    for j in range(1, p):
        X[:, j] = c * x1 + (1.0 - c) * stream.normal(n)
    eps = stream.normal(n)
    n_out = int(math.floor(spec.outlier_fraction * n))
    perm = stream.permutation(n)
    outliers = np.sort(perm[:n_out])

    intercept = 1.0
    b = true_coefficients(p)
    y = intercept + X @ b + spec.noise_sd * eps
    y[outliers] += 10.0 * spec.noise_sd

    cols = tuple(ColumnMeta(f"x{j + 1}") for j in range(p)) + (ColumnMeta("y", role=RESPONSE),)
    ds = Dataset(f"synthetic-{spec.seed}", cols, np.column_stack([X, y]))
    return ds, SynthTruth(intercept, b, outliers)
