"""Benchmark orchestration: configuration, the (dataset x method) grid,
and table serialization."""

import csv
import json
import logging
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import (MISSING_POLICIES, ColumnMeta, SynthSpec, apply_missing_policy,
                   generate_synthetic, load_csv)
from .errors import ConfigError, RegbenchError
from .factor import fit_factor_regression
from .metrics import MetricsReport, evaluate
from .mlr import fit_forward, fit_full, fit_stepwise
from .preprocess import TRANSFORMS, SplitSpec, apply_transform, split

log = logging.getLogger(__name__)

METHODS = ("mlr-full", "mlr-forward", "mlr-stepwise", "fa-pca", "fa-ml", "fa-gls")
TECHNIQUE = {"mlr": "MLR", "fa": "Factor Analysis"}

REPORT_COLUMNS = (
    "Method", "MSE", "MAE", "CN", "No. of variables", "R Square", "Adj. R Square",
    "RMSE", "F Value (df1, df2)", "Modified Coefficient of efficiency",
    "JB statistic", "JB p-value",
)

REPORT_NOTE = (
    "MSE, MAE, RMSE, Modified Coefficient of efficiency and the JB test are "
    "computed on the test set; R Square, Adj. R Square and F Value on the "
    "training set. CN is the condition number of the standardized training "
    "regressors used by the model."
)


@dataclass(frozen=True)
class MethodConfig:
    method: str
    alpha_enter: float = 0.05
    alpha_remove: float = 0.10
    factors: object = "kaiser"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if not (0.0 < self.alpha_enter <= 1.0 and 0.0 < self.alpha_remove <= 1.0):
            raise ConfigError("alpha thresholds must lie in (0, 1]")
        if self.method == "mlr-stepwise" and not self.alpha_remove > self.alpha_enter:
            raise ConfigError("alpha_remove must exceed alpha_enter")
        f = self.factors
        if f != "kaiser" and (isinstance(f, bool) or not isinstance(f, int) or f < 1):
            raise ConfigError(f"factors must be 'kaiser' or a positive integer, got {f!r}")

    @property
    def technique(self):
        return TECHNIQUE[self.method.split("-")[0]]

    def to_dict(self):
        d = {"method": self.method}
        if self.method in ("mlr-forward", "mlr-stepwise"):
            d["alpha_enter"] = self.alpha_enter
        if self.method == "mlr-stepwise":
            d["alpha_remove"] = self.alpha_remove
        if self.method.startswith("fa-"):
            d["factors"] = self.factors
        return d

    @classmethod
    def from_dict(cls, d):
        if isinstance(d, str):
            return cls(d)
        unknown = set(d) - {"method", "alpha_enter", "alpha_remove", "factors"}
        if unknown:
            raise ConfigError(f"unknown method options: {sorted(unknown)}")
        if "method" not in d:
            raise ConfigError("method entry needs a 'method' key")
        return cls(**d)

    def fit(self, train, response):
        if self.method == "mlr-full":
            return fit_full(train, response)
        if self.method == "mlr-forward":
            return fit_forward(train, response, self.alpha_enter)[0]
        if self.method == "mlr-stepwise":
            return fit_stepwise(train, response, self.alpha_enter, self.alpha_remove)[0]
        return fit_factor_regression(train, response, self.method[3:], self.factors)


@dataclass(frozen=True)
class DatasetConfig:
    """One dataset: either a CSV ``path`` or a ``synthetic`` spec."""

    name: str
    response: str
    path: str = None
    synthetic: SynthSpec = None
    transform: str = "zscore"
    missing: str = "listwise-delete"
    ignore: tuple = ()
    schema: tuple = None

    def __post_init__(self):
        if (self.path is None) == (self.synthetic is None):
            raise ConfigError(f"dataset {self.name!r} needs exactly one of 'path' or 'synthetic'")
        if self.transform not in TRANSFORMS:
            raise ConfigError(f"transform must be one of {TRANSFORMS}, got {self.transform!r}")
        if self.missing not in MISSING_POLICIES:
            raise ConfigError(f"missing policy must be one of {MISSING_POLICIES}")
        object.__setattr__(self, "ignore", tuple(self.ignore))
        if self.schema is not None:
            object.__setattr__(self, "schema", tuple(self.schema))

    def to_dict(self):
        d = {"name": self.name, "response": self.response}
        if self.path is not None:
            d["path"] = self.path
        else:
            d["synthetic"] = self.synthetic.to_dict()
        d["transform"] = self.transform
        d["missing"] = self.missing
        d["ignore"] = list(self.ignore)
        if self.schema is not None:
            d["schema"] = [c.to_dict() for c in self.schema]
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        allowed = {"name", "response", "path", "synthetic", "transform", "missing", "ignore", "schema"}
        if set(d) - allowed:
            raise ConfigError(f"unknown dataset keys: {sorted(set(d) - allowed)}")
        for key in ("name", "response"):
            if key not in d:
                raise ConfigError(f"dataset entry needs {key!r}")
        if d.get("synthetic") is not None:
            try:
                d["synthetic"] = SynthSpec(**d["synthetic"])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"dataset {d['name']!r}: {exc}") from exc
        if d.get("schema") is not None:
            d["schema"] = tuple(ColumnMeta.from_dict(c) for c in d["schema"])
        return cls(**d)

    def load(self):
        if self.synthetic is not None:
            ds, _ = generate_synthetic(self.synthetic)
        else:
            ds = load_csv(self.path, self.schema, name=self.name)
        if self.response not in ds.names:
            raise ConfigError(f"dataset {self.name!r} has no column {self.response!r}")
        missing = [c for c in self.ignore if c not in ds.names]
        if missing:
            raise ConfigError(f"dataset {self.name!r}: ignored columns not found: {missing}")
        return ds.with_roles(self.response, self.ignore)


@dataclass(frozen=True)
class BenchConfig:
    datasets: tuple
    methods: tuple
    split: SplitSpec = field(default_factory=SplitSpec)
    output_dir: str = "regbench-out"

    def __post_init__(self):
        object.__setattr__(self, "datasets", tuple(self.datasets))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.datasets or not self.methods:
            raise ConfigError("configuration needs at least one dataset and one method")
        names = [d.name for d in self.datasets]
        if len(set(names)) != len(names):
            raise ConfigError("dataset names must be unique")

    def to_dict(self):
        return {
            "datasets": [d.to_dict() for d in self.datasets],
            "methods": [m.to_dict() for m in self.methods],
            "split": {"train_fraction": self.split.train_fraction, "seed": self.split.seed},
            "output_dir": self.output_dir,
        }

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a JSON object")
        allowed = {"datasets", "methods", "split", "output_dir"}
        if set(d) - allowed:
            raise ConfigError(f"unknown configuration keys: {sorted(set(d) - allowed)}")
        try:
            split_spec = SplitSpec(**d.get("split", {}))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"split: {exc}") from exc
        return cls(
            datasets=tuple(DatasetConfig.from_dict(x) for x in d.get("datasets", ())),
            methods=tuple(MethodConfig.from_dict(x) for x in d.get("methods", ())),
            split=split_spec,
            output_dir=d.get("output_dir", "regbench-out"),
        )


def load_config(path):
    """Read a JSON configuration; relative paths resolve against its directory."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    cfg = BenchConfig.from_dict(raw)
    base = path.resolve().parent
    datasets = []
    for d in cfg.datasets:
        if d.path is not None and not os.path.isabs(d.path):
            d = DatasetConfig.from_dict({**d.to_dict(), "path": str(base / d.path)})
        datasets.append(d)
    out = cfg.output_dir if os.path.isabs(cfg.output_dir) else str(base / cfg.output_dir)
    return BenchConfig(tuple(datasets), cfg.methods, cfg.split, out)


@dataclass(frozen=True, eq=False)
class CellResult:
    dataset: str
    technique: str
    method: str
    report: MetricsReport = None
    error: str = None
    y_test: np.ndarray = field(default=None, repr=False)
    y_pred: np.ndarray = field(default=None, repr=False)

    @property
    def ok(self):
        return self.error is None

    def to_dict(self):
        d = {"dataset": self.dataset, "technique": self.technique, "method": self.method}
        if self.ok:
            d["report"] = self.report.to_dict()
        else:
            d["error"] = self.error
        return d

    @classmethod
    def from_dict(cls, d):
        report = MetricsReport.from_dict(d["report"]) if "report" in d else None
        return cls(d["dataset"], d["technique"], d["method"], report, d.get("error"))


@dataclass(frozen=True, eq=False)
class ComparisonTable:
    """All cells of a run, in configuration order.

    ``raw_datasets`` (not serialized) holds each dataset after the missing
    policy but before scaling, for box plots.
    """

    rows: tuple
    raw_datasets: dict = field(default=None, repr=False)

    @property
    def failures(self):
        return [r for r in self.rows if not r.ok]

    @property
    def dataset_names(self):
        seen = []
        for r in self.rows:
            if r.dataset not in seen:
                seen.append(r.dataset)
        return seen

    def to_dict(self):
        return {"rows": [r.to_dict() for r in self.rows]}

    def dumps(self):
        return json.dumps(_json_safe(self.to_dict()), indent=2, sort_keys=True) + "\n"

    @classmethod
    def loads(cls, text):
        return cls(tuple(CellResult.from_dict(r) for r in _json_restore(json.loads(text))["rows"]))


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return {"__float__": repr(obj)}
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _json_restore(obj):
    if isinstance(obj, dict):
        if set(obj) == {"__float__"}:
            return float(obj["__float__"])
        return {k: _json_restore(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_restore(v) for v in obj]
    return obj


def _describe_error(exc):
    return f"{type(exc).__name__}: {exc}"


def _prepare(dc, split_spec):
    """Load and preprocess one dataset: ``(raw, train, test)``.

    Load and configuration errors propagate; later failures are returned
    as a message so the caller can record error rows.
    """
    ds = dc.load()
    try:
        raw = apply_missing_policy(ds, dc.missing, dc.response)
        scaled, _ = apply_transform(raw, dc.transform)
        train, test = split(scaled, split_spec)
    except (RegbenchError, ValueError, ArithmeticError) as exc:
        return ds, None, _describe_error(exc)
    return raw, (train, test), None


def _run_cell(dc, mc, prepared):
    train, test = prepared
    try:
        fit = mc.fit(train, dc.response)
        report = evaluate(fit, train, test)
        y_pred = fit.predict(test)
    except (RegbenchError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        log.warning("%s / %s failed: %s", dc.name, mc.method, exc)
        return CellResult(dc.name, mc.technique, mc.method, error=_describe_error(exc))
    return CellResult(dc.name, mc.technique, mc.method, report,
                      y_test=np.array(test.column(dc.response)), y_pred=y_pred)


def default_threads():
    try:
        return max(1, int(os.environ.get("REGBENCH_THREADS", "1")))
    except ValueError:
        return 1


def run_benchmark(config, threads=None):
    """Fit and evaluate every (dataset, method) cell of ``config``.

    Cells run on up to ``threads`` worker threads (default: the
    ``REGBENCH_THREADS`` environment variable, else 1); the resulting table
    is ordered by configuration index regardless.
    """
    threads = threads or default_threads()
    raw_datasets = {}
    jobs = []
    for dc in config.datasets:
        raw, prepared, error = _prepare(dc, config.split)
        raw_datasets[dc.name] = raw
        for mc in config.methods:
            jobs.append((dc, mc, prepared, error))

    def work(job):
        dc, mc, prepared, error = job
        if error is not None:
            return CellResult(dc.name, mc.technique, mc.method, error=error)
        return _run_cell(dc, mc, prepared)

    if threads == 1:
        rows = [work(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(work, jobs))
    return ComparisonTable(tuple(rows), raw_datasets)


def format_real(x):
    """Four decimals; scientific notation outside ``[1e-4, 1e5)``."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x != 0.0 and (abs(x) >= 1e5 or abs(x) < 1e-4):
        return f"{x:.4e}"
    return f"{x:.4f}"


def format_f_value(f_value, df):
    return f"{format_real(f_value)} ({df[0]}, {df[1]})"


def report_cells(row):
    r = row.report
    return [
        row.method, format_real(r.mse), format_real(r.mae), format_real(r.cn), str(r.n_vars),
        format_real(r.r2), format_real(r.adj_r2_reported), format_real(r.rmse),
        format_f_value(r.f_value, r.df), format_real(r.e1_mod),
        format_real(r.jb_stat), format_real(r.jb_p),
    ]


def safe_name(s):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", s)


def render_markdown(table):
    lines = ["# Regression benchmark", "", REPORT_NOTE, ""]
    for name in table.dataset_names:
        rows = [r for r in table.rows if r.dataset == name and r.ok]
        lines += [f"## {name}", ""]
        if not rows:
            lines += ["No successful cells.", ""]
            continue
        lines.append("| " + " | ".join(REPORT_COLUMNS) + " |")
        lines.append("|" + "---|" * len(REPORT_COLUMNS))
        for r in rows:
            lines.append("| " + " | ".join(report_cells(r)) + " |")
        lines.append("")
    if table.failures:
        lines += ["## Failures", "", "| Dataset | Method | Reason |", "|---|---|---|"]
        for r in table.failures:
            reason = r.error.replace("|", "\\|").replace("\n", " ")
            lines.append(f"| {r.dataset} | {r.method} | {reason} |")
        lines.append("")
    return "\n".join(lines)


def emit_report(table, fmt, out_dir):
    """Write the comparison table as ``markdown`` or ``csv``; returns the paths.

    Markdown goes to ``report.md`` with one section per dataset. CSV writes
    ``report_<dataset>.csv`` per dataset, plus ``failures.csv`` when any cell
    failed.
    """
    if not table.rows:
        raise ValueError("empty comparison table")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "markdown":
        path = out / "report.md"
        path.write_text(render_markdown(table), encoding="utf-8")
        return [path]
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    paths = []
    for name in table.dataset_names:
        path = out / f"report_{safe_name(name)}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(REPORT_COLUMNS)
            for r in table.rows:
                if r.dataset == name and r.ok:
                    w.writerow(report_cells(r))
        paths.append(path)
    if table.failures:
        path = out / "failures.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["Dataset", "Method", "Reason"])
            for r in table.failures:
                w.writerow([r.dataset, r.method, r.error])
        paths.append(path)
    return paths


_F_CELL = re.compile(r"^(\S+) \((\d+), (\d+)\)$")


def read_report_csv(path):
    """Parse a CSV written by :func:`emit_report` back into dicts of numbers."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames) != REPORT_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        for row in reader:
            parsed = {"Method": row["Method"], "No. of variables": int(row["No. of variables"])}
            m = _F_CELL.match(row["F Value (df1, df2)"])
            if m is None:
                raise ValueError(f"{path}: bad F cell {row['F Value (df1, df2)']!r}")
            parsed["F Value"] = float(m.group(1))
            parsed["df"] = (int(m.group(2)), int(m.group(3)))
            for col in REPORT_COLUMNS:
                if col not in parsed and col not in ("F Value (df1, df2)",):
                    parsed[col] = float(row[col])
            out.append(parsed)
    return out
