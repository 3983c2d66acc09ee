"""Command-line interface.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 numeric failure.
"""

import argparse
import io
import logging
import sys
from pathlib import Path

from . import __version__
from .bench import ComparisonTable, emit_report, load_config, run_benchmark
from .data import IGNORED, SynthSpec, generate_synthetic, load_csv, save_csv
from .errors import ConfigError, DataError, NumericError
from .plots import emit_plots
from .preprocess import apply_transform, boxplot_stats, jarque_bera, skewness_kurtosis

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x):
    return f"{x:.4f}"


def describe_text(d):
    """Per-column dispersion and normality summary used by ``describe``."""
    out = io.StringIO()
    out.write(f"dataset: {d.name}\nrows: {d.n}\ncolumns: {d.p}\nmissing cells: {d.missing_count()}\n\n")
    header = ("column", "kind", "n", "missing", "min", "q1", "median", "q3", "max",
              "outliers", "skewness", "kurtosis", "JB", "JB p")
    out.write("\t".join(header) + "\n")
    for c in d.columns:
        if c.role == IGNORED:
            continue
        j = d.index(c.name)
        x = d.values[~d.missing[:, j], j]
        cells = [c.name, c.kind, str(x.size), str(int(d.missing[:, j].sum()))]
        try:
            s = boxplot_stats(x)
            cells += [_fmt(s.min), _fmt(s.q1), _fmt(s.median), _fmt(s.q3), _fmt(s.max),
                      str(len(s.outliers))]
        except DataError:
            cells += ["n/a"] * 6
        try:
            sk, ku = skewness_kurtosis(x)
            jb, p = jarque_bera(x)
            cells += [_fmt(sk), _fmt(ku), _fmt(jb), _fmt(p)]
        except DataError:
            cells += ["n/a"] * 4
        out.write("\t".join(cells) + "\n")
    return out.getvalue()


def cmd_describe(args):
    d = load_csv(args.csv, name=Path(args.csv).name)
    if args.transform != "none":
        d, _ = apply_transform(d, args.transform)
    sys.stdout.write(describe_text(d))
    return EXIT_OK


def cmd_synth(args):
    try:
        spec = SynthSpec(n=args.n, p=args.p, collinearity=args.collinearity,
                         noise_sd=args.noise_sd, outlier_fraction=args.outlier_fraction,
                         skew=args.skew, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    d, _ = generate_synthetic(spec)
    if args.out in (None, "-"):
        save_csv(d, sys.stdout)
    else:
        save_csv(d, args.out)
    return EXIT_OK


def cmd_run(args):
    if not Path(args.config).is_file():
        raise UsageError(f"configuration file not found: {args.config}")
    cfg = load_config(args.config)
    out = Path(args.out or cfg.output_dir)
    table = run_benchmark(cfg, threads=args.threads)
    out.mkdir(parents=True, exist_ok=True)
    (out / "table.json").write_text(table.dumps(), encoding="utf-8")
    formats = ("markdown", "csv") if args.format == "both" else (args.format,)
    written = [out / "table.json"]
    for fmt in formats:
        written += emit_report(table, fmt, out)
    if not args.no_plots:
        written += emit_plots(table, out)
    for r in table.failures:
        print(f"warning: {r.dataset} / {r.method}: {r.error}", file=sys.stderr)
    print(f"{len(table.rows) - len(table.failures)} of {len(table.rows)} cells succeeded; "
          f"wrote {len(written)} files to {out}")
    return EXIT_OK


def cmd_report(args):
    try:
        text = Path(args.table).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read table {args.table}: {exc.strerror}") from exc
    try:
        table = ComparisonTable.loads(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise DataError(f"{args.table} is not a comparison table: {exc}") from exc
    out = args.out or str(Path(args.table).parent)
    for p in emit_report(table, args.format, out):
        print(p)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="regbench", description=(
        "Compare multiple linear regression and factor-analysis regression on tabular data."))
    parser.add_argument("--version", action="version", version=f"regbench {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("describe", help="dispersion, skewness/kurtosis and JB test per column")
    p.add_argument("csv")
    p.add_argument("--transform", choices=("none", "log", "zscore"), default="none")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("synth", help="write a synthetic regression dataset as CSV")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--collinearity", type=float, default=0.0)
    p.add_argument("--noise-sd", type=float, default=1.0)
    p.add_argument("--outlier-fraction", type=float, default=0.0)
    p.add_argument("--skew", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("run", help="run a benchmark configuration")
    p.add_argument("config")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: REGBENCH_THREADS or 1)")
    p.add_argument("--format", choices=("markdown", "csv", "both"), default="both")
    p.add_argument("--out", help="output directory (overrides the configuration)")
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="render a saved table.json")
    p.add_argument("table")
    p.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    p.add_argument("--out", help="output directory (default: next to the table)")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"regbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"regbench: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"regbench: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"regbench: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"regbench: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
