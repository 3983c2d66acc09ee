"""Dependency-free SVG output: per-dataset box plots and per-cell
predicted-vs-actual scatter plots with their data files."""

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .bench import safe_name
from .data import IGNORED
from .errors import DataError
from .preprocess import boxplot_stats

WIDTH, HEIGHT, PAD = 640, 420, 48


def _num(x):
    return f"{x:.2f}"


def _svg(width, height, body, title):
    return "\n".join([
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        *body,
        "</svg>",
        "",
    ])


class _Scale:
    def __init__(self, lo, hi, a, b):
        if not hi > lo:
            lo, hi = lo - 0.5, hi + 0.5
        self.lo, self.hi, self.a, self.b = lo, hi, a, b

    def __call__(self, v):
        return self.a + (v - self.lo) / (self.hi - self.lo) * (self.b - self.a)


def boxplot_svg(d, title=None):
    """One ``<g class="box">`` group per non-ignored column of ``d``."""
    cols = [c.name for c in d.columns if c.role != IGNORED]
    data = {}
    for name in cols:
        j = d.index(name)
        data[name] = d.values[~d.missing[:, j], j]
    finite = np.concatenate([v for v in data.values() if v.size]) if data else np.zeros(1)
    ys = _Scale(float(finite.min()), float(finite.max()), HEIGHT - PAD, PAD)
    slot = (WIDTH - 2 * PAD) / max(len(cols), 1)
    body = [f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{HEIGHT - PAD}" stroke="black"/>']
    for i, name in enumerate(cols):
        x = data[name]
        cx = PAD + (i + 0.5) * slot
        half = min(slot * 0.3, 20)
        group = [f'<g class="box" data-column="{escape(name)}">']
        try:
            s = boxplot_stats(x)
        except DataError:
            s = None
        if s is not None:
            inside = x[(x >= s.lower_fence) & (x <= s.upper_fence)]
            w_lo, w_hi = float(inside.min()), float(inside.max())
            group += [
                f'<line x1="{_num(cx)}" y1="{_num(ys(w_lo))}" x2="{_num(cx)}" '
                f'y2="{_num(ys(s.q1))}" stroke="black"/>',
                f'<line x1="{_num(cx)}" y1="{_num(ys(s.q3))}" x2="{_num(cx)}" '
                f'y2="{_num(ys(w_hi))}" stroke="black"/>',
                f'<rect x="{_num(cx - half)}" y="{_num(ys(s.q3))}" width="{_num(2 * half)}" '
                f'height="{_num(ys(s.q1) - ys(s.q3))}" fill="#9ecae1" stroke="black"/>',
                f'<line x1="{_num(cx - half)}" y1="{_num(ys(s.median))}" x2="{_num(cx + half)}" '
                f'y2="{_num(ys(s.median))}" stroke="black" stroke-width="2"/>',
            ]
            for v in s.outliers:
                group.append(f'<circle cx="{_num(cx)}" cy="{_num(ys(v))}" r="2" fill="none" stroke="red"/>')
        group.append(f'<text x="{_num(cx)}" y="{HEIGHT - PAD + 14}" font-size="9" '
                     f'text-anchor="middle">{escape(name)}</text>')
        group.append("</g>")
        body += group
    return _svg(WIDTH, HEIGHT, body, title or f"Box plot of {d.name}")


def scatter_svg(y, y_hat, title):
    """Predicted (vertical) against actual (horizontal) with the identity line."""
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    lo = float(min(y.min(), y_hat.min()))
    hi = float(max(y.max(), y_hat.max()))
    xs = _Scale(lo, hi, PAD, WIDTH - PAD)
    ys = _Scale(lo, hi, HEIGHT - PAD, PAD)
    body = [
        f'<line class="diagonal" x1="{_num(xs(lo))}" y1="{_num(ys(lo))}" '
        f'x2="{_num(xs(hi))}" y2="{_num(ys(hi))}" stroke="grey" stroke-dasharray="4 2"/>',
        f'<text x="{WIDTH / 2:.0f}" y="{HEIGHT - 10}" text-anchor="middle" font-size="11">actual</text>',
        f'<text x="12" y="{HEIGHT / 2:.0f}" font-size="11" '
        f'transform="rotate(-90 12 {HEIGHT / 2:.0f})" text-anchor="middle">predicted</text>',
    ]
    for a, b in zip(y, y_hat):
        body.append(f'<circle cx="{_num(xs(a))}" cy="{_num(ys(b))}" r="2" fill="#3182bd"/>')
    return _svg(WIDTH, HEIGHT, body, title)


def write_pairs(path, y, y_hat):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("y\ty_hat\n")
        for a, b in zip(y, y_hat):
            fh.write(f"{float(a)!r}\t{float(b)!r}\n")


def emit_plots(table, out_dir):
    """Write box plots for every dataset in ``table.raw_datasets`` and a
    scatter plot plus ``(y, y_hat)`` text file for every successful cell."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, d in (table.raw_datasets or {}).items():
        p = out / f"boxplot_{safe_name(name)}.svg"
        p.write_text(boxplot_svg(d, f"Box plot of {name}"), encoding="utf-8")
        paths.append(p)
    for row in table.rows:
        if not row.ok or row.y_test is None:
            continue
        stem = f"pred_{safe_name(row.dataset)}_{safe_name(row.method)}"
        svg = out / f"{stem}.svg"
        svg.write_text(scatter_svg(row.y_test, row.y_pred, f"{row.method} ({row.dataset})"),
                       encoding="utf-8")
        txt = out / f"{stem}.txt"
        write_pairs(txt, row.y_test, row.y_pred)
        paths += [svg, txt]
    return paths
