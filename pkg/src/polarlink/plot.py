"""Self-contained SVG line charts of sweep CSVs (log-scale y axis)."""

from __future__ import annotations

import csv
import math
from html import escape
from pathlib import Path

Y_FLOOR = 1e-8
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22")
_W, _H = 640, 480
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 160, 30, 50


class CsvParseError(ValueError):
    pass


def read_series(path, x_col="snr_db", y_col="ber", group_col=None):
    """Return a list of ``(group, xs, ys)`` read from one CSV file."""
    groups: dict = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError(f"{path}:1: empty file") from None
        need = [x_col, y_col] + ([group_col] if group_col else [])
        for col in need:
            if col not in header:
                raise CsvParseError(f"{path}:1: missing column {col!r}")
        ix, iy = header.index(x_col), header.index(y_col)
        ig = header.index(group_col) if group_col else None
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise CsvParseError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            try:
                x, y = float(row[ix]), float(row[iy])
            except ValueError:
                raise CsvParseError(f"{path}:{lineno}: non-numeric value") from None
            key = row[ig] if ig is not None else None
            xs, ys = groups.setdefault(key, ([], []))
            xs.append(x)
            ys.append(y)
    return [(k, xs, ys) for k, (xs, ys) in groups.items()]


def _nice_ticks(lo, hi, count=6):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 10))
        t += step
    return ticks


def emit_plot(csv_paths, labels, path, x_col="snr_db", y_col="ber",
              group_col=None, x_label="SNR (dB)", y_label="BER"):
    """Write an SVG with one polyline per series.

    ``labels`` has one entry per CSV file. Zero (or tiny) y values are drawn
    at ``Y_FLOOR``.
    """
    csv_paths = list(csv_paths)
    labels = list(labels)
    if len(labels) != len(csv_paths):
        raise ValueError(f"{len(labels)} labels for {len(csv_paths)} CSV files")
    series = []
    for p, label in zip(csv_paths, labels):
        for key, xs, ys in read_series(p, x_col, y_col, group_col):
            name = label if key is None else f"{label} ({group_col}={key})"
            series.append((name, xs, [max(y, Y_FLOOR) for y in ys]))

    all_x = [x for _, xs, _ in series for x in xs] or [0.0, 1.0]
    all_y = [y for _, _, ys in series for y in ys] or [Y_FLOOR, 1.0]
    x0, x1 = min(all_x), max(all_x)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    d0 = math.floor(math.log10(min(all_y)))
    d1 = math.ceil(math.log10(max(all_y)))
    if d1 == d0:
        d1 += 1
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM

    def px(x):
        return _LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        return _TOP + (d1 - math.log10(y)) / (d1 - d0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
           f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
           f'<rect x="{_LEFT}" y="{_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for d in range(d0, d1 + 1):
        y = py(10.0 ** d)
        out.append(f'<line x1="{_LEFT}" y1="{y:.2f}" x2="{_LEFT + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{_LEFT - 6}" y="{y + 4:.2f}" text-anchor="end">1e{d}</text>')
    for t in _nice_ticks(x0, x1):
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{_TOP}" x2="{x:.2f}" y2="{_TOP + ph}" stroke="#eee"/>')
        out.append(f'<text x="{x:.2f}" y="{_TOP + ph + 16}" text-anchor="middle">{t:g}</text>')
    out.append(f'<text x="{_LEFT + pw / 2}" y="{_H - 10}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(f'<text x="16" y="{_TOP + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {_TOP + ph / 2})">{escape(y_label)}</text>')
    for k, (name, xs, ys) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        for x, y in zip(xs, ys):
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2.5" fill="{color}"/>')
        ly = _TOP + 14 + 18 * k
        lx = _LEFT + pw + 10
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{lx + 26}" y="{ly}">{escape(name)}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
