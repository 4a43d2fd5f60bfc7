"""Trajectory and vector-field serialisation, SVG plots."""
from __future__ import annotations

import csv
import enum
import json
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .integrate import Trajectory, VectorField
from .model import InvalidInputError
from .scenario import CompositeTrajectory

TRAJECTORY_HEADER = ("t", "Y", "d")
FIELD_HEADER = ("x", "y", "u", "v")


def _num(x):
    # repr of a Python float is the shortest string that round-trips
    return repr(float(x))


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_num(x) for x in row])


def _trajectory_rows(traj):
    if isinstance(traj, CompositeTrajectory):
        return zip(*traj.concatenated())
    return zip(traj.t, traj.Y, traj.d)


def write_trajectory_csv(traj, path):
    _write_rows(path, TRAJECTORY_HEADER, _trajectory_rows(traj))


def write_trajectory_json(traj, path):
    data = [dict(zip(TRAJECTORY_HEADER, map(float, row))) for row in _trajectory_rows(traj)]
    Path(path).write_text(json.dumps(data) + "\n", encoding="utf-8")


def read_trajectory_csv(path):
    """Return ``(t, Y, d)`` arrays from a trajectory CSV."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != TRAJECTORY_HEADER:
            raise InvalidInputError(f"unexpected trajectory header {header!r}")
        rows = [[float(x) for x in row] for row in reader]
    arr = np.array(rows, dtype=float).reshape(-1, 3)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def write_vector_field(grid: VectorField, path):
    _write_rows(path, FIELD_HEADER, grid.rows())


def write_vector_field_json(grid: VectorField, path):
    data = [dict(zip(FIELD_HEADER, map(float, row))) for row in grid.rows()]
    Path(path).write_text(json.dumps(data) + "\n", encoding="utf-8")


def read_vector_field_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != FIELD_HEADER:
            raise InvalidInputError(f"unexpected vector-field header {header!r}")
        return np.array([[float(x) for x in row] for row in reader], dtype=float).reshape(-1, 4)


# --- SVG ---------------------------------------------------------------------

class PlotMode(str, enum.Enum):
    PHASE_PLANE = "PhasePlane"
    TIME_SERIES = "TimeSeries"


WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60, 20, 30, 50
MAX_POINTS = 4000
COLOURS = {"Y": "#2a9d3a", "d": "#c62828", "orbit": "#c62828", "arrow": "#1f4fb4"}


def _f(x):
    return f"{x:.2f}"


def _thin(*arrays):
    n = len(arrays[0])
    if n <= MAX_POINTS:
        return arrays
    idx = np.unique(np.append(np.linspace(0, n - 1, MAX_POINTS).round().astype(int), n - 1))
    return tuple(a[idx] for a in arrays)


class _Frame:
    def __init__(self, x_lo, x_hi, y_lo, y_hi):
        if x_hi <= x_lo:
            x_hi = x_lo + 1.0
        if y_hi <= y_lo:
            y_hi = y_lo + 1.0
        self.x_lo, self.x_hi, self.y_lo, self.y_hi = x_lo, x_hi, y_lo, y_hi
        self.w = WIDTH - MARGIN_L - MARGIN_R
        self.h = HEIGHT - MARGIN_T - MARGIN_B

    def px(self, x):
        return MARGIN_L + (np.asarray(x) - self.x_lo) / (self.x_hi - self.x_lo) * self.w

    def py(self, y):
        return MARGIN_T + self.h - (np.asarray(y) - self.y_lo) / (self.y_hi - self.y_lo) * self.h


def _padded(lo, hi):
    span = hi - lo
    pad = 0.05 * span if span > 0 else 0.5
    return lo - pad, hi + pad


def _axes(frame, xlabel, ylabel, title):
    x0, y0 = MARGIN_L, MARGIN_T + frame.h
    out = [
        '<g class="axes" stroke="#000" stroke-width="1">',
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + frame.w}" y2="{y0}"/>',
        f'<line x1="{x0}" y1="{MARGIN_T}" x2="{x0}" y2="{y0}"/>',
        "</g>",
        '<g class="ticks" font-family="sans-serif" font-size="11" fill="#000">',
    ]
    for v in np.linspace(frame.x_lo, frame.x_hi, 5):
        out.append(f'<text x="{_f(frame.px(v))}" y="{y0 + 16}" text-anchor="middle">{v:.3g}</text>')
    for v in np.linspace(frame.y_lo, frame.y_hi, 5):
        out.append(f'<text x="{x0 - 6}" y="{_f(frame.py(v) + 4)}" text-anchor="end">{v:.3g}</text>')
    out.append("</g>")
    out.append(f'<text x="{x0 + frame.w / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13">{escape(xlabel)}</text>')
    out.append(f'<text x="14" y="{MARGIN_T + frame.h / 2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13" '
               f'transform="rotate(-90 14 {MARGIN_T + frame.h / 2:.1f})">{escape(ylabel)}</text>')
    out.append(f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle" font-family="sans-serif" '
               f'font-size="14">{escape(title)}</text>')
    return out


def _polyline(frame, xs, ys, colour, cls):
    xs, ys = _thin(np.asarray(xs), np.asarray(ys))
    pts = " ".join(f"{_f(a)},{_f(b)}" for a, b in zip(frame.px(xs), frame.py(ys)))
    return (f'<polyline class="{cls}" fill="none" stroke="{colour}" stroke-width="2" '
            f'points="{pts}"/>')


def _segments(data):
    if isinstance(data, CompositeTrajectory):
        return [seg for _, seg in data.segments], list(data.phase_starts)
    if isinstance(data, Trajectory):
        return [data], []
    raise InvalidInputError(f"cannot plot {type(data).__name__}")


def render_svg(data, mode=PlotMode.PHASE_PLANE, path=None, *, field: VectorField | None = None,
               title="Dynamic Paths") -> str:
    """Render a trajectory or composite as SVG text; also written to ``path`` if given.

    TimeSeries draws one polyline for Y and one for d, plus a dashed marker at
    the start of each phase of a composite. PhasePlane draws one polyline per
    segment and, optionally, the direction field as short arrows.
    """
    mode = PlotMode(mode)
    segs, starts = _segments(data)
    segs = [s for s in segs if len(s)]
    if not segs:
        raise InvalidInputError("nothing to plot: no samples")
    t = np.concatenate([s.t for s in segs])
    Y = np.concatenate([s.Y for s in segs])
    d = np.concatenate([s.d for s in segs])

    body = []
    if mode is PlotMode.TIME_SERIES:
        lo = min(Y.min(), d.min(), 0.0)
        frame = _Frame(float(t[0]), float(t[-1]), *_padded(lo, max(Y.max(), d.max())))
        body += _axes(frame, "Time", "Distancing and Output", title)
        for x in starts:
            body.append(f'<line class="phase-marker" x1="{_f(frame.px(x))}" y1="{MARGIN_T}" '
                        f'x2="{_f(frame.px(x))}" y2="{MARGIN_T + frame.h}" stroke="#777" '
                        f'stroke-dasharray="4 3"/>')
        body.append(_polyline(frame, t, Y, COLOURS["Y"], "series series-Y"))
        body.append(_polyline(frame, t, d, COLOURS["d"], "series series-d"))
    else:
        x_lo, x_hi = _padded(min(Y.min(), 0.0), Y.max())
        y_lo, y_hi = _padded(min(d.min(), 0.0), d.max())
        if field is not None:
            x_lo, x_hi = min(x_lo, field.x.min()), max(x_hi, field.x.max())
            y_lo, y_hi = min(y_lo, field.y.min()), max(y_hi, field.y.max())
        frame = _Frame(x_lo, x_hi, y_lo, y_hi)
        body += _axes(frame, "Output", "Distancing", title)
        if field is not None:
            body.append(f'<g class="field" stroke="{COLOURS["arrow"]}" stroke-width="1">')
            size = 0.35 * min(frame.w, frame.h) / max(field.x.shape)
            for x, y, u, v in field.rows():
                x1, y1 = float(frame.px(x)), float(frame.py(y))
                x2, y2 = x1 + size * u, y1 - size * v
                body.append(f'<line class="arrow" x1="{_f(x1)}" y1="{_f(y1)}" '
                            f'x2="{_f(x2)}" y2="{_f(y2)}"/>')
            body.append("</g>")
        for i, s in enumerate(segs):
            body.append(_polyline(frame, s.Y, s.d, COLOURS["orbit"], f"series orbit orbit-{i}"))

    svg = "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#fff"/>',
        *body,
        "</svg>",
    ]) + "\n"
    if path is not None:
        Path(path).write_text(svg, encoding="utf-8")
    return svg
