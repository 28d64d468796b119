"""File formats: JSON and CSV with 17 significant digits, SVG polylines, atomic writes."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .loops import DHLoop
from .pods import Leg
from .rigidity.graph import Graph
from .synth import RationalPlaneCurve


def fmt(x: float) -> str:
    """Float with 17 significant digits (round-trips exactly)."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return repr(x)
    return "%.17g" % (x + 0.0)


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(np.real(obj)), float(np.imag(obj))]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def _encode(obj: Any, indent: int) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ["%s%s: %s" % (pad, json.dumps(k), _encode(v, indent + 1)) for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps(str(obj))
        return fmt(obj)
    return json.dumps(obj)


def dumps(obj: Any) -> str:
    """JSON text with floats at 17 significant digits; complex numbers become ``[re, im]``.

    Non-finite floats are written as strings.
    """
    return _encode(_plain(obj), 0) + "\n"


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".%s." % path.name)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj: Any) -> None:
    atomic_write(path, dumps(obj))


def read_json(path) -> Any:
    with open(path) as fh:
        return json.load(fh)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    atomic_write(path, csv_text(header, rows))


def read_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def svg_polyline(points, width: int = 400, height: int = 400, margin: float = 10.0) -> str:
    """Static SVG of the (x, y) polyline, scaled to fit with the y-axis pointing up."""
    P = np.asarray(points, dtype=float)[:, :2]
    lo, hi = P.min(axis=0), P.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    s = min((width - 2 * margin) / span[0], (height - 2 * margin) / span[1])
    xs = margin + (P[:, 0] - lo[0]) * s
    ys = height - margin - (P[:, 1] - lo[1]) * s
    pts = " ".join("%.6g,%.6g" % (x, y) for x, y in zip(xs, ys))
    return ('<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">\n'
            '  <polyline fill="none" stroke="black" stroke-width="1" points="%s"/>\n</svg>\n'
            % (width, height, pts))


def write_svg(path, points) -> None:
    atomic_write(path, svg_polyline(points))


# ---------------------------------------------------------------------------
# domain objects
# ---------------------------------------------------------------------------

def read_graph(path):
    """``(Graph, lengths or None)`` from graph JSON."""
    return Graph.from_json(read_json(path))


def read_placement(path) -> dict:
    return {int(k): np.asarray(v, dtype=float) for k, v in read_json(path).items()}


def read_curve(path) -> RationalPlaneCurve:
    return RationalPlaneCurve.from_json(read_json(path))


def read_loop(path) -> DHLoop:
    return DHLoop.from_json(read_json(path))


def read_multipod(path):
    """Legs from multipod JSON; ``lengths`` may be omitted (then ``None`` is returned for them)."""
    obj = read_json(path)
    base = np.asarray(obj["base"], dtype=float)
    plat = np.asarray(obj["platform"], dtype=float)
    if base.shape != plat.shape or base.shape[1] != 3:
        raise ValueError("base and platform must be lists of 3-vectors of equal length")
    lengths = obj.get("lengths")
    if lengths is None:
        return base, plat, None
    if len(lengths) != len(base):
        raise ValueError("one length per leg required")
    return base, plat, [Leg(a, b, d) for a, b, d in zip(base, plat, lengths)]


def multipod_json(legs: Sequence[Leg]) -> dict:
    return {"base": [g.a.tolist() for g in legs], "platform": [g.b.tolist() for g in legs],
            "lengths": [g.d for g in legs]}


def read_motion_poly(path):
    """Motion polynomial from ``{"coeffs": [[8 numbers], ...]}`` (lowest degree first)."""
    from .ncpoly import MotionPoly

    obj = read_json(path)
    return MotionPoly(np.asarray(obj["coeffs"], dtype=float))


def motion_poly_json(P) -> dict:
    return {"coeffs": np.asarray(P.coeffs).tolist()}


def maybe(path: Optional[str], writer, *args) -> None:
    if path:
        writer(path, *args)
