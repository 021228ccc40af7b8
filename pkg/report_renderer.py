"""
Report Renderer
Flattens report models to sorted "key = value" text and draws layouts as SVG
"""
import logging
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
from jinja2 import Environment, FileSystemLoader, StrictUndefined
from pydantic import BaseModel

from config import REPORT_CONFIG, TEMPLATES_DIR
from models import Trajectory

logger = logging.getLogger(__name__)

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
    autoescape=False,
)

FILLS = ("#eaf2f8", "#fdf2e9", "#e9f7ef", "#f4ecf7")


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        text = f"{float(value):.{REPORT_CONFIG['float_digits']}g}"
        return "0" if text == "-0" else text
    if isinstance(value, Enum):
        return str(value.value)
    if value is None:
        return "none"
    return str(value)


def flatten(data: Any, prefix: str = "") -> Dict[str, str]:
    """Dotted keys for nested models, dicts and lists; list items are indexed"""
    if isinstance(data, BaseModel):
        data = data.model_dump()
    out: Dict[str, str] = {}
    if isinstance(data, dict):
        for key, value in data.items():
            out.update(flatten(value, f"{prefix}.{key}" if prefix else str(key)))
    elif isinstance(data, (list, tuple)) and data and all(isinstance(v, (int, float)) for v in data):
        out[prefix] = "(" + ", ".join(format_value(v) for v in data) + ")"
    elif isinstance(data, (list, tuple)):
        if not data:
            out[prefix] = "[]"
        width = len(str(len(data) - 1))
        for i, value in enumerate(data):
            out.update(flatten(value, f"{prefix}.{i:0{width}d}"))
    else:
        out[prefix] = format_value(data)
    return out


def render_report(report: Any, title: str) -> str:
    items = sorted(flatten(report).items())
    return _env.get_template("report.txt.j2").render(title=title, items=items)


def render_frame(frame: pd.DataFrame, title: str) -> str:
    """One key per cell, keyed rows.<index>.<column>"""
    return render_report({"rows": frame.to_dict(orient="records"), "count": len(frame)}, title)


class SvgCanvas:
    """Maps plane coordinates into a square image, y up"""

    def __init__(self, points: Iterable[Tuple[float, float]]):
        pts = np.array(list(points), dtype=float)
        self.lo = pts.min(axis=0)
        span = float(max(np.ptp(pts[:, 0]), np.ptp(pts[:, 1]), 1e-12))
        self.size = REPORT_CONFIG["svg_size"]
        self.margin = REPORT_CONFIG["svg_margin"]
        self.scale = (self.size - 2 * self.margin) / span

    def xy(self, p) -> Tuple[str, str]:
        x = self.margin + (p[0] - self.lo[0]) * self.scale
        y = self.size - self.margin - (p[1] - self.lo[1]) * self.scale
        return f"{x:.2f}", f"{y:.2f}"


def render_svg(polygons: List[Tuple[str, List[Tuple[float, float]]]],
               segments: Optional[List[Tuple[Tuple[float, float], Tuple[float, float]]]] = None,
               title: str = "layout",
               edge_labels: Optional[List[Tuple[str, Tuple[float, float]]]] = None) -> str:
    segments = segments or []
    edge_labels = edge_labels or []
    everything = [p for _, pts in polygons for p in pts] + [p for seg in segments for p in seg]
    canvas = SvgCanvas(everything)
    polys = []
    for k, (label, pts) in enumerate(polygons):
        cx, cy = canvas.xy(np.mean(np.array(pts), axis=0))
        polys.append({
            "points": " ".join(",".join(canvas.xy(p)) for p in pts),
            "fill": FILLS[k % len(FILLS)],
            "label": label,
            "cx": cx,
            "cy": cy,
        })
    lines = []
    for a, b in segments:
        (x1, y1), (x2, y2) = canvas.xy(a), canvas.xy(b)
        lines.append({"x1": x1, "y1": y1, "x2": x2, "y2": y2})
    marks = [dict(zip(("x", "y"), canvas.xy(p)), text=text) for text, p in edge_labels]
    return _env.get_template("layout.svg.j2").render(
        title=title, width=canvas.size, height=canvas.size, polygons=polys, lines=lines, edge_labels=marks
    )


def pairing_labels(surface) -> List[Tuple[str, Tuple[float, float]]]:
    """One label per glued edge pair, placed on both edges just inside their faces"""
    labels = []
    pairs = sorted({tuple(sorted((e, partner))) for e, partner in surface.pairing.items()})
    for k, pair in enumerate(pairs):
        for f, i in pair:
            pts = np.array(surface.face_points[f], dtype=float)
            mid = (pts[i] + pts[(i + 1) % len(pts)]) / 2
            spot = mid + 0.15 * (pts.mean(axis=0) - mid)
            labels.append((f"e{k}", (float(spot[0]), float(spot[1]))))
    return labels


def surface_svg(surface, trajectory: Optional[Trajectory] = None) -> str:
    polygons = [(f.label, pts) for f, pts in zip(surface.faces, surface.face_points)]
    segments = [(s.entry, s.exit) for s in trajectory.segments] if trajectory else None
    return render_svg(polygons, segments, title=surface.name, edge_labels=pairing_labels(surface))


def garage_svg(garage, trajectory: Optional[Trajectory] = None) -> str:
    polygons = [(tile.label, [tuple(p) for p in garage.tile_vertices(t)]) for t, tile in enumerate(garage.tiles)]
    segments = [(s.entry, s.exit) for s in trajectory.segments] if trajectory else None
    return render_svg(polygons, segments, title=garage.name)
