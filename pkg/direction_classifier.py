"""
Direction Classifier
Labels a direction as periodic (cylinder decomposition found) or minimal
(test orbits equidistribute over k*k equal-area bins of the surface)
"""
import logging
from itertools import product
from math import cos, floor, pi, sin
from typing import List, Optional

import numpy as np
import pandas as pd

from config import DYNAMICS_CONFIG, SCAN_CONFIG
from cylinder_decomposer import cylinder_decomposition
from errors import BudgetExhausted, NoCylinderDecomposition
from flow_tracer import FlowTracer, unit
from models import DirectionReport, DirectionVerdict, DiscrepancySample, Point, TerminationReason
from saddle_connection_finder import connection_directions, find_saddle_connections
from translation_surface import TranslationSurface, point_in_polygon

logger = logging.getLogger(__name__)


def clip_polygon(pts: List[Point], x0: float, x1: float, y0: float, y1: float) -> List[Point]:
    """Sutherland-Hodgman clip of a polygon to an axis-parallel rectangle"""
    def clip(poly, inside, cut):
        out = []
        for i in range(len(poly)):
            cur, prev = poly[i], poly[i - 1]
            if inside(cur):
                if not inside(prev):
                    out.append(cut(prev, cur))
                out.append(cur)
            elif inside(prev):
                out.append(cut(prev, cur))
        return out

    def at_x(x):
        return lambda a, b: (x, a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0]))

    def at_y(y):
        return lambda a, b: (a[0] + (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]), y)

    poly = list(pts)
    for inside, cut in (
        (lambda p: p[0] >= x0, at_x(x0)),
        (lambda p: p[0] <= x1, at_x(x1)),
        (lambda p: p[1] >= y0, at_y(y0)),
        (lambda p: p[1] <= y1, at_y(y1)),
    ):
        if not poly:
            break
        poly = clip(poly, inside, cut)
    return poly


def polygon_area(pts: List[Point]) -> float:
    if len(pts) < 3:
        return 0.0
    return 0.5 * abs(sum(pts[i - 1][0] * pts[i][1] - pts[i][0] * pts[i - 1][1] for i in range(len(pts))))


def z_order(a: int, b: int) -> int:
    """Interleave the bits of a and b so nearby cells sort next to each other"""
    key = 0
    for bit in range(16):
        key |= ((a >> bit) & 1) << (2 * bit + 1) | ((b >> bit) & 1) << (2 * bit)
    return key


class CellGrid:
    """
    k x k partition of the whole face complex: a fine k x k grid per face,
    pooled along a z-order walk into at most k*k bins of equal area
    """

    def __init__(self, surface: TranslationSurface, k: int):
        self.k = k
        self.boxes = []
        fine = []
        for pts in surface.face_points:
            xs, ys = [p[0] for p in pts], [p[1] for p in pts]
            x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
            self.boxes.append((x0, x1, y0, y1))
            dx, dy = (x1 - x0) / k, (y1 - y0) / k
            for a in range(k):
                for b in range(k):
                    cell = clip_polygon(pts, x0 + a * dx, x0 + (a + 1) * dx, y0 + b * dy, y0 + (b + 1) * dy)
                    fine.append(polygon_area(cell))
        fine = np.array(fine)

        walk = sorted(product(range(k), repeat=2), key=lambda ab: z_order(*ab))
        order = np.array([(f * k + a) * k + b for f in range(len(self.boxes)) for a, b in walk])
        # a fine cell joins the bin holding the midpoint of its area along the walk
        mid = np.cumsum(fine[order]) - fine[order] / 2
        target = fine.sum() / (k * k)
        labels = np.empty(len(fine), dtype=int)
        labels[order] = np.minimum((mid / target).astype(int), k * k - 1)
        _, self.labels = np.unique(labels, return_inverse=True)
        self.areas = np.bincount(self.labels, weights=fine)
        self.fractions = self.areas / self.areas.sum()
        logger.debug(f"{len(fine)} fine cells pooled into {len(self.areas)} bins")

    def cell(self, f: int, p: Point) -> int:
        x0, x1, y0, y1 = self.boxes[f]
        a = min(self.k - 1, max(0, floor((p[0] - x0) / (x1 - x0) * self.k)))
        b = min(self.k - 1, max(0, floor((p[1] - y0) / (y1 - y0) * self.k)))
        return int(self.labels[(f * self.k + a) * self.k + b])

    @property
    def coverage_bound(self) -> float:
        """Discrepancy any unvisited bin forces on its own"""
        return float(self.fractions.min())

    def discrepancy(self, weights: np.ndarray) -> float:
        total = weights.sum()
        if total <= 0:
            return 1.0
        return float(np.max(np.abs(weights / total - self.fractions)))


class DirectionClassifier:
    def __init__(self, surface: TranslationSurface, seed: int = 0,
                 orbits: int = DYNAMICS_CONFIG["test_orbits"], grid_k: int = DYNAMICS_CONFIG["grid_k"]):
        self.surface = surface
        self.rng = np.random.default_rng(seed)
        self.orbits = orbits
        self.grid = CellGrid(surface, grid_k)
        self.tracer = FlowTracer(surface)
        self.face_weights = np.array([f.area for f in surface.faces]) / surface.area

    def random_start(self):
        """Area-weighted uniform point of the surface"""
        f = int(self.rng.choice(len(self.surface.faces), p=self.face_weights))
        x0, x1, y0, y1 = self.grid.boxes[f]
        pts = self.surface.face_points[f]
        while True:
            p = (float(self.rng.uniform(x0, x1)), float(self.rng.uniform(y0, y1)))
            if point_in_polygon(p, pts):
                return f, p

    def equidistribution(self, u: Point, budget: int) -> List[DiscrepancySample]:
        weights = np.zeros(len(self.grid.areas))
        starts = [self.random_start() for _ in range(self.orbits)]
        alive = [True] * self.orbits
        marks = sorted({max(1, int(round(c * budget))) for c in DYNAMICS_CONFIG["checkpoints"]})
        samples = []
        done = 0

        def visitor(f, p, q):
            r = self.rng.random()
            point = (p[0] + r * (q[0] - p[0]), p[1] + r * (q[1] - p[1]))
            weights[self.grid.cell(f, point)] += ((q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2) ** 0.5
            return False

        for mark in marks:
            for k in range(self.orbits):
                if not alive[k]:
                    continue
                f, p = starts[k]
                raw = self.tracer.trace(f, p, u, max_crossings=mark - done, visitor=visitor,
                                        record=False, closure=False)
                if raw.termination == TerminationReason.SADDLE_HIT.value:
                    alive[k] = False
                starts[k] = raw.end
            done = mark
            samples.append(DiscrepancySample(crossings=mark, discrepancy=self.grid.discrepancy(weights)))
            logger.debug(f"D_{self.grid.k}({mark}) = {samples[-1].discrepancy:.5f}")
        return samples

    def classify(self, direction: Point, budget: Optional[int] = None) -> DirectionReport:
        u = unit(direction)
        try:
            cylinders = cylinder_decomposition(self.surface, u)
            total = sum(c.area for c in cylinders)
            return DirectionReport(
                direction=u,
                verdict=DirectionVerdict.PERIODIC,
                cylinders=cylinders,
                area_error=abs(total - self.surface.area) / self.surface.area,
                note=f"{len(cylinders)} cylinder(s) fill the surface",
            )
        except (NoCylinderDecomposition, BudgetExhausted) as e:
            note = str(e)
        budget = budget or SCAN_CONFIG["default_budget"]
        samples = self.equidistribution(u, budget)
        first, last = samples[0].discrepancy, samples[-1].discrepancy
        threshold = DYNAMICS_CONFIG["discrepancy_threshold"]
        minimal = last < min(threshold, self.grid.coverage_bound) and last < first
        return DirectionReport(
            direction=u,
            verdict=DirectionVerdict.MINIMAL if minimal else DirectionVerdict.INCONCLUSIVE,
            discrepancy=samples,
            note=note,
        )


def classify_direction(surface: TranslationSurface, direction: Point, budget: Optional[int] = None,
                       seed: int = 0) -> DirectionReport:
    return DirectionClassifier(surface, seed=seed).classify(direction, budget)


def scan(surface: TranslationSurface, n_dirs: int = SCAN_CONFIG["default_directions"],
         budget: int = SCAN_CONFIG["default_budget"], seed: int = 0,
         sc_bound: float = SCAN_CONFIG["sc_bound"]) -> pd.DataFrame:
    """Classify evenly spread directions plus every saddle-connection direction up to sc_bound"""
    directions = [((cos(pi * k / n_dirs), sin(pi * k / n_dirs)), "grid") for k in range(n_dirs)]
    directions += [(u, "saddle") for u, _ in connection_directions(find_saddle_connections(surface, sc_bound))]
    classifier = DirectionClassifier(surface, seed=seed)
    rows = []
    for u, source in directions:
        report = classifier.classify(u, budget)
        rows.append({
            "dx": round(u[0], 12),
            "dy": round(u[1], 12),
            "source": source,
            "verdict": report.verdict,
            "cylinders": len(report.cylinders),
            "discrepancy": report.discrepancy[-1].discrepancy if report.discrepancy else None,
        })
    logger.info(f"Scanned {len(rows)} directions")
    return pd.DataFrame(rows)
