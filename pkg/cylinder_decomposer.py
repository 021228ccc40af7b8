"""
Cylinder Decomposer
Splits a completely periodic direction into cylinders bounded by saddle connections
"""
import logging
from collections import defaultdict
from math import hypot
from typing import Dict, List, Optional, Tuple

from config import DYNAMICS_CONFIG, TOLERANCES
from errors import BudgetExhausted, NoCylinderDecomposition
from flow_tracer import STOPPED, FlowTracer, Segment, unit
from models import Cylinder, Point, SaddleConnection, TerminationReason
from translation_surface import TranslationSurface, point_segment_distance

logger = logging.getLogger(__name__)

# where along a saddle connection the height probe starts; any interior point works
PROBE_FRACTION = 0.381966


class Separatrix:
    def __init__(self, connection: SaddleConnection, segments: List[Segment]):
        self.connection = connection
        self.segments = segments

    def point_at(self, fraction: float) -> Tuple[int, Point]:
        target = fraction * self.connection.length
        walked = 0.0
        for f, p, q in self.segments:
            step = hypot(q[0] - p[0], q[1] - p[1])
            if walked + step >= target:
                r = (target - walked) / step
                return f, (p[0] + r * (q[0] - p[0]), p[1] + r * (q[1] - p[1]))
            walked += step
        f, _, q = self.segments[-1]
        return f, q


class CylinderDecomposer:
    def __init__(self, surface: TranslationSurface, direction: Point, max_crossings: Optional[int] = None):
        self.surface = surface
        self.u = unit(direction)
        self.n = (-self.u[1], self.u[0])
        self.singular = surface.singular_classes()
        self.tracer = FlowTracer(surface, stop_classes=self.singular)
        self.max_crossings = max_crossings or DYNAMICS_CONFIG["separatrix_crossings"]
        scale = max(1.0, surface.area ** 0.5)
        self.eps = TOLERANCES["length"] * 100 * scale
        self.pieces: Dict[int, List[Tuple[Point, Point]]] = defaultdict(list)

    def separatrices(self) -> List[Separatrix]:
        """Every outgoing separatrix in the direction, each closed into a saddle connection"""
        found = []
        for c in self.singular:
            for corner in self.surface.corners_for_direction(c, self.u):
                raw = self.tracer.trace(corner[0], (0.0, 0.0), self.u, start_corner=corner,
                                        max_crossings=self.max_crossings, closure=False)
                if raw.termination != TerminationReason.SADDLE_HIT.value:
                    raise BudgetExhausted(
                        f"separatrix from class {c} did not reach a singularity within "
                        f"{self.max_crossings} edge crossings", separatrix=(c, corner)
                    )
                found.append(Separatrix(
                    SaddleConnection(
                        start_class=c,
                        end_class=raw.hit_class,
                        holonomy=(raw.length * self.u[0], raw.length * self.u[1]),
                        length=raw.length,
                    ),
                    raw.segments,
                ))
        logger.debug(f"{len(found)} separatrices closed in direction {self.u}")
        return found

    def _register(self, separatrices: List[Separatrix]):
        s = self.surface
        for sep in separatrices:
            for f, p, q in sep.segments:
                self.pieces[f].append((p, q))
                pts = s.face_points[f]
                m = len(pts)
                for i in range(m):
                    a, b = pts[i], pts[(i + 1) % m]
                    if point_segment_distance(p, a, b) < self.eps and point_segment_distance(q, a, b) < self.eps:
                        g, _ = s.pairing[(f, i)]
                        sx, sy = s.shifts[(f, i)]
                        self.pieces[g].append(((p[0] + sx, p[1] + sy), (q[0] + sx, q[1] + sy)))

    def height_to_boundary(self, f: int, x: Point, v: Point) -> float:
        """Distance from x along v to the first saddle-connection piece"""
        hit: List[float] = []
        walked = [0.0]
        ux, uy = self.u

        def visitor(face: int, p: Point, q: Point) -> bool:
            step = hypot(q[0] - p[0], q[1] - p[1])
            best = None
            for a, b in self.pieces.get(face, ()):
                # pieces run along u, the probe along v = +-n
                tau = ((a[0] - p[0]) * v[0] + (a[1] - p[1]) * v[1])
                if tau <= self.eps or tau > step + self.eps:
                    continue
                cx, cy = p[0] + tau * v[0], p[1] + tau * v[1]
                along = (cx - a[0]) * ux + (cy - a[1]) * uy
                span = (b[0] - a[0]) * ux + (b[1] - a[1]) * uy
                if -self.eps <= along <= span + self.eps and (best is None or tau < best):
                    best = tau
            if best is not None:
                hit.append(walked[0] + best)
                return True
            walked[0] += step
            return False

        raw = self.tracer.trace(f, x, v, max_len=self.surface.area / self.eps, max_crossings=self.max_crossings,
                                visitor=visitor, record=False, closure=False)
        if raw.termination != STOPPED or not hit:
            raise NoCylinderDecomposition(f"no saddle connection found across direction {self.u}")
        return hit[0]

    def _core(self, f: int, x: Point, v: Point, height: float):
        raw = self.tracer.trace(f, x, v, max_len=height / 2, record=False, closure=False)
        core_face, core_point = raw.end
        loop = self.tracer.trace(core_face, core_point, self.u, max_crossings=self.max_crossings)
        if loop.termination != TerminationReason.CLOSED.value:
            raise NoCylinderDecomposition(f"core curve at {core_point} did not close ({loop.termination})")
        return core_face, core_point, loop

    def _on_core(self, face: int, point: Point, segments: List[Segment]) -> bool:
        return any(f == face and point_segment_distance(point, p, q) < self.eps * 10 for f, p, q in segments)

    def decompose(self) -> List[Cylinder]:
        logger.info(f"Step 1: Tracing separatrices in direction {self.u}")
        separatrices = self.separatrices()
        self._register(separatrices)

        logger.info("Step 2: Measuring cylinders above each saddle connection")
        cylinders: List[dict] = []
        for sep in separatrices:
            f, x = sep.point_at(PROBE_FRACTION)
            height = self.height_to_boundary(f, x, self.n)
            core_face, core_point, loop = self._core(f, x, self.n, height)
            owner = next((c for c in cylinders if self._on_core(core_face, core_point, c["core"])), None)
            if owner is None:
                owner = {"height": height, "circumference": loop.length, "core": loop.segments,
                         "bottom": [], "top": []}
                cylinders.append(owner)
            owner["bottom"].append(sep.connection)

        logger.info("Step 3: Assigning top boundaries")
        below = (-self.n[0], -self.n[1])
        for sep in separatrices:
            f, x = sep.point_at(PROBE_FRACTION)
            height = self.height_to_boundary(f, x, below)
            face, point = self.tracer.trace(f, x, below, max_len=height / 2, record=False, closure=False).end
            owner = next((c for c in cylinders if self._on_core(face, point, c["core"])), None)
            if owner is None:
                raise NoCylinderDecomposition(f"saddle connection {sep.connection.holonomy} bounds no cylinder below")
            owner["top"].append(sep.connection)

        result = [
            Cylinder(direction=self.u, circumference=c["circumference"], height=c["height"],
                     bottom_boundary=c["bottom"], top_boundary=c["top"])
            for c in cylinders
        ]
        total = sum(c.area for c in result)
        error = abs(total - self.surface.area) / self.surface.area
        if error > 1e-6:
            raise NoCylinderDecomposition(
                f"cylinders cover area {total:.9g} of {self.surface.area:.9g} in direction {self.u}"
            )
        result.sort(key=lambda c: (round(c.circumference, 9), round(c.height, 9)))
        logger.info(f"Step 4: {len(result)} cylinder(s), area error {error:.2e}")
        return result


def cylinder_decomposition(surface: TranslationSurface, direction: Point,
                           max_crossings: Optional[int] = None) -> List[Cylinder]:
    return CylinderDecomposer(surface, direction, max_crossings).decompose()
