"""
Saddle Connection Finder
Enumerates saddle connections up to a length bound by developing triangle
chains out of every singular corner, pruned by the visible angular window
"""
import logging
from collections import Counter
from math import atan2, hypot
from typing import Dict, List, Tuple

from flow_tracer import FlowTracer
from models import HolonomyVector, Point, SaddleConnection, TerminationReason
from translation_surface import TranslationSurface, point_segment_distance

logger = logging.getLogger(__name__)

HOLONOMY_DIGITS = 7


def _cross(a: Point, b: Point) -> float:
    return a[0] * b[1] - a[1] * b[0]


def _clip(a: Point, b: Point, d: Point) -> float:
    den = _cross(d, (b[0] - a[0], b[1] - a[1]))
    if den == 0:
        return 0.0
    return min(1.0, max(0.0, -_cross(d, a) / den))


def _window_distance(a: Point, b: Point, right: Point, left: Point) -> float:
    """Distance from the origin to the part of segment ab seen between the two rays"""
    lo, hi = sorted((_clip(a, b, right), _clip(a, b, left)))
    ex, ey = b[0] - a[0], b[1] - a[1]
    return point_segment_distance((0.0, 0.0), (a[0] + lo * ex, a[1] + lo * ey), (a[0] + hi * ex, a[1] + hi * ey))


class SaddleConnectionFinder:
    """
    Each corner of a singular class sees a sector bounded by its outgoing edge
    (included) and its incoming edge (excluded). A window (right, left) of
    directions is pushed across the opposite edge into the next triangle and
    split at that triangle's far vertex.
    """

    def __init__(self, surface: TranslationSurface):
        self.surface = surface
        self.tri = surface.triangulate()
        self.singular = set(self.tri.singular_classes())
        self.tracer = FlowTracer(self.tri, stop_classes=self.singular)
        self.rel_eps = 1e-10

    def _original_class(self, tri_class: int) -> int:
        corner = self.tri.classes[tri_class][0]
        if self.tri is self.surface:
            return tri_class
        return self.surface.corner_class[self.tri.parent_corners[corner]]

    def _record(self, found: List[SaddleConnection], start_class: int, corner: Tuple[int, int],
                v: Point, v_class: int, max_len: float):
        if v_class in self.singular:
            length = hypot(*v)
            found.append(SaddleConnection(
                start_class=self._original_class(start_class),
                end_class=self._original_class(v_class),
                holonomy=(float(v[0]), float(v[1])),
                length=length,
            ))
            return
        # regular vertex in view: the ray continues through it
        length = hypot(*v)
        u = (v[0] / length, v[1] / length)
        raw = self.tracer.trace(0, (0.0, 0.0), u, max_len=max_len * (1 + 1e-12),
                                start_corner=corner, record=False, closure=False)
        if raw.termination == TerminationReason.SADDLE_HIT.value and raw.length <= max_len * (1 + 1e-12):
            found.append(SaddleConnection(
                start_class=self._original_class(start_class),
                end_class=self._original_class(raw.hit_class),
                holonomy=(raw.length * u[0], raw.length * u[1]),
                length=raw.length,
            ))

    def _inside(self, right: Point, left: Point, v: Point) -> Tuple[bool, bool]:
        nv = hypot(*v)
        return (_cross(right, v) > self.rel_eps * hypot(*right) * nv,
                _cross(v, left) > self.rel_eps * hypot(*left) * nv)

    def _develop(self, c: int, corner: Tuple[int, int], max_len: float, found: List[SaddleConnection]):
        tri = self.tri
        f, i = corner
        pts = tri.face_points[f]
        ox, oy = pts[i]
        shift = (-ox, -oy)
        right = (pts[(i + 1) % 3][0] - ox, pts[(i + 1) % 3][1] - oy)
        left = (pts[(i + 2) % 3][0] - ox, pts[(i + 2) % 3][1] - oy)
        if hypot(*right) <= max_len:
            self._record(found, c, corner, right, tri.corner_class[(f, (i + 1) % 3)], max_len)

        stack = [(f, (i + 1) % 3, shift, right, left)]
        while stack:
            f, e, (tx, ty), right, left = stack.pop()
            pts = tri.face_points[f]
            a = (pts[e][0] + tx, pts[e][1] + ty)
            b = (pts[(e + 1) % 3][0] + tx, pts[(e + 1) % 3][1] + ty)
            if _window_distance(a, b, right, left) > max_len:
                continue
            g, j = tri.pairing[(f, e)]
            sx, sy = tri.shifts[(f, e)]
            t2 = (tx - sx, ty - sy)
            far = tri.face_points[g][(j + 2) % 3]
            v = (far[0] + t2[0], far[1] + t2[1])
            in_right, in_left = self._inside(right, left, v)
            if in_right and in_left:
                if hypot(*v) <= max_len:
                    self._record(found, c, corner, v, tri.corner_class[(g, (j + 2) % 3)], max_len)
                stack.append((g, (j + 1) % 3, t2, right, v))
                stack.append((g, (j + 2) % 3, t2, v, left))
            elif not in_right:
                stack.append((g, (j + 2) % 3, t2, right, left))
            else:
                stack.append((g, (j + 1) % 3, t2, right, left))

    def find(self, max_len: float) -> List[SaddleConnection]:
        if max_len <= 0:
            raise ValueError("length bound must be positive")
        found: List[SaddleConnection] = []
        for c in sorted(self.singular):
            for corner in self.tri.classes[c]:
                self._develop(c, corner, max_len, found)
        found.sort(key=lambda s: (round(s.length, HOLONOMY_DIGITS), atan2(s.holonomy[1], s.holonomy[0])))
        logger.info(f"Found {len(found)} saddle connections up to length {max_len}")
        return found


def find_saddle_connections(surface: TranslationSurface, max_len: float) -> List[SaddleConnection]:
    return SaddleConnectionFinder(surface).find(max_len)


def holonomy_key(v: Point) -> Tuple[float, float]:
    return round(v[0], HOLONOMY_DIGITS) + 0.0, round(v[1], HOLONOMY_DIGITS) + 0.0


def group_holonomies(connections: List[SaddleConnection]) -> List[HolonomyVector]:
    counts: Counter = Counter(holonomy_key(c.holonomy) for c in connections)
    vectors = [HolonomyVector(dx=dx, dy=dy, multiplicity=k) for (dx, dy), k in counts.items()]
    return sorted(vectors, key=lambda h: (round(h.length, HOLONOMY_DIGITS), atan2(h.dy, h.dx)))


def saddle_connections(surface: TranslationSurface, max_len: float) -> List[HolonomyVector]:
    """Holonomy vectors of all saddle connections of length at most max_len"""
    return group_holonomies(find_saddle_connections(surface, max_len))


def connection_directions(connections: List[SaddleConnection]) -> List[Tuple[Point, float]]:
    """Unoriented unit directions of the connections, with the shortest length in each"""
    shortest: Dict[Tuple[float, float], Tuple[Point, float]] = {}
    for c in connections:
        dx, dy = c.holonomy
        if dy < 0 or (dy == 0 and dx < 0):
            dx, dy = -dx, -dy
        u = (dx / c.length, dy / c.length)
        key = (round(u[0], 9) + 0.0, round(u[1], 9) + 0.0)
        if key not in shortest or c.length < shortest[key][1]:
            shortest[key] = (u, c.length)
    return sorted(shortest.values(), key=lambda item: (round(item[1], HOLONOMY_DIGITS), item[0]))
