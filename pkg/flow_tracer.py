"""
Flow Tracer
Straight-line flow on translation surfaces and billiard flow on garages
"""
import logging
from math import hypot, inf
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Set, Tuple

from config import DYNAMICS_CONFIG, TOLERANCES
from errors import StartAtSingularity, StartOnBoundary, SurfaceError
from exact_core import DihedralElement
from garage_model import Garage
from models import Point, TerminationReason, Trajectory, TrajectorySegment
from translation_surface import TranslationSurface, point_in_polygon, point_segment_distance

logger = logging.getLogger(__name__)

Segment = Tuple[int, Point, Point]
Visitor = Callable[[int, Point, Point], bool]

STOPPED = "stopped"  # a visitor ended the trace


class RawTrace(NamedTuple):
    segments: List[Segment]
    length: float
    termination: str
    hit_class: Optional[int]
    hit_corner: Optional[Tuple[int, int]]
    crossings: int
    end: Tuple[int, Point]


def unit(direction: Iterable[float]) -> Point:
    dx, dy = direction
    norm = hypot(dx, dy)
    if norm == 0:
        raise ValueError("direction must be nonzero")
    return dx / norm, dy / norm


def first_exit(pts: List[Point], p: Point, u: Point, skip: Set[int]) -> Tuple[float, int, float]:
    """(distance, edge, edge parameter) where the ray p + t*u leaves the CCW polygon"""
    ux, uy = u
    px, py = p
    m = len(pts)
    best_t, best_i, best_s = inf, -1, 0.0
    for i in range(m):
        if i in skip:
            continue
        ax, ay = pts[i]
        bx, by = pts[(i + 1) % m]
        ex, ey = bx - ax, by - ay
        den = ux * ey - uy * ex
        if den <= 1e-15 * (abs(ex) + abs(ey)):
            continue
        dx, dy = ax - px, ay - py
        t = (dx * ey - dy * ex) / den
        s = (dx * uy - dy * ux) / den
        if t > -1e-12 and -1e-9 <= s <= 1 + 1e-9 and t < best_t:
            best_t, best_i, best_s = t, i, s
    return best_t, best_i, best_s


class FlowTracer:
    """Straight-line flow; stops at the given vertex classes (cone points by default)"""

    def __init__(self, surface: TranslationSurface, stop_classes: Optional[Iterable[int]] = None):
        self.surface = surface
        self.stop = set(surface.cone_classes if stop_classes is None else stop_classes)
        self.eps_sing = TOLERANCES["sing"]
        self.eps_close = TOLERANCES["close"]
        self.eps_len = TOLERANCES["length"]

    def _enter_corner(self, vertex_class: int, u: Point) -> Tuple[int, Point, Set[int], Tuple[int, int]]:
        corners = self.surface.corners_for_direction(vertex_class, u)
        if not corners:
            raise SurfaceError(f"no corner of class {vertex_class} contains direction {u}")
        g, j = corners[0]
        pts = self.surface.face_points[g]
        return g, pts[j], {(j - 1) % len(pts), j}, (g, j)

    def resolve_start(self, f: int, p: Point, u: Point):
        """Normalize a start point: corners and outward-facing edges move to where the flow begins"""
        s = self.surface
        pts = s.face_points[f]
        m = len(pts)
        for i, a in enumerate(pts):
            if hypot(p[0] - a[0], p[1] - a[1]) < self.eps_sing:
                c = s.corner_class[(f, i)]
                if c in self.stop:
                    raise StartAtSingularity(f"start point {p} is the cone point of class {c}")
                return self._enter_corner(c, u)
        for i in range(m):
            a, b = pts[i], pts[(i + 1) % m]
            if point_segment_distance(p, a, b) < self.eps_len * 10:
                ex, ey = b[0] - a[0], b[1] - a[1]
                if u[0] * ey - u[1] * ex > 0:
                    g, j = s.pairing[(f, i)]
                    sx, sy = s.shifts[(f, i)]
                    return g, (p[0] + sx, p[1] + sy), {j}, None
                return f, p, {i}, None
        if not s.face_contains(f, p):
            raise SurfaceError(f"start point {p} is not in face {f}")
        return f, p, set(), None

    def trace(self, f: int, p: Point, u: Point, max_len: float = inf,
              max_crossings: Optional[int] = None, start_corner: Optional[Tuple[int, int]] = None,
              visitor: Optional[Visitor] = None, record: bool = True, closure: bool = True) -> RawTrace:
        s = self.surface
        if max_crossings is None:
            max_crossings = DYNAMICS_CONFIG["max_crossings"]
        if start_corner is not None:
            f, i = start_corner
            pts = s.face_points[f]
            p = pts[i]
            skip = {(i - 1) % len(pts), i}
        else:
            f, p, skip, start_corner = self.resolve_start(f, p, u)
        start_f, start_p = f, p
        ux, uy = u
        segments: List[Segment] = []
        length = 0.0
        crossings = 0

        def done(termination, hit_class=None, hit_corner=None, end=None):
            return RawTrace(segments, length, termination, hit_class, hit_corner, crossings, end or (f, p))

        while True:
            pts = s.face_points[f]
            t, i, e = first_exit(pts, p, u, skip)
            if i < 0:
                raise SurfaceError(f"flow left face {f} without crossing an edge")
            remaining = max_len - length

            if closure and f == start_f:
                tau = (start_p[0] - p[0]) * ux + (start_p[1] - p[1]) * uy
                off = abs((start_p[0] - p[0]) * uy - (start_p[1] - p[1]) * ux)
                if self.eps_close < tau <= min(t, remaining) + self.eps_close and off < self.eps_close:
                    if record:
                        segments.append((f, p, start_p))
                    length += tau
                    return done(TerminationReason.CLOSED.value, end=(f, start_p))

            if t >= remaining:
                q = (p[0] + remaining * ux, p[1] + remaining * uy)
                if record:
                    segments.append((f, p, q))
                if visitor is not None:
                    visitor(f, p, q)
                length = max_len
                return done(TerminationReason.BUDGET_EXHAUSTED.value, end=(f, q))

            a, b = pts[i], pts[(i + 1) % len(pts)]
            edge_len = hypot(b[0] - a[0], b[1] - a[1])
            corner = None
            if e * edge_len < self.eps_sing:
                corner = i
            elif (1 - e) * edge_len < self.eps_sing:
                corner = (i + 1) % len(pts)
            q = pts[corner] if corner is not None else (p[0] + t * ux, p[1] + t * uy)
            if record:
                segments.append((f, p, q))
            length += t
            if visitor is not None and visitor(f, p, q):
                return done(STOPPED, end=(f, q))

            if corner is not None:
                c = s.corner_class[(f, corner)]
                if c in self.stop:
                    p = q
                    return done(TerminationReason.SADDLE_HIT.value, c, (f, corner))
                f, p, skip, entered = self._enter_corner(c, u)
                if closure and entered == start_corner:
                    return done(TerminationReason.CLOSED.value)
            else:
                g, j = s.pairing[(f, i)]
                sx, sy = s.shifts[(f, i)]
                f, p, skip = g, (q[0] + sx, q[1] + sy), {j}
                if closure and f == start_f and hypot(p[0] - start_p[0], p[1] - start_p[1]) < self.eps_close:
                    return done(TerminationReason.CLOSED.value)
            crossings += 1
            if crossings >= max_crossings:
                return done(TerminationReason.BUDGET_EXHAUSTED.value)


def _to_trajectory(raw: RawTrace, start_face: int, start: Point, u: Point) -> Trajectory:
    return Trajectory(
        start_face=start_face,
        start=start,
        direction=u,
        segments=[TrajectorySegment(face=f, entry=p, exit=q) for f, p, q in raw.segments],
        total_length=raw.length,
        termination=raw.termination,
        hit_class=raw.hit_class,
    )


def flow_trace(surface: TranslationSurface, start: Point, direction: Point, max_len: float,
               face: Optional[int] = None, stop_classes: Optional[Iterable[int]] = None) -> Trajectory:
    """Trace the straight-line flow from a point of the surface's layout"""
    u = unit(direction)
    f = surface.face_containing(start) if face is None else face
    raw = FlowTracer(surface, stop_classes).trace(f, tuple(start), u, max_len)
    logger.debug(f"flow_trace: {len(raw.segments)} segments, {raw.termination} after {raw.length:.6g}")
    return _to_trajectory(raw, f, tuple(start), u)


class BilliardTable:
    """Tiles of a garage as CCW polygons with internal neighbours and boundary reflections"""

    def __init__(self, garage: Garage):
        self.garage = garage
        m = garage.base.size
        glued = garage.glued_edges()
        self.points: List[List[Point]] = []
        self.orders: List[List[int]] = []
        self.base_edge: List[List[int]] = []
        self.local_edge: List[Dict[int, int]] = []
        for t in range(garage.tile_count):
            verts = garage.tile_vertices(t)
            order = [(-j) % m for j in range(m)] if garage.tiles[t].element.flip else list(range(m))
            self.orders.append(order)
            self.points.append([(float(verts[v][0]), float(verts[v][1])) for v in order])
            edges = [order[i] if order[(i + 1) % m] == (order[i] + 1) % m else order[(i + 1) % m] for i in range(m)]
            self.base_edge.append(edges)
            self.local_edge.append({a: i for i, a in enumerate(edges)})
        self.neighbour: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for (t, a), (t2, _) in glued.items():
            self.neighbour[(t, self.local_edge[t][a])] = (t2, self.local_edge[t2][a])
        self.class_of = garage.class_of()

    def tile_containing(self, p: Point) -> int:
        for t, pts in enumerate(self.points):
            if point_in_polygon(p, pts):
                return t
        for t, pts in enumerate(self.points):
            m = len(pts)
            if any(point_segment_distance(p, pts[i], pts[(i + 1) % m]) < 1e-9 for i in range(m)):
                return t
        raise SurfaceError(f"start point {p} lies outside the garage")

    def vertex_class(self, t: int, i: int) -> int:
        return self.class_of[(t, self.orders[t][i])]


def _reflect(u: Point, a: Point, b: Point) -> Point:
    ex, ey = b[0] - a[0], b[1] - a[1]
    norm2 = ex * ex + ey * ey
    k = 2 * (u[0] * ex + u[1] * ey) / norm2
    return k * ex - u[0], k * ey - u[1]


def billiard_trace(garage: Garage, start: Point, direction: Point,
                   max_bounces: int = DYNAMICS_CONFIG["billiard_max_bounces"],
                   tile: Optional[int] = None, max_len: float = inf) -> Trajectory:
    """
    Billiard flow inside a garage: straight inside tiles, across internal edges,
    elastic reflection at boundary edges. Segments record the unfolding copy h.
    """
    table = BilliardTable(garage)
    eps_sing, eps_close = TOLERANCES["sing"], TOLERANCES["close"]
    u0 = unit(direction)
    p = tuple(start)
    t = table.tile_containing(p) if tile is None else tile
    pts = table.points[t]
    m = len(pts)
    skip: Set[int] = set()
    for i in range(m):
        if point_segment_distance(p, pts[i], pts[(i + 1) % m]) < TOLERANCES["length"] * 10:
            if (t, i) not in table.neighbour:
                raise StartOnBoundary(f"start point {p} is on a boundary edge")
            ex, ey = pts[(i + 1) % m][0] - pts[i][0], pts[(i + 1) % m][1] - pts[i][1]
            if u0[0] * ey - u0[1] * ex > 0:
                t, j = table.neighbour[(t, i)]
                skip = {j}
                break
            skip.add(i)

    u = u0
    h = garage.base.group.identity()
    start_t = t
    segments: List[TrajectorySegment] = []
    length, bounces = 0.0, 0
    termination, hit_class = TerminationReason.BUDGET_EXHAUSTED.value, None
    while True:
        pts = table.points[t]
        m = len(pts)
        step, i, e = first_exit(pts, p, u, skip)
        if i < 0:
            raise SurfaceError(f"billiard left tile {t} without crossing an edge")
        if t == start_t and hypot(u[0] - u0[0], u[1] - u0[1]) < 1e-9:
            tau = (start[0] - p[0]) * u[0] + (start[1] - p[1]) * u[1]
            off = abs((start[0] - p[0]) * u[1] - (start[1] - p[1]) * u[0])
            if eps_close < tau <= step + eps_close and off < eps_close and tau <= max_len - length:
                segments.append(TrajectorySegment(face=t, entry=p, exit=tuple(start), element=str(h)))
                length += tau
                termination = TerminationReason.CLOSED.value
                break
        if length + step >= max_len:
            q = (p[0] + (max_len - length) * u[0], p[1] + (max_len - length) * u[1])
            segments.append(TrajectorySegment(face=t, entry=p, exit=q, element=str(h)))
            length = max_len
            break
        a, b = pts[i], pts[(i + 1) % m]
        edge_len = hypot(b[0] - a[0], b[1] - a[1])
        q = (p[0] + step * u[0], p[1] + step * u[1])
        segments.append(TrajectorySegment(face=t, entry=p, exit=q, element=str(h)))
        length += step
        if e * edge_len < eps_sing or (1 - e) * edge_len < eps_sing:
            corner = i if e * edge_len < eps_sing else (i + 1) % m
            termination = TerminationReason.SADDLE_HIT.value
            hit_class = table.vertex_class(t, corner)
            break
        if (t, i) in table.neighbour:
            t, j = table.neighbour[(t, i)]
            p, skip = q, {j}
            continue
        u = _reflect(u, a, b)
        h = h * garage.boundary_reflection(t, table.base_edge[t][i])
        p, skip = q, {i}
        bounces += 1
        if bounces >= max_bounces:
            break

    logger.debug(f"billiard_trace: {bounces} bounces, {termination}")
    return Trajectory(
        start_face=start_t,
        start=tuple(start),
        direction=u0,
        segments=segments,
        total_length=length,
        termination=termination,
        hit_class=hit_class,
        bounces=bounces,
    )


def project_billiard(trajectory: Trajectory, surface: TranslationSurface) -> Trajectory:
    """Image of a billiard trajectory on the unfolded surface: x in copy h goes to h.x + offset_h"""
    n = surface.faces[0].copy.n
    segments = []
    for seg in trajectory.segments:
        h = DihedralElement.parse(seg.element, n)
        offset = surface.offsets[h]
        entry = h.apply(seg.entry) + offset
        exit_ = h.apply(seg.exit) + offset
        segments.append(TrajectorySegment(
            face=surface.face_lookup[(h, seg.face)],
            entry=(float(entry[0]), float(entry[1])),
            exit=(float(exit_[0]), float(exit_[1])),
            element=seg.element,
        ))
    first = segments[0] if segments else None
    return Trajectory(
        start_face=first.face if first else 0,
        start=first.entry if first else trajectory.start,
        direction=trajectory.direction,
        segments=segments,
        total_length=trajectory.total_length,
        termination=trajectory.termination,
        hit_class=None,
        bounces=trajectory.bounces,
    )
