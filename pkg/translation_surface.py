"""
Translation Surface
Planar faces glued along oriented edges by translations, with vertex classes,
cone angles and genus
"""
import logging
from fractions import Fraction
from math import atan2, cos, pi, sin
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from config import TOLERANCES
from errors import NonIntegerGenus, SurfaceError
from exact_core import DihedralElement
from models import Singularity, SurfaceReport

logger = logging.getLogger(__name__)

EdgeRef = Tuple[int, int]  # (face, edge index)
AngleValue = Union[Fraction, float]  # corner angle in units of pi


class Face(NamedTuple):
    label: str
    vertices: np.ndarray  # (m, 2), counter-clockwise chart coordinates
    angles: Tuple[AngleValue, ...]
    base_vertices: Tuple[int, ...]  # base polygon vertex behind each corner
    element: Optional[DihedralElement] = None  # linear part of the chart
    copy: Optional[DihedralElement] = None
    tile: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return float(0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _cross(a, b) -> float:
    return a[0] * b[1] - a[1] * b[0]


def corner_angles(vertices: np.ndarray) -> List[float]:
    """Interior angles (units of pi) of a CCW polygon"""
    m = len(vertices)
    out = []
    for i in range(m):
        d_out = vertices[(i + 1) % m] - vertices[i]
        d_in = vertices[i - 1] - vertices[i]
        out.append((atan2(_cross(d_out, d_in), float(np.dot(d_out, d_in))) % (2 * pi)) / pi)
    return out


class TranslationSurface:
    """
    Closed translation surface given by faces and an edge pairing.

    Edge i of a face runs from vertex i to vertex i+1. Paired edges have
    opposite holonomy; a point p on edge (f, i) is the point p + shift[(f, i)]
    on the partner edge.
    """

    def __init__(self, faces: Sequence[Face], pairing: Dict[EdgeRef, EdgeRef],
                 name: str = "surface", group_order: Optional[int] = None,
                 offsets: Optional[Dict[DihedralElement, np.ndarray]] = None):
        self.name = name
        self.faces: List[Face] = list(faces)
        self.pairing: Dict[EdgeRef, EdgeRef] = dict(pairing)
        self.group_order = group_order
        self.offsets = dict(offsets or {})  # layout translation of each unfolding copy
        self.parent_corners: Dict[EdgeRef, EdgeRef] = {}  # set by triangulate()
        self.eps_len = TOLERANCES["length"]
        self.face_lookup: Dict[Tuple[DihedralElement, int], int] = {
            (f.copy, f.tile): i for i, f in enumerate(self.faces) if f.copy is not None
        }

        self._check_pairing()
        self.shifts: Dict[EdgeRef, Tuple[float, float]] = {}
        for (f, i), (g, j) in self.pairing.items():
            w = self.faces[g].vertices[j]
            b = self.faces[f].vertices[(i + 1) % self.faces[f].size]
            self.shifts[(f, i)] = (float(w[0] - b[0]), float(w[1] - b[1]))

        self.classes: List[List[EdgeRef]] = self._vertex_classes()
        self.corner_class: Dict[EdgeRef, int] = {c: k for k, cls in enumerate(self.classes) for c in cls}
        self.cone_multiples: List[int] = [self._cone_multiple(cls) for cls in self.classes]

        # plain-float copies for the hot loops in the tracers
        self.face_points = [[(float(x), float(y)) for x, y in f.vertices] for f in self.faces]
        logger.debug(f"Built surface {name}: {len(self.faces)} faces, {len(self.classes)} vertex classes")

    # construction helpers

    @classmethod
    def from_polygons(cls, polygons: Sequence[Sequence[Tuple[float, float]]],
                      gluings: Sequence[Tuple[EdgeRef, EdgeRef]], name: str = "surface") -> "TranslationSurface":
        """Surface from CCW polygons and edge gluings; corner angles rationalized and verified"""
        faces = []
        for k, poly in enumerate(polygons):
            verts = np.array(poly, dtype=float)
            exact = []
            for a in corner_angles(verts):
                frac = Fraction(a).limit_denominator(TOLERANCES["max_denominator"])
                if abs(float(frac) - a) * pi > TOLERANCES["angle"]:
                    raise SurfaceError(f"polygon {k}: corner angle {a}*pi is not rational")
                exact.append(frac)
            faces.append(Face(label=f"p{k}", vertices=verts, angles=tuple(exact),
                              base_vertices=tuple(range(len(verts)))))
        pairing = {}
        for a, b in gluings:
            pairing[tuple(a)] = tuple(b)
            pairing[tuple(b)] = tuple(a)
        return cls(faces, pairing, name=name)

    @classmethod
    def unit_torus(cls) -> "TranslationSurface":
        """Unit square with opposite sides glued; its corners form one marked point"""
        square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        return cls.from_polygons([square], [((0, 0), (0, 2)), ((0, 1), (0, 3))], name="unit torus")

    @classmethod
    def double_pentagon(cls) -> "TranslationSurface":
        """Regular pentagon inscribed in the unit circle and its point reflection, parallel sides glued"""
        first = [(cos(2 * pi * k / 5), sin(2 * pi * k / 5)) for k in range(5)]
        second = [(3.0 - x, -y) for x, y in first]
        return cls.from_polygons([first, second], [((0, i), (1, i)) for i in range(5)], name="double pentagon")

    def scaled(self, factor: float) -> "TranslationSurface":
        faces = [f._replace(vertices=f.vertices * factor) for f in self.faces]
        offsets = {h: v * factor for h, v in self.offsets.items()}
        return TranslationSurface(faces, self.pairing, name=f"{self.name} x{factor:g}",
                                  group_order=self.group_order, offsets=offsets)

    # validation

    def _check_pairing(self):
        for f, face in enumerate(self.faces):
            if face.area <= 0:
                raise SurfaceError(f"face {f} is not counter-clockwise")
            for i in range(face.size):
                if (f, i) not in self.pairing:
                    raise SurfaceError(f"edge {i} of face {f} is unpaired")
        for e, partner in self.pairing.items():
            if partner == e:
                raise SurfaceError(f"edge {e} is paired with itself")
            if self.pairing.get(partner) != e:
                raise SurfaceError(f"pairing is not an involution at {e}")
            h1, h2 = self.holonomy(*e), self.holonomy(*partner)
            scale = max(1.0, float(np.linalg.norm(h1)))
            if np.linalg.norm(h1 + h2) > 10 * self.eps_len * scale:
                raise SurfaceError(f"edges {e} and {partner} do not have opposite holonomy")

    def validate(self) -> bool:
        """Gauss-Bonnet as an exact integer identity"""
        if sum(k - 1 for k in self.cone_multiples) != -self.euler_characteristic():
            raise SurfaceError("Gauss-Bonnet identity fails")
        return True

    def _vertex_classes(self) -> List[List[EdgeRef]]:
        graph = nx.Graph()
        for f, face in enumerate(self.faces):
            graph.add_nodes_from((f, i) for i in range(face.size))
        for (f, i), (g, j) in self.pairing.items():
            mf, mg = self.faces[f].size, self.faces[g].size
            graph.add_edge((f, i), (g, (j + 1) % mg))
            graph.add_edge((f, (i + 1) % mf), (g, j))
        return sorted(sorted(c) for c in nx.connected_components(graph))

    def _cone_multiple(self, cls: List[EdgeRef]) -> int:
        angles = [self.faces[f].angles[i] for f, i in cls]
        if all(isinstance(a, Fraction) for a in angles):
            total = sum(angles, Fraction(0))
            if total.denominator != 1 or total.numerator % 2:
                raise SurfaceError(f"cone angle {total}*pi at class {cls[0]} is not a multiple of 2*pi")
            return total.numerator // 2
        total = float(sum(angles)) / 2
        k = round(total)
        if k < 1 or abs(total - k) > 1e-6:
            raise SurfaceError(f"cone angle {2 * total}*pi at class {cls[0]} is not a multiple of 2*pi")
        return k

    # queries

    def holonomy(self, f: int, i: int) -> np.ndarray:
        v = self.faces[f].vertices
        return v[(i + 1) % len(v)] - v[i]

    def cone_angle(self, vertex_class: int) -> int:
        """Cone angle of a vertex class as a multiple of 2*pi"""
        if not 0 <= vertex_class < len(self.classes):
            raise IndexError(f"unknown vertex class {vertex_class}")
        return self.cone_multiples[vertex_class]

    @property
    def edge_count(self) -> int:
        return len(self.pairing) // 2

    def euler_characteristic(self) -> int:
        return len(self.classes) - self.edge_count + len(self.faces)

    def genus(self) -> int:
        chi = self.euler_characteristic()
        if chi % 2 or chi > 2:
            raise NonIntegerGenus(f"Euler characteristic {chi} gives no integer genus")
        return (2 - chi) // 2

    def singularities(self) -> List[Singularity]:
        found = [Singularity(vertex_class=c, cone_multiple=k) for c, k in enumerate(self.cone_multiples) if k >= 2]
        return sorted(found, key=lambda s: (s.cone_multiple, s.vertex_class))

    @property
    def cone_classes(self) -> List[int]:
        return [c for c, k in enumerate(self.cone_multiples) if k >= 2]

    @property
    def marked_points(self) -> List[int]:
        return [c for c, k in enumerate(self.cone_multiples) if k == 1]

    def singular_classes(self) -> List[int]:
        """Endpoints for saddle connections: cone points, or every marked point on a flat torus"""
        return self.cone_classes or list(range(len(self.classes)))

    @property
    def area(self) -> float:
        return sum(f.area for f in self.faces)

    def class_position(self, vertex_class: int) -> Tuple[int, int]:
        """A representative corner (face, vertex) of the class"""
        return self.classes[vertex_class][0]

    def face_contains(self, f: int, p: Tuple[float, float], eps: float = 1e-9) -> bool:
        """Point inside face f or on its boundary"""
        pts = self.face_points[f]
        return point_in_polygon(p, pts) or _near_boundary(p, pts, eps)

    def face_containing(self, p: Tuple[float, float]) -> int:
        for f in range(len(self.faces)):
            if self.face_contains(f, p):
                return f
        raise SurfaceError(f"point {p} lies in no face")

    # geometry of corners

    def sector_offset(self, f: int, i: int, u: Tuple[float, float]) -> float:
        """Angle (radians) from the outgoing edge of corner (f, i) to u, in [0, 2*pi)"""
        pts = self.face_points[f]
        a = pts[i]
        b = pts[(i + 1) % len(pts)]
        d = (b[0] - a[0], b[1] - a[1])
        theta = atan2(_cross(d, u), d[0] * u[0] + d[1] * u[1])
        if theta < 0:
            theta += 2 * pi
        if theta > 2 * pi - 1e-12:
            theta = 0.0
        return theta

    def sector_contains(self, f: int, i: int, u: Tuple[float, float]) -> bool:
        """Half-open sector test: outgoing edge included, incoming edge excluded"""
        alpha = float(self.faces[f].angles[i]) * pi
        return self.sector_offset(f, i, u) < alpha - 1e-12

    def corners_for_direction(self, vertex_class: int, u: Tuple[float, float]) -> List[EdgeRef]:
        """Corners of a class whose sector contains direction u (one per 2*pi of cone angle)"""
        return [(f, i) for f, i in self.classes[vertex_class] if self.sector_contains(f, i, u)]

    # derived surfaces

    def triangulate(self) -> "TranslationSurface":
        """Ear-clipping triangulation preserving vertex classes and holonomy"""
        if all(f.size == 3 for f in self.faces):
            return self
        faces: List[Face] = []
        parents: Dict[EdgeRef, EdgeRef] = {}
        edge_map: Dict[EdgeRef, EdgeRef] = {}
        pairing: Dict[EdgeRef, EdgeRef] = {}
        for f, face in enumerate(self.faces):
            diagonals: Dict[Tuple[int, int], EdgeRef] = {}
            for n_tri, tri in enumerate(_ear_clip(face.vertices)):
                t = len(faces)
                parents.update({(t, k): (f, v) for k, v in enumerate(tri)})
                verts = face.vertices[list(tri)]
                angles = tuple(corner_angles(verts))
                faces.append(Face(label=f"{face.label}/{n_tri}", vertices=verts, angles=angles,
                                  base_vertices=tuple(face.base_vertices[v] for v in tri),
                                  element=face.element, copy=face.copy, tile=face.tile))
                for k in range(3):
                    a, b = tri[k], tri[(k + 1) % 3]
                    if b == (a + 1) % face.size:
                        edge_map[(f, a)] = (t, k)
                    elif (b, a) in diagonals:
                        other = diagonals.pop((b, a))
                        pairing[(t, k)] = other
                        pairing[other] = (t, k)
                    else:
                        diagonals[(a, b)] = (t, k)
            if diagonals:
                raise SurfaceError(f"triangulation of face {f} left unpaired diagonals")
        for e, partner in self.pairing.items():
            pairing[edge_map[e]] = edge_map[partner]
        surface = TranslationSurface(faces, pairing, name=self.name, group_order=self.group_order, offsets=self.offsets)
        surface.parent_corners = parents
        return surface

    def report(self) -> SurfaceReport:
        return SurfaceReport(
            name=self.name,
            faces=len(self.faces),
            edges=self.edge_count,
            vertices=len(self.classes),
            euler_characteristic=self.euler_characteristic(),
            genus=self.genus(),
            area=self.area,
            group=f"D_{self.group_order}" if self.group_order else "n/a",
            singularities=self.singularities(),
            marked_points=self.marked_points,
            cone_multiples=self.cone_multiples,
        )


def _ear_clip(vertices: np.ndarray) -> List[Tuple[int, int, int]]:
    """Triangles (CCW index triples) of a simple CCW polygon"""
    idx = list(range(len(vertices)))
    triangles = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 10 * len(vertices) ** 2:
            raise SurfaceError("ear clipping did not terminate")
        for k in range(len(idx)):
            a, b, c = idx[k - 1], idx[k], idx[(k + 1) % len(idx)]
            pa, pb, pc = vertices[a], vertices[b], vertices[c]
            if _cross(pb - pa, pc - pb) <= 0:
                continue
            if any(_inside_triangle(vertices[o], pa, pb, pc) for o in idx if o not in (a, b, c)):
                continue
            triangles.append((a, b, c))
            idx.pop(k)
            break
    triangles.append(tuple(idx))
    return triangles


def _inside_triangle(p, a, b, c) -> bool:
    return _cross(b - a, p - a) >= 0 and _cross(c - b, p - b) >= 0 and _cross(a - c, p - c) >= 0


def point_in_polygon(p, pts) -> bool:
    inside = False
    m = len(pts)
    for i in range(m):
        a, b = pts[i], pts[(i + 1) % m]
        if (a[1] > p[1]) != (b[1] > p[1]):
            x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if x > p[0]:
                inside = not inside
    return inside


def point_segment_distance(p, a, b) -> float:
    ex, ey = b[0] - a[0], b[1] - a[1]
    length2 = ex * ex + ey * ey
    s = 0.0 if length2 == 0 else max(0.0, min(1.0, ((p[0] - a[0]) * ex + (p[1] - a[1]) * ey) / length2))
    dx, dy = p[0] - a[0] - s * ex, p[1] - a[1] - s * ey
    return (dx * dx + dy * dy) ** 0.5


def _near_boundary(p, pts, eps: float) -> bool:
    m = len(pts)
    return any(point_segment_distance(p, pts[i], pts[(i + 1) % m]) <= eps for i in range(m))
