"""
Garage Model
Rational base polygons and parking garages as reflection-tiling complexes
"""
import logging
from fractions import Fraction
from math import atan2, pi
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import TOLERANCES
from errors import (
    DegeneratePolygon, DisconnectedComplex, EdgeLengthMismatch,
    GluingMismatch, InvalidPolygon, NonRationalAngle, SurfaceError
)
from exact_core import Angle, DihedralElement, DihedralGroup, group_from_angles
from models import FamilyDescriptor, GarageSpec, Point

logger = logging.getLogger(__name__)

Corner = Tuple[int, int]  # (tile, base vertex)


def _cross(a, b) -> float:
    return a[0] * b[1] - a[1] * b[0]


class BasePolygon(BaseModel):
    """Normalized rational polygon: v0 at the origin, first edge along +x, CCW"""
    model_config = ConfigDict(frozen=True)

    vertices: Tuple[Point, ...]
    angles: Tuple[Angle, ...]
    order_n: int = Field(..., description="N_P, lcm of reduced angle denominators")
    edge_directions: Tuple[int, ...] = Field(..., description="Edge line angle in units of pi/N, mod N")

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def coords(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)

    @property
    def group(self) -> DihedralGroup:
        return DihedralGroup(order_n=self.order_n)

    def edge_length(self, i: int) -> float:
        c = self.coords
        return float(np.linalg.norm(c[(i + 1) % self.size] - c[i]))

    def edge_reflection(self, i: int) -> DihedralElement:
        """Linear part of the reflection in edge i"""
        return DihedralElement(rot=self.edge_directions[i], flip=True, n=self.order_n)

    def vertex_class(self, i: int) -> str:
        """Label x<j> where j-1 is the first vertex with the same angle"""
        first = next(j for j, a in enumerate(self.angles) if a == self.angles[i])
        return f"x{first + 1}"

    @property
    def area(self) -> float:
        c = self.coords
        x, y = c[:, 0], c[:, 1]
        return float(0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


class Tile(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    word: Tuple[int, ...]
    element: DihedralElement
    translation: Point

    def apply(self, points: np.ndarray) -> np.ndarray:
        return points @ self.element.matrix().T + np.asarray(self.translation)


class Gluing(BaseModel):
    model_config = ConfigDict(frozen=True)

    tile_a: int
    edge_a: int
    tile_b: int
    edge_b: int


class BoundaryVertex(BaseModel):
    model_config = ConfigDict(frozen=True)

    vertex_class: int
    position: Point
    angle: Angle
    k: int
    base_vertex: int
    base_class: str


class Garage(BaseModel):
    """Validated reflection-tiling complex. Immutable."""
    model_config = ConfigDict(frozen=True)

    name: str
    family: Optional[FamilyDescriptor] = None
    base: BasePolygon
    tiles: Tuple[Tile, ...]
    gluings: Tuple[Gluing, ...]
    corner_classes: Tuple[Tuple[Corner, ...], ...]
    boundary_vertices: Tuple[BoundaryVertex, ...]
    interior_classes: Tuple[int, ...]

    @property
    def tile_count(self) -> int:
        return len(self.tiles)

    def tile_vertices(self, t: int) -> np.ndarray:
        return self.tiles[t].apply(self.base.coords)

    def glued_edges(self) -> Dict[Tuple[int, int], Tuple[int, int]]:
        partner = {}
        for g in self.gluings:
            partner[(g.tile_a, g.edge_a)] = (g.tile_b, g.edge_b)
            partner[(g.tile_b, g.edge_b)] = (g.tile_a, g.edge_a)
        return partner

    def boundary_edges(self) -> List[Tuple[int, int]]:
        glued = self.glued_edges()
        return [(t, a) for t in range(self.tile_count) for a in range(self.base.size) if (t, a) not in glued]

    def boundary_reflection(self, t: int, a: int) -> DihedralElement:
        """Linear part of the reflection in the image of base edge a on tile t"""
        g = self.tiles[t].element
        return g * self.base.edge_reflection(a) * g.inverse()

    def class_of(self) -> Dict[Corner, int]:
        return {c: i for i, cls in enumerate(self.corner_classes) for c in cls}

    def group(self) -> DihedralGroup:
        return garage_group(self)

    def reflection_subgroup(self) -> List[DihedralElement]:
        """Elements of G_Q listed inside D_{N_P}"""
        gens = {self.boundary_reflection(t, a) for t, a in self.boundary_edges()}
        elements = self.base.group.generate(sorted(gens, key=DihedralElement.sort_key))
        expected = 2 * garage_group(self).order_n
        if len(elements) != expected:
            raise SurfaceError(f"reflection subgroup has {len(elements)} elements, expected {expected}")
        return elements

    @property
    def is_embedded(self) -> bool:
        """Diagnostic only: tile interiors pairwise disjoint"""
        polys = [self.tile_vertices(t) for t in range(self.tile_count)]
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                if _polygons_overlap(polys[i], polys[j]):
                    return False
        return True


def _segments_cross(p1, p2, q1, q2, eps: float) -> bool:
    d1 = _cross(p2 - p1, q1 - p1)
    d2 = _cross(p2 - p1, q2 - p1)
    d3 = _cross(q2 - q1, p1 - q1)
    d4 = _cross(q2 - q1, p2 - q1)
    return ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and \
        ((d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps))


def _point_in_polygon(p, poly: np.ndarray) -> bool:
    inside = False
    m = len(poly)
    for i in range(m):
        a, b = poly[i], poly[(i + 1) % m]
        if (a[1] > p[1]) != (b[1] > p[1]):
            x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if x > p[0]:
                inside = not inside
    return inside


def _polygons_overlap(a: np.ndarray, b: np.ndarray) -> bool:
    eps = TOLERANCES["length"]
    for i in range(len(a)):
        for j in range(len(b)):
            if _segments_cross(a[i], a[(i + 1) % len(a)], b[j], b[(j + 1) % len(b)], eps):
                return True
    return _point_in_polygon(a.mean(axis=0), b) or _point_in_polygon(b.mean(axis=0), a)


class GarageValidator:
    """Builds validated Garage objects from specs"""

    def __init__(self):
        self.eps_angle = TOLERANCES["angle"]
        self.eps_len = TOLERANCES["length"]
        self.max_den = TOLERANCES["max_denominator"]

    def build_base(self, vertices: Sequence[Point], angles: Optional[Sequence[Optional[Angle]]] = None) -> BasePolygon:
        """Validate and normalize a rational base polygon"""
        pts = np.array(vertices, dtype=float)
        m = len(pts)
        if m < 3:
            raise InvalidPolygon(f"a polygon needs at least 3 vertices, got {m}")
        scale = float(np.max(np.linalg.norm(pts - pts.mean(axis=0), axis=1)))
        if scale <= self.eps_len:
            raise DegeneratePolygon("all vertices coincide")

        edges = np.roll(pts, -1, axis=0) - pts
        for i in range(m):
            if np.linalg.norm(edges[i]) <= self.eps_len * scale:
                raise DegeneratePolygon(f"edge {i} has zero length")
            prev = edges[i - 1]
            if abs(_cross(prev, edges[i])) <= self.eps_len * np.linalg.norm(prev) * np.linalg.norm(edges[i]):
                raise DegeneratePolygon(f"vertices {(i - 1) % m}, {i}, {(i + 1) % m} are collinear")

        signed_area = 0.5 * float(np.sum(pts[:, 0] * np.roll(pts[:, 1], -1) - pts[:, 1] * np.roll(pts[:, 0], -1)))
        if signed_area < 0:
            raise InvalidPolygon("base polygon vertices must be listed counter-clockwise")
        for i in range(m):
            for j in range(i + 1, m):
                if j == i + 1 or (i == 0 and j == m - 1):
                    continue
                if _segments_cross(pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m], 0.0):
                    raise InvalidPolygon(f"edges {i} and {j} intersect")

        declared = list(angles) if angles else [None] * m
        if len(declared) != m:
            raise InvalidPolygon(f"{len(declared)} angles declared for {m} vertices")
        exact: List[Angle] = []
        for i in range(m):
            d_out, d_in = edges[i], -edges[i - 1]
            measured = atan2(_cross(d_out, d_in), float(np.dot(d_out, d_in))) % (2 * pi)
            angle = declared[i]
            if angle is None:
                frac = Fraction(measured / pi).limit_denominator(self.max_den)
                if frac <= 0:
                    raise NonRationalAngle(f"vertex {i}: angle {measured} rad is not a positive rational multiple of pi")
                angle = Angle(num=frac.numerator, den=frac.denominator)
            if abs(angle.radians - measured) > self.eps_angle:
                raise NonRationalAngle(
                    f"vertex {i}: declared {angle}*pi but measured {measured / pi:.12f}*pi"
                )
            exact.append(angle)
        if sum(a.value for a in exact) != m - 2:
            raise NonRationalAngle(f"angle sum {sum(a.value for a in exact)}*pi differs from ({m}-2)*pi")

        # v0 to the origin, e0 along +x
        theta = atan2(edges[0][1], edges[0][0])
        c, s = np.cos(-theta), np.sin(-theta)
        rot = np.array([[c, -s], [s, c]])
        normalized = (pts - pts[0]) @ rot.T
        normalized[0] = (0.0, 0.0)
        normalized[1][1] = 0.0

        group = group_from_angles(exact)
        n = group.order_n
        directions = [0]
        for i in range(1, m):
            # exterior turn at vertex i is pi - alpha_i
            turn = n - exact[i].value * n
            directions.append(int(directions[-1] + turn) % n)

        return BasePolygon(
            vertices=tuple((float(x), float(y)) for x, y in normalized),
            angles=tuple(exact),
            order_n=n,
            edge_directions=tuple(directions),
        )

    def build_tile(self, base: BasePolygon, label: str, word: Sequence[int]) -> Tile:
        """Tile image of P under the reflections named by the word (composed on the right)"""
        element = base.group.identity()
        translation = np.zeros(2)
        coords = base.coords
        for a in word:
            if not 0 <= a < base.size:
                raise GluingMismatch(f"tile {label}: word uses edge {a}, base has {base.size} edges")
            sigma = base.edge_reflection(a)
            va = coords[a]
            translation = element.matrix() @ (va - sigma.apply(va)) + translation
            element = element * sigma
        return Tile(label=label, word=tuple(word), element=element,
                    translation=(float(translation[0]), float(translation[1])))

    def validate_garage(self, spec: GarageSpec) -> Garage:
        if spec.is_family:
            from garage_catalog import family_spec
            logger.info(f"Expanding family {spec.family}")
            spec = family_spec(spec.family.name, spec.family.n, spec.family.stage)

        base = self.build_base(spec.vertices, spec.angles or None)
        if not spec.tiles:
            raise GluingMismatch("garage has no tiles")
        labels = [t.label for t in spec.tiles]
        if len(set(labels)) != len(labels):
            raise GluingMismatch("duplicate tile labels")
        index = {label: i for i, label in enumerate(labels)}
        tiles = [self.build_tile(base, t.label, t.word) for t in spec.tiles]

        gluings = []
        used = set()
        for g in spec.gluings:
            for label in (g.tile_a, g.tile_b):
                if label not in index:
                    raise GluingMismatch(f"gluing references unknown tile '{label}'")
            ta, tb = index[g.tile_a], index[g.tile_b]
            gluing = Gluing(tile_a=ta, edge_a=g.edge_a, tile_b=tb, edge_b=g.edge_b)
            self._check_gluing(base, tiles, gluing)
            for key in ((ta, g.edge_a), (tb, g.edge_b)):
                if key in used:
                    raise GluingMismatch(f"edge {key[1]} of tile {labels[key[0]]} is glued twice")
                used.add(key)
            gluings.append(gluing)

        graph = nx.Graph()
        graph.add_nodes_from(range(len(tiles)))
        graph.add_edges_from((g.tile_a, g.tile_b) for g in gluings)
        if not nx.is_connected(graph):
            parts = nx.number_connected_components(graph)
            raise DisconnectedComplex(f"tiles form {parts} connected components")

        classes, interior = self._corner_classes(base, len(tiles), gluings)
        name = spec.name or (str(spec.family) if spec.family else "garage")
        garage = Garage(
            name=name,
            family=spec.family,
            base=base,
            tiles=tuple(tiles),
            gluings=tuple(gluings),
            corner_classes=classes,
            boundary_vertices=(),
            interior_classes=interior,
        )
        boundary = self._walk_boundary(garage)
        garage = garage.model_copy(update={"boundary_vertices": tuple(boundary)})
        logger.info(
            f"Validated garage {name}: {len(tiles)} tiles, {len(gluings)} gluings, "
            f"{len(boundary)} boundary vertices"
        )
        return garage

    def _check_gluing(self, base: BasePolygon, tiles: List[Tile], g: Gluing):
        m = base.size
        for t, e in ((g.tile_a, g.edge_a), (g.tile_b, g.edge_b)):
            if e >= m:
                raise GluingMismatch(f"edge index {e} out of range for an {m}-gon")
        if g.tile_a == g.tile_b:
            raise GluingMismatch(f"tile {tiles[g.tile_a].label} glued to itself")
        la, lb = base.edge_length(g.edge_a), base.edge_length(g.edge_b)
        if abs(la - lb) > self.eps_len * max(la, lb):
            raise EdgeLengthMismatch(
                f"{tiles[g.tile_a].label}.e{g.edge_a} (length {la:.9g}) vs "
                f"{tiles[g.tile_b].label}.e{g.edge_b} (length {lb:.9g})"
            )
        if g.edge_a != g.edge_b:
            raise GluingMismatch(
                f"{tiles[g.tile_a].label}.e{g.edge_a} and {tiles[g.tile_b].label}.e{g.edge_b} "
                "are images of different base edges"
            )
        a = g.edge_a
        witness = tiles[g.tile_a].element.inverse() * tiles[g.tile_b].element
        if witness != base.edge_reflection(a):
            raise GluingMismatch(
                f"{tiles[g.tile_a].label}.e{a} / {tiles[g.tile_b].label}.e{a}: g_i^-1 g_j = {witness}, "
                f"reflection in the edge is {base.edge_reflection(a)}"
            )
        coords = base.coords
        seg = coords[[a, (a + 1) % m]]
        pa, pb = tiles[g.tile_a].apply(seg), tiles[g.tile_b].apply(seg)
        scale = max(1.0, float(np.abs(pa).max()))
        if np.abs(pa - pb).max() > self.eps_len * scale * 10:
            raise GluingMismatch(f"{tiles[g.tile_a].label}.e{a} and {tiles[g.tile_b].label}.e{a} do not coincide")

    def _corner_classes(self, base: BasePolygon, tile_count: int, gluings: List[Gluing]):
        m = base.size
        graph = nx.Graph()
        graph.add_nodes_from((t, v) for t in range(tile_count) for v in range(m))
        glued = set()
        for g in gluings:
            a = g.edge_a
            graph.add_edge((g.tile_a, a), (g.tile_b, a))
            graph.add_edge((g.tile_a, (a + 1) % m), (g.tile_b, (a + 1) % m))
            glued.update({(g.tile_a, a), (g.tile_b, a)})

        classes = sorted(tuple(sorted(c)) for c in nx.connected_components(graph))
        interior = []
        for i, cls in enumerate(classes):
            # a corner sees edge v (outgoing) and edge v-1 (incoming)
            if all((t, v) in glued and (t, (v - 1) % m) in glued for t, v in cls):
                total = len(cls) * base.angles[cls[0][1]].value
                if total != 2:
                    raise GluingMismatch(f"interior vertex of tiles {sorted({t for t, _ in cls})} has angle {total}*pi")
                interior.append(i)
        return tuple(classes), tuple(interior)

    def _walk_boundary(self, garage: Garage) -> List[BoundaryVertex]:
        """Boundary vertices in cyclic order along each boundary component"""
        m = garage.base.size
        class_of = garage.class_of()
        outgoing: Dict[int, Tuple[int, int]] = {}
        for t, a in garage.boundary_edges():
            start, end = (t, a), (t, (a + 1) % m)
            if garage.tiles[t].element.flip:
                start, end = end, start
            c = class_of[start]
            if c in outgoing:
                raise GluingMismatch(f"vertex class {c} is a pinch point of the boundary")
            outgoing[c] = (class_of[end], t)

        result: List[BoundaryVertex] = []
        seen = set()
        for first in sorted(outgoing):
            if first in seen:
                continue
            c = first
            while c not in seen:
                seen.add(c)
                corners = garage.corner_classes[c]
                t, v = corners[0]
                angle_value = len(corners) * garage.base.angles[v].value
                if angle_value != 1:
                    pos = garage.tile_vertices(t)[v]
                    result.append(BoundaryVertex(
                        vertex_class=c,
                        position=(float(pos[0]), float(pos[1])),
                        angle=Angle(num=angle_value.numerator, den=angle_value.denominator),
                        k=len(corners),
                        base_vertex=v,
                        base_class=garage.base.vertex_class(v),
                    ))
                if c not in outgoing:
                    raise GluingMismatch(f"boundary breaks at vertex class {c}")
                c = outgoing[c][0]
        return result


def validate_garage(spec: GarageSpec) -> Garage:
    return GarageValidator().validate_garage(spec)


def boundary_angles(garage: Garage) -> List[Tuple[Angle, int, str]]:
    return [(b.angle, b.k, b.base_class) for b in garage.boundary_vertices]


def garage_group(garage: Garage) -> DihedralGroup:
    return group_from_angles([b.angle for b in garage.boundary_vertices])
