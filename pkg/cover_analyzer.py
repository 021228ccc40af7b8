"""
Cover Analyzer
Translation covers M_Q -> M_P induced by a reflection tiling of Q by P:
degree, fibers, branch points, Riemann-Hurwitz and the stabilizer of M_Q
"""
import logging
from collections import defaultdict
from functools import cached_property
from math import gcd
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from config import TOLERANCES
from errors import GeometryMismatch, ReflectionConditionViolated, SurfaceError
from exact_core import DihedralElement
from garage_model import Garage
from models import BranchPoint, CoverReport, Fiber, FiberEntry, Preimage
from translation_surface import TranslationSurface
from unfolding_engine import unfold

logger = logging.getLogger(__name__)


class AdjacencyWitness(BaseModel):
    model_config = ConfigDict(frozen=True)

    tile_a: int
    tile_b: int
    edge: int
    witness: DihedralElement  # g_a^-1 g_b, equal to the reflection in the shared edge


class TilingCertificate(BaseModel):
    """Evidence that P tiles Q by reflections"""
    model_config = ConfigDict(frozen=True)

    base: Garage
    tiled: Garage
    elements: Tuple[DihedralElement, ...]
    adjacency: Tuple[AdjacencyWitness, ...]

    @property
    def tile_count(self) -> int:
        return len(self.elements)


def certify_tiling(p: Garage, q: Garage) -> TilingCertificate:
    """Check that every tile of Q is a reflected copy of the one-tile garage P"""
    if p.tile_count != 1 or p.tiles[0].word:
        raise GeometryMismatch(f"{p.name} is not a single base polygon")
    if p.base.angles != q.base.angles:
        raise GeometryMismatch(f"tiles of {q.name} have angles {[str(a) for a in q.base.angles]}, "
                               f"base polygon has {[str(a) for a in p.base.angles]}")
    eps = TOLERANCES["length"]
    scale = max(1.0, float(np.abs(p.base.coords).max()))
    if np.abs(p.base.coords - q.base.coords).max() > 10 * eps * scale:
        raise GeometryMismatch(f"tiles of {q.name} are not congruent to {p.name}")

    adjacency = []
    for g in q.gluings:
        witness = q.tiles[g.tile_a].element.inverse() * q.tiles[g.tile_b].element
        if witness != p.base.edge_reflection(g.edge_a):
            raise ReflectionConditionViolated(
                f"edge {q.tiles[g.tile_a].label}.e{g.edge_a}: g^-1 g' = {witness} is not the reflection "
                f"{p.base.edge_reflection(g.edge_a)}"
            )
        adjacency.append(AdjacencyWitness(tile_a=g.tile_a, tile_b=g.tile_b, edge=g.edge_a, witness=witness))

    coords = p.tile_vertices(0)
    for t, tile in enumerate(q.tiles):
        if np.abs(tile.apply(coords) - q.tile_vertices(t)).max() > 10 * eps * scale:
            raise GeometryMismatch(f"tile {tile.label} does not match its group element {tile.element}")

    logger.info(f"Certified {q.name} as {q.tile_count} reflected copies of {p.name}")
    return TilingCertificate(
        base=p,
        tiled=q,
        elements=tuple(t.element for t in q.tiles),
        adjacency=tuple(adjacency),
    )


class CoverAnalyzer:
    """Both branching computations for one certificate, sharing the unfolded surfaces"""

    def __init__(self, cert: TilingCertificate):
        self.cert = cert
        self.p = cert.base
        self.q = cert.tiled

    @cached_property
    def m_p(self) -> TranslationSurface:
        return unfold(self.p)

    @cached_property
    def m_q(self) -> TranslationSurface:
        return unfold(self.q)

    @property
    def n_p(self) -> int:
        return self.p.base.order_n

    @property
    def n_q(self) -> int:
        return self.q.group().order_n

    def index(self) -> int:
        if self.n_p % self.n_q:
            raise SurfaceError(f"D_{self.n_q} is not a subgroup of D_{self.n_p}")
        return self.n_p // self.n_q

    def degree(self) -> int:
        index = self.index()
        if self.q.tile_count % index:
            raise SurfaceError(f"{self.q.tile_count} tiles is not a multiple of the index {index}")
        return self.q.tile_count // index

    # arithmetic path

    def arithmetic_fibers(self) -> List[Fiber]:
        base = self.p.base
        interior = set(self.q.interior_classes)
        by_vertex: Dict[int, List[FiberEntry]] = defaultdict(list)
        for c, corners in enumerate(self.q.corner_classes):
            v = corners[0][1]
            k = len(corners)
            n = base.angles[v].den
            if c in interior:
                e, points = 1, 2 * self.n_q
            else:
                e, points = k // gcd(k, n), self.n_q * gcd(k, n) // n
            by_vertex[v].append(FiberEntry(
                q_vertex=c, angle=base.angles[v].times(k), k=k,
                ramification=e, points=points, interior=c in interior,
            ))

        d = self.degree()
        fibers = []
        for v in range(base.size):
            entries = by_vertex[v]
            expected = d * self.n_p // base.angles[v].den
            if sum(e.ramification * e.points for e in entries) != expected:
                raise SurfaceError(f"fiber over vertex {v} does not sum to {expected}")
            fibers.append(Fiber(
                base_vertex=v,
                base_class=base.vertex_class(v),
                base_angle=base.angles[v],
                entries=entries,
                branched=any(e.ramification > 1 for e in entries),
            ))
        return fibers

    # cone-angle path

    def project_class(self, q_class: int) -> int:
        """M_P vertex class below an M_Q vertex class"""
        images = set()
        for f, i in self.m_q.classes[q_class]:
            face = self.m_q.faces[f]
            target = self.m_p.face_lookup[(face.element, 0)]
            j = self.m_p.faces[target].base_vertices.index(face.base_vertices[i])
            images.add(self.m_p.corner_class[(target, j)])
        if len(images) != 1:
            raise SurfaceError(f"class {q_class} of M_Q maps to {len(images)} points of M_P")
        return images.pop()

    def q_vertex_of(self, q_class: int) -> int:
        """Corner class of the garage Q behind an M_Q vertex class"""
        f, i = self.m_q.classes[q_class][0]
        face = self.m_q.faces[f]
        return self._q_corner_class[(face.tile, face.base_vertices[i])]

    @cached_property
    def _q_corner_class(self) -> Dict[Tuple[int, int], int]:
        return self.q.class_of()

    @cached_property
    def point_map(self) -> Dict[int, Tuple[int, int]]:
        """M_Q class -> (M_P class, ramification)"""
        result = {}
        for c in range(len(self.m_q.classes)):
            p = self.project_class(c)
            k_q, k_p = self.m_q.cone_multiples[c], self.m_p.cone_multiples[p]
            if k_q % k_p:
                raise SurfaceError(f"cone angle {2 * k_q}pi over {2 * k_p}pi is not a cover")
            result[c] = (p, k_q // k_p)
        return result

    def point_fibers(self) -> List[BranchPoint]:
        d = self.degree()
        preimages: Dict[int, List[Preimage]] = defaultdict(list)
        for c, (p, e) in sorted(self.point_map.items()):
            preimages[p].append(Preimage(q_point=c, ramification=e))
        points = []
        for p in range(len(self.m_p.classes)):
            if sum(x.ramification for x in preimages[p]) != d:
                raise SurfaceError(f"point {p} of M_P has {len(preimages[p])} preimages not summing to {d}")
            f, i = self.m_p.classes[p][0]
            v = self.m_p.faces[f].base_vertices[i]
            points.append(BranchPoint(
                p_point=p,
                base_vertex=v,
                base_class=self.p.base.vertex_class(v),
                cone_multiple=self.m_p.cone_multiples[p],
                preimages=preimages[p],
                branched=any(x.ramification > 1 for x in preimages[p]),
            ))
        return points

    def paths_agree(self, fibers: List[Fiber]) -> bool:
        expected = {e.q_vertex: e.ramification for fiber in fibers for e in fiber.entries}
        return all(expected[self.q_vertex_of(c)] == e for c, (_, e) in self.point_map.items())

    def branch_points(self) -> Dict[int, bool]:
        """M_P points below corners where several tiles meet, flagged when the cover branches there"""
        flags: Dict[int, bool] = {}
        for c, (p, e) in self.point_map.items():
            if len(self.q.corner_classes[self.q_vertex_of(c)]) > 1:
                flags[p] = flags.get(p, False) or e > 1
        return dict(sorted(flags.items()))

    def stabilizer(self) -> List[DihedralElement]:
        """Elements g of G_P with g M_Q = M_Q, by a face-labelled isomorphism search"""
        faces = self.m_q.faces
        labels = [f.element for f in faces]
        base_edges = [[_base_edge(f, i, self.p.base.size) for i in range(f.size)] for f in faces]
        local = [{a: i for i, a in enumerate(edges)} for edges in base_edges]

        def extends(phi0: int) -> bool:
            phi = {0: phi0}
            queue = [0]
            while queue:
                f = queue.pop()
                for i, a in enumerate(base_edges[f]):
                    f2, _ = self.m_q.pairing[(f, i)]
                    g2, _ = self.m_q.pairing[(phi[f], local[phi[f]][a])]
                    if f2 in phi:
                        if phi[f2] != g2:
                            return False
                    else:
                        phi[f2] = g2
                        queue.append(f2)
            return len(set(phi.values())) == len(faces)

        found = []
        for g in self.p.base.group.elements():
            target = g * labels[0]
            if any(extends(j) for j, label in enumerate(labels) if label == target):
                found.append(g)
        logger.debug(f"Stabilizer of M_Q has {len(found)} elements")
        return found

    def act_on_point(self, g: DihedralElement, p: int) -> int:
        """Image of an M_P vertex class under the affine automorphism with derivative g"""
        f, i = self.m_p.classes[p][0]
        face = self.m_p.faces[f]
        target = self.m_p.face_lookup[(g * face.element, 0)]
        j = self.m_p.faces[target].base_vertices.index(face.base_vertices[i])
        return self.m_p.corner_class[(target, j)]

    def report(self) -> CoverReport:
        logger.info(f"Step 1: Degree of M({self.q.name}) -> M({self.p.name})")
        d = self.degree()
        logger.info("Step 2: Arithmetic fibers")
        fibers = self.arithmetic_fibers()
        logger.info("Step 3: Cone-angle fibers on the unfolded surfaces")
        points = self.point_fibers()
        agree = self.paths_agree(fibers)
        if not agree:
            logger.error("Arithmetic and cone-angle branching disagree")
        total = sum(e - 1 for _, e in self.point_map.values())
        chi_p, chi_q = self.m_p.euler_characteristic(), self.m_q.euler_characteristic()
        return CoverReport(
            degree=d,
            index=self.index(),
            tile_count=self.q.tile_count,
            fibers=fibers,
            branch_set=sorted({f.base_class for f in fibers if f.branched}),
            point_fibers=points,
            euler_p=chi_p,
            euler_q=chi_q,
            ramification_total=total,
            rh_consistent=chi_q == d * chi_p - total,
            paths_agree=agree,
        )


def _base_edge(face, i: int, m: int) -> int:
    u, w = face.base_vertices[i], face.base_vertices[(i + 1) % face.size]
    return u if w == (u + 1) % m else w


def cover_analysis(cert: TilingCertificate) -> CoverReport:
    return CoverAnalyzer(cert).report()


def branch_point_count(cert: TilingCertificate) -> Dict[int, bool]:
    return CoverAnalyzer(cert).branch_points()


def stabilizer(cert: TilingCertificate) -> List[DihedralElement]:
    return CoverAnalyzer(cert).stabilizer()


def fiber_table(report: CoverReport):
    """Arithmetic fibers as a DataFrame, one row per Q-vertex"""
    rows = [
        {"base_vertex": f.base_vertex, "base_class": f.base_class, "q_vertex": e.q_vertex,
         "angle": str(e.angle), "k": e.k, "e": e.ramification, "points": e.points}
        for f in report.fibers for e in f.entries
    ]
    return pd.DataFrame(rows)
