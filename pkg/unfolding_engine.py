"""
Unfolding Engine
Builds the translation surface of a garage from |G| reflected copies of its tiles
"""
import logging
from math import cos, pi, sin
from typing import Dict, List, Tuple

import numpy as np

from exact_core import DihedralElement
from garage_model import Garage
from translation_surface import EdgeRef, Face, TranslationSurface

logger = logging.getLogger(__name__)


class UnfoldingEngine:
    """
    Glues the copies h.T_t(P), h in G_Q, into a closed translation surface.

    Identifications come from group data only: an internal gluing of tiles t, t'
    along edge a joins copies (h, t) and (h, t'); a boundary edge a of tile t
    joins (h, t) to (h*rho, t) where rho is the reflection in that edge.
    Coordinates are used afterwards for holonomy.
    """

    def __init__(self, garage: Garage):
        self.garage = garage
        self.base = garage.base
        self.m = garage.base.size

    def copy_offsets(self, copies: List[DihedralElement]) -> Dict[DihedralElement, np.ndarray]:
        """Cosmetic layout: copies spaced on a circle around the origin"""
        tiles = np.vstack([self.garage.tile_vertices(t) for t in range(self.garage.tile_count)])
        diameter = float(np.max(np.linalg.norm(tiles - tiles.mean(axis=0), axis=1))) * 2
        radius = diameter * len(copies) / (2 * pi) * 1.5 if len(copies) > 1 else 0.0
        offsets = {}
        for i, h in enumerate(copies):
            theta = 2 * pi * i / len(copies)
            offsets[h] = np.array([radius * cos(theta), radius * sin(theta)])
        return offsets

    def _face(self, h: DihedralElement, t: int, offset: np.ndarray) -> Tuple[Face, bool]:
        tile = self.garage.tiles[t]
        element = h * tile.element
        verts = self.garage.tile_vertices(t) @ h.matrix().T + offset
        order = list(range(self.m))
        reversed_ = element.flip
        if reversed_:
            order = [(-j) % self.m for j in range(self.m)]
        return Face(
            label=f"{h}:{tile.label}",
            vertices=verts[order],
            angles=tuple(self.base.angles[v].value for v in order),
            base_vertices=tuple(order),
            element=element,
            copy=h,
            tile=t,
        ), reversed_

    def _local_edge(self, a: int, reversed_: bool) -> int:
        # base edge a of a reversed face runs between new vertices -a-1 and -a
        return (-a - 1) % self.m if reversed_ else a

    def unfold(self) -> TranslationSurface:
        garage = self.garage
        logger.info(f"Step 1: Reflection group of {garage.name}")
        copies = garage.reflection_subgroup()
        n_q = len(copies) // 2

        logger.info(f"Step 2: Laying out {len(copies)} copies of {garage.tile_count} tiles")
        offsets = self.copy_offsets(copies)
        faces: List[Face] = []
        index: Dict[Tuple[DihedralElement, int], int] = {}
        flipped: List[bool] = []
        for h in copies:
            for t in range(garage.tile_count):
                face, reversed_ = self._face(h, t, offsets[h])
                index[(h, t)] = len(faces)
                faces.append(face)
                flipped.append(reversed_)

        logger.info("Step 3: Pairing edges from group data")
        pairing: Dict[EdgeRef, EdgeRef] = {}

        def join(h1, t1, h2, t2, a):
            f1, f2 = index[(h1, t1)], index[(h2, t2)]
            e1 = (f1, self._local_edge(a, flipped[f1]))
            e2 = (f2, self._local_edge(a, flipped[f2]))
            pairing[e1] = e2
            pairing[e2] = e1

        for h in copies:
            for g in garage.gluings:
                join(h, g.tile_a, h, g.tile_b, g.edge_a)
            for t, a in garage.boundary_edges():
                join(h, t, h * garage.boundary_reflection(t, a), t, a)

        surface = TranslationSurface(faces, pairing, name=f"M({garage.name})", group_order=n_q, offsets=offsets)
        surface.validate()
        logger.info(
            f"Step 4: Unfolded {garage.name}: {len(faces)} faces, genus {surface.genus()}, "
            f"{len(surface.cone_classes)} cone points"
        )
        return surface


def unfold(garage: Garage) -> TranslationSurface:
    return UnfoldingEngine(garage).unfold()


def lift_point(surface: TranslationSurface, tile: int, point) -> Tuple[int, Tuple[float, float]]:
    """A point of garage tile `tile`, placed in the identity copy of the unfolded surface"""
    h = DihedralElement(rot=0, flip=False, n=surface.faces[0].copy.n)
    offset = surface.offsets[h]
    return surface.face_lookup[(h, tile)], (float(point[0] + offset[0]), float(point[1] + offset[1]))
