"""
Aperiodicity Checker
HEURISTIC: where a point sits across its cylinder, and whether that height
ratio looks rational by continued-fraction expansion
"""
import logging
from math import floor
from typing import List, Optional, Tuple, Union

from config import APERIODICITY_CONFIG
from cylinder_decomposer import CylinderDecomposer
from errors import NoCylinderDecomposition, PointOnBoundary
from models import HeightSplitReport, Point, TerminationReason
from translation_surface import TranslationSurface, point_segment_distance

logger = logging.getLogger(__name__)

RATIONAL = "ratio appears rational"
IRRATIONAL = "ratio appears irrational"

PointRef = Union[int, Tuple[int, Point]]  # vertex class, or (face, point)


def continued_fraction(x: float, depth: int = APERIODICITY_CONFIG["depth"],
                       cap: int = APERIODICITY_CONFIG["quotient_cap"],
                       floor_eps: float = APERIODICITY_CONFIG["precision_floor"]
                       ) -> Tuple[List[int], Optional[Tuple[int, int]]]:
    """
    Partial quotients of x and, when x looks rational, the convergent it stops at.

    The expansion stops as rational when the remainder vanishes or the next
    quotient exceeds the cap. It stops as irrational when depth runs out or the
    convergent already agrees with x to the precision floor, since later
    quotients are float noise.
    """
    quotients: List[int] = []
    p_prev, p = 1, floor(x)
    q_prev, q = 0, 1
    quotients.append(p)
    rest = x - p
    while len(quotients) < depth:
        if rest < floor_eps:
            return quotients, (p, q)
        inv = 1.0 / rest
        a = floor(inv)
        if a > cap:
            return quotients, (p, q)
        if abs(x - p / q) < floor_eps:
            break
        quotients.append(a)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        rest = inv - a
    return quotients, None


class AperiodicityChecker:
    def __init__(self, surface: TranslationSurface, direction: Point):
        self.surface = surface
        self.decomposer = CylinderDecomposer(surface, direction)
        # raises NoCylinderDecomposition when the direction is not completely periodic
        self.cylinders = self.decomposer.decompose()

    def _locate(self, point: PointRef) -> Tuple[int, Point]:
        if isinstance(point, int):
            f, i = self.surface.class_position(point)
            return f, self.surface.face_points[f][i]
        f, p = point
        return f, (float(p[0]), float(p[1]))

    def height_split(self, point: PointRef) -> HeightSplitReport:
        d = self.decomposer
        f, x = self._locate(point)
        below = (-d.n[0], -d.n[1])
        if any(point_segment_distance(x, a, b) < d.eps for a, b in d.pieces.get(f, ())):
            raise PointOnBoundary(f"point {x} in face {f} lies on a saddle connection in direction {d.u}")
        h_below = d.height_to_boundary(f, x, below)
        h_above = d.height_to_boundary(f, x, d.n)

        loop = d.tracer.trace(f, x, d.u, max_crossings=d.max_crossings, record=False)
        if loop.termination != TerminationReason.CLOSED.value:
            raise NoCylinderDecomposition(f"orbit of {x} in direction {d.u} did not close ({loop.termination})")

        height = h_below + h_above
        ratio = h_below / height
        quotients, convergent = continued_fraction(ratio)
        verdict = RATIONAL if convergent is not None else IRRATIONAL
        logger.info(f"Height split {h_below:.9g}/{height:.9g} = {ratio:.12f}: {verdict}")
        return HeightSplitReport(
            direction=d.u,
            circumference=loop.length,
            cylinder_height=height,
            point_height=h_below,
            ratio=ratio,
            partial_quotients=quotients,
            convergent=convergent,
            verdict=verdict,
        )


def aperiodicity_evidence(surface: TranslationSurface, point: PointRef, direction: Point) -> HeightSplitReport:
    return AperiodicityChecker(surface, direction).height_split(point)
