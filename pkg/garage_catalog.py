"""
Garage Catalog
Built-in families of rational triangles and the garages tiled by them
"""
import logging
from math import cos, sin
from typing import Dict, List, Optional, Tuple

from config import FAMILY_CONSTRAINTS
from errors import ParameterConstraintViolated
from exact_core import Angle
from models import FamilyDescriptor, GarageSpec, GluingSpec, TileSpec

logger = logging.getLogger(__name__)

# Tile words and gluings of the multi-tile families.
# thm3: a fan of three copies around the apex plus one copy across the base.
THM3_TILES = {"A": [], "B": [1], "C": [1, 2], "D": [0]}
THM3_GLUINGS = [("A", 0, "D", 0), ("A", 1, "B", 1), ("B", 2, "C", 2)]

# ward stages: fans around the x2 vertex (edges 0 and 1 both contain it)
WARD_STAGES = {
    "q0": ({"A": [], "B": [1]}, [("A", 1, "B", 1)]),
    "q0-right": ({"A": [], "B": [2]}, [("A", 2, "B", 2)]),
    "q1": (
        {"A": [], "B": [1], "T1": [0], "T2": [0, 1]},
        [("A", 1, "B", 1), ("A", 0, "T1", 0), ("T1", 1, "T2", 1)],
    ),
    "q2": (
        {"A": [], "B": [1], "T1": [0], "T2": [0, 1], "T3": [1, 0], "T4": [1, 0, 1]},
        [("A", 1, "B", 1), ("A", 0, "T1", 0), ("T1", 1, "T2", 1),
         ("B", 0, "T3", 0), ("T3", 1, "T4", 1)],
    ),
}

BASE_FAMILIES = ("veech-isosceles", "veech-right", "ward")
FAMILIES = BASE_FAMILIES + ("thm3", "ward-stage")


def triangle_from_angles(angles: List[Angle]) -> List[Tuple[float, float]]:
    """Triangle with the given angles, v0 at the origin, e0 on +x, shortest edge 1"""
    a0, a1, a2 = (a.radians for a in angles)
    e0, e1, e2 = sin(a2), sin(a0), sin(a1)
    scale = 1.0 / min(e0, e1, e2)
    v2 = (e2 * scale * cos(a0), e2 * scale * sin(a0))
    return [(0.0, 0.0), (e0 * scale, 0.0), v2]


def base_angles(name: str, n: int) -> List[Angle]:
    if name == "veech-isosceles":
        return [Angle(num=1, den=n), Angle(num=1, den=n), Angle(num=n - 2, den=n)]
    if name == "veech-right":
        return [Angle(num=1, den=2), Angle(num=1, den=n), Angle(num=n - 2, den=2 * n)]
    if name == "ward":
        # x1, x2, x3 in vertex order
        return [Angle(num=1, den=n), Angle(num=1, den=2 * n), Angle(num=2 * n - 3, den=2 * n)]
    raise ParameterConstraintViolated(f"'{name}' is not a base triangle family")


def check_parameters(name: str, n: int, stage: Optional[str] = None):
    if name not in FAMILY_CONSTRAINTS:
        raise ParameterConstraintViolated(f"unknown family '{name}'; known: {', '.join(FAMILIES)}")
    rules = FAMILY_CONSTRAINTS[name]
    if rules.get("odd") and rules.get("divisible_by") and (n % 2 == 0 or n % rules["divisible_by"]):
        raise ParameterConstraintViolated(f"n must be odd and divisible by {rules['divisible_by']}")
    if rules.get("odd") and n % 2 == 0:
        raise ParameterConstraintViolated("n must be odd")
    if n < rules["min_n"]:
        raise ParameterConstraintViolated(f"n must be at least {rules['min_n']}")
    if "stages" in rules:
        if stage not in rules["stages"]:
            raise ParameterConstraintViolated(f"stage must be one of {', '.join(rules['stages'])}")
    elif stage is not None:
        raise ParameterConstraintViolated(f"family '{name}' takes no stage")


def _spec(name: str, n: int, stage: Optional[str], base_family: str,
          tiles: Dict[str, List[int]], gluings) -> GarageSpec:
    angles = base_angles(base_family, n)
    return GarageSpec(
        name=" ".join([name, str(n)] + ([stage] if stage else [])),
        family=FamilyDescriptor(name=name, n=n, stage=stage),
        vertices=triangle_from_angles(angles),
        angles=angles,
        tiles=[TileSpec(label=label, word=word) for label, word in tiles.items()],
        gluings=[GluingSpec(tile_a=a, edge_a=ea, tile_b=b, edge_b=eb) for a, ea, b, eb in gluings],
    )


def family_spec(name: str, n: int, stage: Optional[str] = None) -> GarageSpec:
    """Explicit GarageSpec for a catalog family"""
    check_parameters(name, n, stage)
    if name in BASE_FAMILIES:
        return _spec(name, n, None, name, {"P": []}, [])
    if name == "thm3":
        return _spec(name, n, None, "veech-isosceles", THM3_TILES, THM3_GLUINGS)
    tiles, gluings = WARD_STAGES[stage]
    return _spec(name, n, stage, "ward", tiles, gluings)


def base_family_of(name: str) -> str:
    """Base triangle family that tiles the given family"""
    return {"thm3": "veech-isosceles", "ward-stage": "ward"}.get(name, name)


def generate(name: str, n: int, stage: Optional[str] = None):
    """Validated Garage for a catalog family"""
    from garage_model import validate_garage
    logger.info(f"Generating {name} n={n} stage={stage}")
    return validate_garage(family_spec(name, n, stage))


def generate_base(name: str, n: int):
    """The base triangle P of a family, as a one-tile garage"""
    return generate(base_family_of(name), n)


def catalog_entries(max_n: int = 15) -> List[Tuple[str, int, Optional[str]]]:
    """Every valid (family, n, stage) with n <= max_n"""
    entries = []
    for name in FAMILIES:
        for n in range(3, max_n + 1):
            stages = FAMILY_CONSTRAINTS[name].get("stages", (None,))
            for stage in stages:
                try:
                    check_parameters(name, n, stage)
                except ParameterConstraintViolated:
                    continue
                entries.append((name, n, stage))
    return entries
