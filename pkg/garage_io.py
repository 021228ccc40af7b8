"""
Garage file format: parse and serialize the line-oriented text description
"""
import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

from errors import GarageParseError, InvalidAngle
from exact_core import Angle
from models import FamilyDescriptor, GarageSpec, GluingSpec, TileSpec

logger = logging.getLogger(__name__)


def _parse_edge_ref(token: str, line_no: int) -> Tuple[str, int]:
    if "." not in token:
        raise GarageParseError(line_no, f"edge reference '{token}' must look like TILE.eK")
    label, edge = token.rsplit(".", 1)
    edge = edge[1:] if edge.startswith("e") else edge
    try:
        return label, int(edge)
    except ValueError:
        raise GarageParseError(line_no, f"bad edge index in '{token}'")


def parse_garage(text: str) -> GarageSpec:
    """Parse garage file text into a GarageSpec"""
    name: Optional[str] = None
    family: Optional[FamilyDescriptor] = None
    in_base = False
    vertices: List[Tuple[float, float]] = []
    angles = {}
    tiles: List[TileSpec] = []
    gluings: List[GluingSpec] = []

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        if head == "name":
            name = " ".join(args)
        elif head == "family":
            if len(args) not in (2, 3):
                raise GarageParseError(line_no, "expected: family <name> <n> [stage]")
            try:
                n = int(args[1])
            except ValueError:
                raise GarageParseError(line_no, f"family parameter '{args[1]}' is not an integer")
            family = FamilyDescriptor(name=args[0], n=n, stage=args[2] if len(args) == 3 else None)
        elif head == "base":
            if args:
                raise GarageParseError(line_no, "'base' takes no arguments")
            in_base = True
        elif head == "v":
            if not in_base:
                raise GarageParseError(line_no, "'v' line outside a base block")
            if len(args) != 2:
                raise GarageParseError(line_no, "expected: v <x> <y>")
            try:
                vertices.append((float(args[0]), float(args[1])))
            except ValueError:
                raise GarageParseError(line_no, f"bad coordinates {args}")
        elif head == "angle":
            if len(args) != 2:
                raise GarageParseError(line_no, "expected: angle <i> <num/den>")
            try:
                angles[int(args[0])] = Angle.parse(args[1])
            except (ValueError, InvalidAngle) as e:
                raise GarageParseError(line_no, str(e))
        elif head == "tile":
            if len(args) < 2 or args[1] != "word":
                raise GarageParseError(line_no, "expected: tile <id> word [e1 e2 ...]")
            try:
                word = [int(a) for a in args[2:]]
            except ValueError:
                raise GarageParseError(line_no, "tile words are edge indices")
            tiles.append(TileSpec(label=args[0], word=word))
        elif head == "glue":
            if len(args) != 2:
                raise GarageParseError(line_no, "expected: glue <t1.ea> <t2.eb>")
            (ta, ea), (tb, eb) = (_parse_edge_ref(a, line_no) for a in args)
            gluings.append(GluingSpec(tile_a=ta, edge_a=ea, tile_b=tb, edge_b=eb))
        else:
            raise GarageParseError(line_no, f"unknown directive '{head}'")

    if family is None and not vertices:
        raise GarageParseError(0, "file declares neither a family nor a base polygon")
    if vertices:
        bad = [i for i in angles if not 0 <= i < len(vertices)]
        if bad:
            raise GarageParseError(0, f"angle declared for missing vertex {bad[0]}")
        if not tiles:
            tiles = [TileSpec(label="P", word=[])]
    return GarageSpec(
        name=name,
        family=family,
        vertices=vertices,
        angles=[angles.get(i) for i in range(len(vertices))] if angles else [],
        tiles=tiles,
        gluings=gluings,
    )


def load_garage(path: Union[str, Path]):
    """Parse and validate a garage file"""
    from garage_model import validate_garage
    text = Path(path).read_text(encoding="utf-8")
    logger.info(f"Loading garage from {path}")
    return validate_garage(parse_garage(text))


def serialize_garage(garage) -> str:
    """Explicit text form of a validated Garage"""
    lines = []
    if garage.family is not None:
        lines.append(f"family {garage.family}")
    lines.append(f"name {garage.name}")
    lines.append("base")
    for x, y in garage.base.vertices:
        lines.append(f"v {x!r} {y!r}")
    for i, angle in enumerate(garage.base.angles):
        lines.append(f"angle {i} {angle}")
    for tile in garage.tiles:
        lines.append(" ".join(["tile", tile.label, "word"] + [str(a) for a in tile.word]))
    for g in garage.gluings:
        a, b = garage.tiles[g.tile_a].label, garage.tiles[g.tile_b].label
        lines.append(f"glue {a}.e{g.edge_a} {b}.e{g.edge_b}")
    return "\n".join(lines) + "\n"
