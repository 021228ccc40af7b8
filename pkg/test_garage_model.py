"""
Tests for garage validation, the family catalog and the garage file format
"""
import numpy as np
import pytest

from errors import (
    DisconnectedComplex, EdgeLengthMismatch, GarageParseError,
    GluingMismatch, NonRationalAngle, ParameterConstraintViolated
)
from exact_core import Angle
from garage_catalog import catalog_entries, generate
from garage_io import parse_garage, serialize_garage
from garage_model import boundary_angles, garage_group, validate_garage

HALF_EQUILATERAL = """\
base
v 0 0
v 1.7320508075688772 0
v 0 1
tile A word
tile B word 0
"""


def cyclic_match(seq, target) -> bool:
    """seq equals target up to rotation and reversal"""
    n = len(target)
    if len(seq) != n:
        return False
    for candidate in (list(seq), list(reversed(seq))):
        if any(candidate[k:] + candidate[:k] == list(target) for k in range(n)):
            return True
    return False


def corner_angle(pts, v) -> float:
    """Unsigned interior angle of a convex tile at vertex v, from coordinates"""
    p = np.asarray(pts[v], dtype=float)
    a = np.asarray(pts[v - 1], dtype=float) - p
    b = np.asarray(pts[(v + 1) % len(pts)], dtype=float) - p
    return float(np.arccos(np.clip(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)), -1.0, 1.0)))


class TestValidateGarage:
    """Base polygons and reflection complexes"""

    def test_square(self, square):
        assert square.tile_count == 1
        assert [str(a) for a in square.base.angles] == ["1/2"] * 4
        assert str(garage_group(square)) == "D_2"
        assert boundary_angles(square) == [(Angle(num=1, den=2), 1, "x1")] * 4

    def test_thm3_boundary(self, thm3_9):
        assert thm3_9.tile_count == 4
        angles = [str(b.angle) for b in thm3_9.boundary_vertices]
        assert cyclic_match(angles, ["1/9", "2/9", "1/3", "7/9", "2/9", "7/3"])
        assert str(garage_group(thm3_9)) == "D_9"

    def test_thm3_multiplicities(self, thm3_9):
        ks = {"x1": [], "x3": []}
        for _, k, cls in boundary_angles(thm3_9):
            ks[cls].append(k)
        assert sorted(ks["x1"]) == [1, 2, 2, 3]
        assert sorted(ks["x3"]) == [1, 3]

    def test_embedding_diagnostic(self, square, thm3_9):
        assert square.is_embedded
        # three tiles meet at the 7/3 corner, so the garage is only immersed
        assert not thm3_9.is_embedded

    def test_ward_q0_doubles_x3(self):
        n = 5
        q0 = generate("ward-stage", n, "q0")
        x3 = [(a, k) for a, k, cls in boundary_angles(q0) if cls == "x3"]
        assert x3 == [(Angle(num=2 * n - 3, den=n), 2)]

    def test_ward_q1_group(self):
        assert str(garage_group(generate("ward-stage", 5, "q1"))) == "D_5"

    def test_edge_length_mismatch(self):
        text = HALF_EQUILATERAL + "glue A.e0 B.e1\n"
        with pytest.raises(EdgeLengthMismatch):
            validate_garage(parse_garage(text))

    def test_disconnected(self):
        with pytest.raises(DisconnectedComplex):
            validate_garage(parse_garage(HALF_EQUILATERAL))

    def test_reflection_condition(self):
        text = HALF_EQUILATERAL.replace("tile B word 0", "tile B word 1") + "glue A.e0 B.e0\n"
        with pytest.raises(GluingMismatch):
            validate_garage(parse_garage(text))

    def test_irrational_angle(self):
        text = "base\nv 0 0\nv 2 0\nv 0 1\n"
        with pytest.raises(NonRationalAngle):
            validate_garage(parse_garage(text))

    @pytest.mark.parametrize("name, n, stage", catalog_entries(max_n=11))
    def test_catalog_angles_match_geometry(self, name, n, stage):
        garage = generate(name, n, stage)
        assert sum(b.k for b in garage.boundary_vertices) >= 3
        assert garage.base.order_n % garage_group(garage).order_n == 0
        for bv in garage.boundary_vertices:
            corners = garage.corner_classes[bv.vertex_class]
            assert len(corners) == bv.k
            total = 0.0
            for t, v in corners:
                measured = corner_angle(garage.tile_vertices(t), v)
                assert measured == pytest.approx(garage.base.angles[v].radians, abs=1e-9)
                total += measured
            assert total == pytest.approx(bv.angle.radians, abs=1e-8)


class TestCatalog:
    """Family generators and their parameter constraints"""

    def test_thm3_constraint(self):
        with pytest.raises(ParameterConstraintViolated, match="odd and divisible by 3"):
            generate("thm3", 8)
        with pytest.raises(ParameterConstraintViolated):
            generate("thm3", 3)

    def test_veech_isosceles(self):
        g = generate("veech-isosceles", 5)
        assert [str(a) for a in g.base.angles] == ["1/5", "1/5", "3/5"]

    def test_unknown_stage(self):
        with pytest.raises(ParameterConstraintViolated):
            generate("ward-stage", 5, "q7")


class TestGarageFile:
    """Line-oriented garage file format"""

    def test_round_trip(self, thm3_9):
        again = validate_garage(parse_garage(serialize_garage(thm3_9)))
        assert [t.word for t in again.tiles] == [t.word for t in thm3_9.tiles]
        assert again.gluings == thm3_9.gluings
        assert again.base.angles == thm3_9.base.angles
        assert [b.angle for b in again.boundary_vertices] == [b.angle for b in thm3_9.boundary_vertices]
        assert again.family == thm3_9.family

    def test_family_header(self):
        g = validate_garage(parse_garage("family thm3 9\n"))
        assert g.tile_count == 4

    def test_parse_error_line(self):
        with pytest.raises(GarageParseError) as info:
            parse_garage("base\nv 0 0\nbogus 1 2\n")
        assert info.value.line_no == 3

    def test_comments_ignored(self, square):
        text = "# a comment\n" + serialize_garage(square)
        assert validate_garage(parse_garage(text)).base.angles == square.base.angles
