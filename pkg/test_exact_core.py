"""
Unit tests for rational angles and dihedral groups
"""
from itertools import permutations

import numpy as np
import pytest

from errors import InvalidAngle
from exact_core import (
    Angle, DihedralElement, DihedralGroup, contains_minus_id,
    group_from_angles, reduce_angle, reflection_in_direction
)


class TestAngle:
    """Reduced rational angles"""

    def test_reduce(self):
        assert reduce_angle(2, 6) == Angle(num=1, den=3)
        assert str(reduce_angle(14, 18)) == "7/9"

    def test_invalid(self):
        with pytest.raises(InvalidAngle):
            reduce_angle(0, 5)
        with pytest.raises(InvalidAngle):
            reduce_angle(1, 0)
        with pytest.raises(InvalidAngle):
            Angle.parse("one/three")

    def test_parse_and_times(self):
        a = Angle.parse("3/9")
        assert (a.num, a.den) == (1, 3)
        assert a.times(3) == Angle(num=1, den=1)
        assert Angle.parse("1/9") < Angle.parse("2/9")


class TestDihedralGroup:
    """D_N arithmetic with (rot, flip) pairs"""

    def test_group_from_angles(self):
        angles = [Angle(num=1, den=9), Angle(num=1, den=9), Angle(num=7, den=9)]
        assert group_from_angles(angles) == DihedralGroup(order_n=9)
        square = [Angle(num=1, den=2)] * 4
        assert str(group_from_angles(square)) == "D_2"

    def test_minus_id(self):
        assert contains_minus_id(DihedralGroup(order_n=2))
        assert contains_minus_id(DihedralGroup(order_n=10))
        assert not contains_minus_id(DihedralGroup(order_n=9))

    def test_reflection_in_direction(self):
        g = DihedralGroup(order_n=4)
        s = reflection_in_direction(g, 1)
        assert s == DihedralElement(rot=1, flip=True, n=4)
        assert (s * s).is_identity
        with pytest.raises(IndexError):
            reflection_in_direction(g, 4)

    def test_composition(self):
        n = 9
        s2 = DihedralElement(rot=2, flip=True, n=n)
        s5 = DihedralElement(rot=5, flip=True, n=n)
        # two reflections compose to a rotation by twice the angle between their lines
        assert s2 * s5 == DihedralElement(rot=-3, flip=False, n=n)
        r = DihedralElement(rot=4, flip=False, n=n)
        assert r * r.inverse() == DihedralGroup(order_n=n).identity()
        assert len(DihedralGroup(order_n=n).elements()) == 2 * n

    def test_matrix_matches_group_law(self):
        n = 7
        a = DihedralElement(rot=3, flip=True, n=n)
        b = DihedralElement(rot=2, flip=False, n=n)
        assert (a * b).matrix() == pytest.approx(a.matrix() @ b.matrix())

    def test_generate_subgroup(self):
        g = DihedralGroup(order_n=6)
        sub = g.generate([DihedralElement(rot=0, flip=True, n=6), DihedralElement(rot=2, flip=True, n=6)])
        assert len(sub) == 6

    def test_parse_round_trip(self):
        e = DihedralElement(rot=3, flip=True, n=9)
        assert DihedralElement.parse(str(e), 9) == e
        with pytest.raises(ValueError):
            DihedralElement.parse("x3", 9)

    def test_minus_id_element(self):
        g = DihedralGroup(order_n=10)
        m = g.minus_id()
        assert m == DihedralElement(rot=5, flip=False, n=10)
        assert (m * m).is_identity
        with pytest.raises(ValueError):
            DihedralGroup(order_n=9).minus_id()

    def test_lift(self):
        s = DihedralElement(rot=1, flip=True, n=3)
        lifted = s.lift(9)
        assert lifted == DihedralElement(rot=3, flip=True, n=9)
        assert lifted.matrix() == pytest.approx(s.matrix())
        with pytest.raises(ValueError):
            s.lift(10)

    @pytest.mark.parametrize("n", range(1, 25))
    def test_group_law_matches_matrices(self, n):
        elements = DihedralGroup(order_n=n).elements()
        for g in elements:
            for h in elements:
                assert (g * h).matrix() == pytest.approx(g.matrix() @ h.matrix(), abs=1e-12)

    def test_minus_id_parity(self):
        for n in range(1, 101):
            found = any(np.allclose(g.matrix(), -np.eye(2)) for g in DihedralGroup(order_n=n).elements())
            assert contains_minus_id(DihedralGroup(order_n=n)) == found == (n % 2 == 0)

    def test_group_from_angles_ignores_order_and_scaling(self):
        reduced = [Angle(num=1, den=9), Angle(num=2, den=9), Angle(num=2, den=3)]
        unreduced = [Angle(num=2, den=18), Angle(num=6, den=27), Angle(num=4, den=6)]
        expected = DihedralGroup(order_n=9)
        assert unreduced == reduced
        for perm in permutations(unreduced):
            assert group_from_angles(list(perm)) == expected
        assert group_from_angles([reduce_angle(3, 12), reduce_angle(5, 15)]) == DihedralGroup(order_n=12)
