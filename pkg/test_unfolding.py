"""
Tests for the unfolding construction and translation surface topology
"""
import pytest

from errors import SurfaceError
from garage_catalog import catalog_entries, generate
from garage_io import parse_garage
from garage_model import garage_group, validate_garage
from translation_surface import TranslationSurface
from unfolding_engine import lift_point, unfold


class TestUnfold:
    """Face counts, genus and cone points of unfolded garages"""

    def test_square_is_torus(self, square):
        s = unfold(square)
        assert len(s.faces) == 4
        assert s.genus() == 1
        assert s.singularities() == []

    @pytest.mark.parametrize("n, faces, genus, cone", [
        (5, 10, 2, 3),
        (9, 18, 4, 7),
    ])
    def test_veech_isosceles(self, n, faces, genus, cone):
        s = unfold(generate("veech-isosceles", n))
        assert len(s.faces) == faces
        assert s.genus() == genus
        assert [x.cone_multiple for x in s.singularities()] == [cone]

    def test_ward(self):
        s = unfold(generate("ward", 5))
        assert len(s.faces) == 20
        assert s.genus() == 4
        assert [x.cone_multiple for x in s.singularities()] == [7]

    def test_thm3(self, m_q_9):
        assert len(m_q_9.faces) == 72
        assert len(m_q_9.classes) == 10
        assert m_q_9.euler_characteristic() == -26
        assert m_q_9.genus() == 14

    @pytest.mark.parametrize("name, n, stage", catalog_entries(max_n=15))
    def test_catalog_topology(self, name, n, stage):
        garage = generate(name, n, stage)
        s = unfold(garage)
        assert s.validate()
        assert len(s.faces) == 2 * garage_group(garage).order_n * garage.tile_count
        assert sum(k - 1 for k in s.cone_multiples) == 2 * s.genus() - 2

    def test_rectangle_is_torus(self):
        rectangle = validate_garage(parse_garage("base\nv 0 0\nv 1 0\nv 1 2\nv 0 2\n"))
        s = unfold(rectangle)
        assert len(s.faces) == 4
        assert s.genus() == 1
        assert s.singularities() == []
        assert s.area == pytest.approx(8.0)

    def test_cone_angle(self, m_p_9):
        (point,) = m_p_9.singularities()
        assert m_p_9.cone_angle(point.vertex_class) == 7
        with pytest.raises(IndexError):
            m_p_9.cone_angle(len(m_p_9.classes))

    def test_faces_record_copy_and_tile(self, m_q_9, thm3_9):
        assert {f.tile for f in m_q_9.faces} == set(range(thm3_9.tile_count))
        assert len({f.copy for f in m_q_9.faces}) == 18

    def test_lift_point(self, m_p_9, isosceles_9):
        f, p = lift_point(m_p_9, 0, (0.5, 0.1))
        assert m_p_9.faces[f].copy.is_identity
        assert m_p_9.face_contains(f, p)


class TestTranslationSurface:
    """Surfaces built directly from polygons"""

    def test_torus(self, torus):
        assert torus.genus() == 1
        assert torus.marked_points == [0]
        assert torus.cone_classes == []
        assert torus.singular_classes() == [0]
        assert torus.area == pytest.approx(1.0)

    def test_double_pentagon(self, double_pentagon):
        assert double_pentagon.genus() == 2
        assert [x.cone_multiple for x in double_pentagon.singularities()] == [3]
        assert double_pentagon.area == pytest.approx(5 * 0.9510565162951535, rel=1e-12)

    def test_triangulate_keeps_topology(self, double_pentagon):
        tri = double_pentagon.triangulate()
        assert all(f.size == 3 for f in tri.faces)
        assert tri.genus() == 2
        assert tri.area == pytest.approx(double_pentagon.area)
        assert sorted(tri.cone_multiples)[-1] == 3

    def test_scaled(self, torus):
        assert torus.scaled(2.0).area == pytest.approx(4.0)

    def test_unpaired_edge(self):
        square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        with pytest.raises(SurfaceError):
            TranslationSurface.from_polygons([square], [((0, 0), (0, 2))])

    def test_non_opposite_holonomy(self):
        square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        with pytest.raises(SurfaceError):
            TranslationSurface.from_polygons([square], [((0, 0), (0, 1)), ((0, 2), (0, 3))])

    def test_report(self, m_p_9):
        report = m_p_9.report()
        assert report.genus == 4
        assert report.faces == 18
        assert report.euler_characteristic == -6
