"""
Tests for flows, billiards, cylinders, saddle connections, growth counts
and direction classification
"""
from math import atan2, cos, gcd, pi, sin, sqrt

import numpy as np
import pytest

from cylinder_decomposer import cylinder_decomposition
import direction_classifier
from direction_classifier import CellGrid, DirectionClassifier, classify_direction, scan
from errors import BudgetExhausted, StartAtSingularity, StartOnBoundary
from flow_tracer import billiard_trace, flow_trace, project_billiard
from garage_catalog import generate
from growth_counter import fit_exponent, growth_count
from models import DirectionVerdict, TerminationReason
from saddle_connection_finder import saddle_connections
from unfolding_engine import lift_point, unfold

GOLDEN = (1 + sqrt(5)) / 2


def keys(vectors):
    return {(round(v.dx, 9) + 0.0, round(v.dy, 9) + 0.0) for v in vectors}


def primitive_vectors(bound: float):
    r = int(bound)
    return {
        (float(a), float(b))
        for a in range(-r, r + 1) for b in range(-r, r + 1)
        if (a, b) != (0, 0) and gcd(a, b) == 1 and a * a + b * b <= bound * bound
    }


class TestFlow:

    def test_torus_horizontal_closes(self, torus):
        traj = flow_trace(torus, (0.5, 0.5), (1.0, 0.0), 10.0)
        assert traj.termination == TerminationReason.CLOSED
        assert traj.total_length == pytest.approx(1.0)

    def test_torus_slope_half_closes(self, torus):
        traj = flow_trace(torus, (0.5, 0.5), (2.0, 1.0), 10.0)
        assert traj.termination == TerminationReason.CLOSED
        assert traj.total_length == pytest.approx(sqrt(5))

    def test_segments_keep_direction(self, double_pentagon):
        u = (cos(0.3), sin(0.3))
        traj = flow_trace(double_pentagon, (0.1, 0.05), u, 25.0, face=0)
        assert traj.total_length == pytest.approx(25.0)
        for seg in traj.segments:
            dx, dy = seg.exit[0] - seg.entry[0], seg.exit[1] - seg.entry[1]
            assert abs(dx * u[1] - dy * u[0]) < 1e-9
            assert dx * u[0] + dy * u[1] >= 0

    def test_start_at_cone_point(self, double_pentagon):
        with pytest.raises(StartAtSingularity):
            flow_trace(double_pentagon, (1.0, 0.0), (0.0, 1.0), 5.0, face=0)


class TestBilliard:

    def test_square_center(self, square):
        traj = billiard_trace(square, (0.5, 0.5), (1.0, 0.0))
        assert traj.termination == TerminationReason.CLOSED
        assert traj.total_length == pytest.approx(2.0)
        assert traj.bounces == 2

    def test_square_diagonal(self, square):
        traj = billiard_trace(square, (0.25, 0.5), (1.0, 1.0))
        assert traj.termination == TerminationReason.CLOSED
        assert traj.total_length == pytest.approx(2 * sqrt(2))

    def test_start_on_boundary(self, square):
        with pytest.raises(StartOnBoundary):
            billiard_trace(square, (0.5, 0.0), (1.0, 1.0))

    def test_matches_unfolded_flow(self, isosceles_9, m_p_9):
        start = tuple(float(c) for c in np.mean(np.array(isosceles_9.tile_vertices(0)), axis=0))
        u = (cos(0.3), sin(0.3))
        billiard = project_billiard(billiard_trace(isosceles_9, start, u, max_len=20.0), m_p_9)
        face, lifted = lift_point(m_p_9, 0, start)
        flow = flow_trace(m_p_9, lifted, u, 20.0, face=face)
        assert len(billiard.segments) == len(flow.segments)
        for a, b in zip(billiard.segments, flow.segments):
            assert a.face == b.face
            assert a.exit == pytest.approx(b.exit, abs=1e-9)

    @pytest.mark.slow
    @pytest.mark.parametrize("family", ["veech-isosceles", "veech-right", "ward"])
    def test_matches_unfolded_flow_random(self, family):
        garage = generate(family, 5)
        surface = unfold(garage)
        corners = np.array(garage.tile_vertices(0), dtype=float)
        for seed in range(100):
            rng = np.random.default_rng(seed)
            start = tuple(float(c) for c in rng.dirichlet(np.ones(len(corners))) @ corners)
            angle = rng.uniform(0, 2 * np.pi)
            u = (cos(angle), sin(angle))
            raw = billiard_trace(garage, start, u, max_bounces=1000)
            billiard = project_billiard(raw, surface)
            face, lifted = lift_point(surface, 0, start)
            flow = flow_trace(surface, lifted, u, raw.total_length, face=face)
            # the flow may add a zero-length step across the final bounce edge
            assert len(flow.segments) - len(billiard.segments) in (0, 1)
            for a, b in zip(billiard.segments, flow.segments):
                assert a.exit == pytest.approx(b.exit, abs=1e-9)


class TestCylinders:

    def test_torus(self, torus):
        (cyl,) = cylinder_decomposition(torus, (1.0, 0.0))
        assert cyl.circumference == pytest.approx(1.0)
        assert cyl.height == pytest.approx(1.0)

    def test_double_pentagon_vertical(self, double_pentagon):
        cylinders = cylinder_decomposition(double_pentagon, (0.0, 1.0))
        assert [c.circumference for c in cylinders] == pytest.approx([1.902113032590307, 3.077683537175253])
        assert [c.height for c in cylinders] == pytest.approx([0.690983005625053, 1.118033988749895])
        assert sum(c.area for c in cylinders) == pytest.approx(double_pentagon.area)


class TestSaddleConnections:

    def test_torus_short(self, torus):
        assert len(saddle_connections(torus, 2.5)) == 16

    def test_torus_primitive_vectors(self, torus):
        assert keys(saddle_connections(torus, 20.0)) == primitive_vectors(20.0)

    @pytest.mark.slow
    def test_torus_primitive_vectors_long(self, torus):
        assert keys(saddle_connections(torus, 50.0)) == primitive_vectors(50.0)

    def test_negation_symmetry(self, double_pentagon):
        found = keys(saddle_connections(double_pentagon, 4.0))
        assert found
        assert found == {(-x + 0.0, -y + 0.0) for x, y in found}

    def test_monotone_in_length(self, double_pentagon):
        short = keys(saddle_connections(double_pentagon, 2.0))
        long = keys(saddle_connections(double_pentagon, 3.5))
        assert short < long

    def test_pentagon_systole(self, double_pentagon):
        # below 1.1 times the side length only the five glued sides remain, in both orientations
        pts = [(cos(2 * pi * k / 5), sin(2 * pi * k / 5)) for k in range(5)]
        sides = [(pts[(k + 1) % 5][0] - pts[k][0], pts[(k + 1) % 5][1] - pts[k][1]) for k in range(5)]
        expected = sorted(sides + [(-x, -y) for x, y in sides], key=lambda v: atan2(v[1], v[0]))
        side = sqrt(sides[0][0] ** 2 + sides[0][1] ** 2)
        found = sorted(keys(saddle_connections(double_pentagon, 1.1 * side)), key=lambda v: atan2(v[1], v[0]))
        assert len(found) == 10
        for v, w in zip(found, expected):
            assert v == pytest.approx(w, abs=1e-8)

    def test_bad_bound(self, torus):
        with pytest.raises(ValueError):
            saddle_connections(torus, 0.0)


class TestGrowth:

    @pytest.mark.parametrize("values", [[1.0, 2.0, 3.0], [1.0, 2.0, 2.0, 3.0], [0.0, 1.0, 2.0, 3.0]])
    def test_bad_values(self, torus, values):
        with pytest.raises(ValueError):
            growth_count(torus, values)

    def test_unknown_method(self, torus):
        with pytest.raises(ValueError):
            growth_count(torus, [1.0, 2.0, 3.0, 4.0], method="bogus")

    def test_zero_count(self):
        with pytest.raises(ValueError):
            fit_exponent([1.0, 2.0, 3.0, 4.0], [0, 1, 2, 3])

    def test_scaling(self, torus):
        base = growth_count(torus, [1.5, 2.5, 3.5, 4.5], method="saddle_connections")
        scaled = growth_count(torus.scaled(2.0), [3.0, 5.0, 7.0, 9.0], method="saddle_connections")
        assert [r.N for r in scaled.rows] == [r.N for r in base.rows]

    def test_methods_agree_on_torus(self, torus):
        values = [1.5, 2.5, 3.5, 4.5]
        by_cylinders = growth_count(torus, values, method="cylinders")
        by_connections = growth_count(torus, values, method="saddle_connections")
        assert [r.N for r in by_cylinders.rows] == [r.N for r in by_connections.rows]
        assert by_cylinders.rows[0].N == 2

    @pytest.mark.slow
    def test_torus_quadratic(self, torus):
        report = growth_count(torus, [10.0, 20.0, 40.0, 80.0], method="saddle_connections")
        assert report.slope == pytest.approx(2.0, abs=0.1)

    @pytest.mark.slow
    def test_double_pentagon_quadratic(self, double_pentagon):
        report = growth_count(double_pentagon, [10.0, 20.0, 40.0, 60.0], method="saddle_connections")
        assert 1.8 <= report.slope <= 2.2


class TestClassify:

    def test_torus_rational_direction(self, torus):
        report = classify_direction(torus, (1.0, 0.0))
        assert report.verdict == DirectionVerdict.PERIODIC
        assert report.area_error < 1e-6

    def test_torus_golden_direction(self, torus):
        report = classify_direction(torus, (1.0, GOLDEN), budget=4000)
        assert report.verdict == DirectionVerdict.MINIMAL
        assert [s.crossings for s in report.discrepancy] == [500, 1000, 2000, 4000]

    def test_pentagon_vertical(self, double_pentagon):
        report = classify_direction(double_pentagon, (0.0, 1.0))
        assert report.verdict == DirectionVerdict.PERIODIC
        assert len(report.cylinders) == 2

    @pytest.mark.slow
    def test_torus_golden_direction_long(self, torus):
        report = classify_direction(torus, (1.0, GOLDEN), budget=10**5)
        assert report.verdict == DirectionVerdict.MINIMAL

    @pytest.mark.slow
    def test_saddle_directions_on_m_q(self, m_q_9):
        frame = scan(m_q_9, n_dirs=1, budget=1000, sc_bound=2.0)
        saddle = frame[frame["source"] == "saddle"]
        assert len(saddle) > 0
        assert (saddle["verdict"] == DirectionVerdict.PERIODIC).all()

    def test_scan(self, torus):
        frame = scan(torus, n_dirs=4, budget=500, sc_bound=1.5)
        assert list(frame.columns) == ["dx", "dy", "source", "verdict", "cylinders", "discrepancy"]
        assert len(frame) == 8
        assert (frame["verdict"] == DirectionVerdict.PERIODIC).all()

    def test_forced_failure_on_periodic_direction(self, m_q_9, monkeypatch):
        def give_up(surface, u):
            raise BudgetExhausted("forced")

        monkeypatch.setattr(direction_classifier, "cylinder_decomposition", give_up)
        report = classify_direction(m_q_9, (1.0, 0.0), budget=2000)
        assert report.verdict == DirectionVerdict.INCONCLUSIVE
        assert report.note == "forced"

    @pytest.mark.slow
    @pytest.mark.parametrize("angle", [1.0, 0.1 + sqrt(2) / 3, 2.0 + sqrt(3) / 7])
    def test_generic_directions_on_m_q(self, m_q_9, angle):
        samples = DirectionClassifier(m_q_9).equidistribution((cos(angle), sin(angle)), 10**5)
        assert samples[-1].discrepancy < samples[0].discrepancy
        assert samples[-1].discrepancy < 0.05


class TestCellGrid:

    def test_torus_bins(self, torus):
        grid = CellGrid(torus, 20)
        assert len(grid.areas) == 400
        assert grid.fractions == pytest.approx(np.full(400, 1 / 400))

    def test_one_partition_for_many_faces(self, m_q_9):
        grid = CellGrid(m_q_9, 20)
        assert len(m_q_9.faces) == 72
        assert len(grid.areas) <= 400
        assert grid.fractions.sum() == pytest.approx(1.0)
        assert grid.coverage_bound > 0.5 / 400
        assert grid.fractions.max() < 1.5 / 400

    def test_cell_lookup(self, m_q_9):
        grid = CellGrid(m_q_9, 20)
        f = 5
        pts = m_q_9.face_points[f]
        center = (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))
        assert 0 <= grid.cell(f, center) < len(grid.areas)
