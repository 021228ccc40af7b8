"""
Tests for tiling certification, branched covers, screening and the
height-split heuristic
"""
from math import cos, pi, sqrt

import pytest

from aperiodicity_checker import IRRATIONAL, RATIONAL, aperiodicity_evidence, continued_fraction
from cover_analyzer import (
    CoverAnalyzer, branch_point_count, certify_tiling, cover_analysis, fiber_table, stabilizer
)
from errors import BudgetExhausted, GeometryMismatch, NoCylinderDecomposition, PointOnBoundary
from garage_catalog import generate, generate_base
from repro_orchestrator import ReproOrchestrator, repro
from suitability_screener import is_lattice_family, screen_catalog, suitability_screen


@pytest.fixture(scope="module")
def thm3_cert():
    return certify_tiling(generate_base("thm3", 9), generate("thm3", 9))


@pytest.fixture(scope="module")
def thm3_report(thm3_cert):
    return CoverAnalyzer(thm3_cert).report()


class TestCertifyTiling:

    def test_thm3(self, thm3_cert, isosceles_9):
        assert thm3_cert.tile_count == 4
        assert thm3_cert.base.base.angles == isosceles_9.base.angles

    def test_wrong_base(self, thm3_9):
        with pytest.raises(GeometryMismatch):
            certify_tiling(generate("veech-isosceles", 5), thm3_9)

    def test_base_must_be_one_tile(self, thm3_9):
        with pytest.raises(GeometryMismatch):
            certify_tiling(thm3_9, thm3_9)


class TestCoverAnalysis:
    """The four-tile garage over the (1/9, 1/9, 7/9) triangle"""

    def test_degree_and_branch_set(self, thm3_report):
        assert thm3_report.degree == 4
        assert thm3_report.index == 1
        assert thm3_report.branch_set == ["x1"]

    def test_riemann_hurwitz(self, thm3_report):
        assert thm3_report.euler_q == -26
        assert thm3_report.euler_p == -6
        assert thm3_report.ramification_total == 2
        assert thm3_report.rh_consistent
        assert thm3_report.paths_agree

    @pytest.mark.parametrize("name, n, stage", [
        ("thm3", 9, None), ("thm3", 15, None),
        ("ward-stage", 5, "q0"), ("ward-stage", 5, "q0-right"), ("ward-stage", 5, "q1"), ("ward-stage", 5, "q2"),
        ("ward-stage", 7, "q0"), ("ward-stage", 7, "q0-right"), ("ward-stage", 7, "q1"), ("ward-stage", 7, "q2"),
    ])
    def test_riemann_hurwitz_across_catalog(self, name, n, stage):
        cert = certify_tiling(generate_base(name, n), generate(name, n, stage))
        report = CoverAnalyzer(cert).report()
        assert report.euler_q == report.degree * report.euler_p - report.ramification_total
        assert report.rh_consistent
        assert report.paths_agree

    def test_functional_form(self, thm3_cert, thm3_report):
        assert cover_analysis(thm3_cert) == thm3_report

    def test_fibers_sum_to_degree(self, thm3_report):
        for point in thm3_report.point_fibers:
            assert sum(pre.ramification for pre in point.preimages) == thm3_report.degree

    def test_unique_branch_point(self, thm3_cert):
        flags = branch_point_count(thm3_cert)
        assert sum(flags.values()) == 1

    def test_stabilizer(self, thm3_cert):
        group = stabilizer(thm3_cert)
        assert any(g.is_identity for g in group)
        assert len(group) <= 2 * 9

    def test_fiber_table(self, thm3_report):
        table = fiber_table(thm3_report)
        assert {"x1", "x3"} <= set(table["base_class"])
        assert (table["e"] >= 1).all()

    def test_ward_q1(self):
        n = 5
        report = CoverAnalyzer(certify_tiling(generate_base("ward", n), generate("ward-stage", n, "q1"))).report()
        assert report.degree == 2
        assert "x2" in report.branch_set
        assert report.rh_consistent

    def test_ward_q2(self):
        n = 5
        analyzer = CoverAnalyzer(certify_tiling(generate_base("ward", n), generate("ward-stage", n, "q2")))
        report = analyzer.report()
        assert report.degree == 3
        assert sum(analyzer.branch_points().values()) >= 2


class TestSuitability:

    def test_thm3_is_candidate(self, thm3_cert):
        verdict = suitability_screen(thm3_cert, is_lattice_family(thm3_cert.tiled))
        assert verdict.overall == "suitable-candidate"
        assert verdict.reason is None
        assert [c.name for c in verdict.checks] == [
            "lattice_base", "unique_branch_point", "minus_id_excluded",
            "no_even_denominators", "branch_point_fixed_by_stabilizer",
        ]

    def test_non_lattice_flag_rejects(self, thm3_cert):
        verdict = suitability_screen(thm3_cert, False)
        assert verdict.overall == "rejected"
        assert verdict.reason.startswith("lattice_base")

    @pytest.mark.parametrize("stage", ["q1", "q2"])
    def test_ward_stages_rejected(self, stage):
        cert = certify_tiling(generate_base("ward", 5), generate("ward-stage", 5, stage))
        verdict = suitability_screen(cert, True)
        assert verdict.overall == "rejected"
        assert verdict.reason.startswith("unique_branch_point")

    def test_screen_catalog(self):
        frame = screen_catalog(max_n=15)
        even = frame[frame["even_denominator"]]
        assert (~even["minus_id_excluded"] | ~even["no_even_denominators"]).all()
        thm3 = frame[frame["family"] == "thm3"]
        assert len(thm3) > 0
        assert thm3["minus_id_excluded"].all()
        assert thm3["no_even_denominators"].all()


class TestRepro:

    def test_thm3(self):
        report = repro("thm3", 9)
        assert report.passed, report.failed_claims

    @pytest.mark.parametrize("n", [5, 7])
    def test_ward(self, n):
        report = repro("ward-impossibility", n)
        assert report.passed, report.failed_claims

    def test_unknown_script(self):
        with pytest.raises(ValueError):
            ReproOrchestrator().run("thm4", 9)


class TestContinuedFraction:

    def test_rational(self):
        quotients, convergent = continued_fraction(0.5)
        assert quotients == [0, 2]
        assert convergent == (1, 2)
        assert continued_fraction(3 / 7)[1] == (3, 7)

    def test_golden_ratio_is_irrational(self):
        quotients, convergent = continued_fraction((sqrt(5) - 1) / 2)
        assert convergent is None
        assert set(quotients[1:]) == {1}


class TestHeightSplit:

    def test_pentagon_center(self, double_pentagon):
        report = aperiodicity_evidence(double_pentagon, (0, (0.0, 0.0)), (0.0, 1.0))
        assert report.label == "HEURISTIC"
        assert report.ratio == pytest.approx((5 - sqrt(5)) / 10, abs=1e-9)
        assert report.cylinder_height == pytest.approx(1.118033988749895, abs=1e-9)
        assert report.verdict == IRRATIONAL

    def test_torus_rational(self, torus):
        report = aperiodicity_evidence(torus, (0, (0.3, 0.5)), (1.0, 0.0))
        assert report.ratio == pytest.approx(0.5)
        assert report.convergent == (1, 2)
        assert report.verdict == RATIONAL
        assert report.circumference == pytest.approx(1.0)

    def test_torus_irrational(self, torus):
        report = aperiodicity_evidence(torus, (0, (0.3, sqrt(2) / 2)), (1.0, 0.0))
        assert report.verdict == IRRATIONAL

    def test_point_on_boundary(self, double_pentagon):
        with pytest.raises(PointOnBoundary):
            aperiodicity_evidence(double_pentagon, (0, (cos(2 * pi / 5), 0.0)), (0.0, 1.0))

    def test_not_periodic(self, torus):
        with pytest.raises((NoCylinderDecomposition, BudgetExhausted)):
            aperiodicity_evidence(torus, (0, (0.5, 0.5)), (1.0, sqrt(2)))
