"""
Demo Script for the garage dynamics toolkit
Run this to see the pipeline in action
"""
from math import sqrt

from aperiodicity_checker import aperiodicity_evidence
from cover_analyzer import CoverAnalyzer, certify_tiling
from cylinder_decomposer import cylinder_decomposition
from direction_classifier import classify_direction
from flow_tracer import billiard_trace
from garage_catalog import generate, generate_base
from growth_counter import growth_count
from suitability_screener import SuitabilityScreener, is_lattice_family
from translation_surface import TranslationSurface
from unfolding_engine import unfold


def demo_four_tile_garage(n: int = 9):
    """Demo: four reflected copies of the (1/n, 1/n, (n-2)/n) triangle"""
    print("=" * 80)
    print(f"DEMO: Four-tile garage over the isosceles triangle, n = {n}")
    print("=" * 80)
    print()

    q = generate("thm3", n)
    p = generate_base("thm3", n)
    print("Garage:")
    print(f"  Tiles: {q.tile_count}")
    print(f"  Boundary angles: {', '.join(str(b.angle) for b in q.boundary_vertices)}")
    print(f"  Group: {q.group()}")
    print()

    m_q = unfold(q)
    print(f"Unfolded surface: {len(m_q.faces)} faces, genus {m_q.genus()}, "
          f"cone multiples {sorted(m_q.cone_multiples)}")
    print()

    cert = certify_tiling(p, q)
    analyzer = CoverAnalyzer(cert)
    report = analyzer.report()
    print("Branched cover:")
    print(f"  Degree: {report.degree}")
    print(f"  Branch set: {report.branch_set}")
    print(f"  Riemann-Hurwitz: chi(M_Q) = {report.euler_q} = {report.degree} * {report.euler_p} "
          f"- {report.ramification_total}  ({'ok' if report.rh_consistent else 'MISMATCH'})")
    print()

    verdict = SuitabilityScreener(cert, is_lattice_family(q), analyzer).screen()
    print("Suitability screen:")
    for check in verdict.checks:
        print(f"  {'✓' if check.passed else '✗'} {check.name}: {check.evidence}")
    print(f"  Overall: {verdict.overall}")
    print()


def demo_double_pentagon():
    """Demo: cylinders, height split and growth on the double pentagon"""
    print("=" * 80)
    print("DEMO: Double pentagon, vertical direction")
    print("=" * 80)
    print()

    surface = TranslationSurface.double_pentagon()
    print(f"Genus {surface.genus()}, area {surface.area:.6f}")
    print()

    print("Cylinders in direction (0, 1):")
    for cyl in cylinder_decomposition(surface, (0.0, 1.0)):
        print(f"  circumference {cyl.circumference:.6f}, height {cyl.height:.6f}, "
              f"modulus {cyl.modulus:.6f}")
    print()

    split = aperiodicity_evidence(surface, (0, (0.0, 0.0)), (0.0, 1.0))
    print(f"Center of the first pentagon ({split.label}):")
    print(f"  Height ratio: {split.ratio:.12f}")
    print(f"  Partial quotients: {split.partial_quotients[:8]} ...")
    print(f"  Verdict: {split.verdict}")
    print()

    growth = growth_count(surface, [2.0, 4.0, 8.0, 16.0])
    print(f"Growth of N(T) by {growth.method}:")
    for row in growth.rows:
        print(f"  N({row.T:g}) = {row.N}")
    print(f"  Fitted exponent: {growth.slope:.3f}")
    print()


def demo_billiards_and_directions():
    """Demo: a right-triangle billiard and direction classification on the torus"""
    print("=" * 80)
    print("DEMO: Billiards and direction classification")
    print("=" * 80)
    print()

    triangle = generate("veech-right", 4)
    traj = billiard_trace(triangle, (0.3, 0.1), (1.0, 2.0), max_bounces=50)
    print(f"Billiard in {triangle.name}: {len(traj.segments)} segments, {traj.bounces} bounces, "
          f"{traj.termination.value} after length {traj.total_length:.6f}")
    print()

    torus = TranslationSurface.unit_torus()
    for label, direction in (("rational (1, 2)", (1.0, 2.0)), ("golden", (1.0, (1 + sqrt(5)) / 2))):
        report = classify_direction(torus, direction, budget=4000)
        print(f"Torus direction {label}: {report.verdict.value}")
        for sample in report.discrepancy:
            print(f"  D({sample.crossings}) = {sample.discrepancy:.5f}")
    print()


def interactive_demo():
    """Interactive demo - let user choose"""
    print("\n" + "=" * 80)
    print("🎯 Garage Dynamics Toolkit - Interactive Demo")
    print("=" * 80)
    print()
    print("Choose a demo scenario:")
    print("1. Four-tile garage and its branched cover")
    print("2. Double pentagon cylinders and growth")
    print("3. Billiards and direction classification")
    print("4. Run All Demos")
    print("0. Exit")
    print()

    choice = input("Enter your choice (0-4): ").strip()

    if choice == "1":
        demo_four_tile_garage()
    elif choice == "2":
        demo_double_pentagon()
    elif choice == "3":
        demo_billiards_and_directions()
    elif choice == "4":
        demo_four_tile_garage()
        print("\n" + "=" * 80 + "\n")
        demo_double_pentagon()
        print("\n" + "=" * 80 + "\n")
        demo_billiards_and_directions()
    elif choice == "0":
        print("Goodbye!")
        return
    else:
        print("Invalid choice. Please try again.")
        interactive_demo()
        return

    print("\n" + "=" * 80)
    again = input("\nWould you like to try another demo? (y/n): ").strip().lower()
    if again == 'y':
        interactive_demo()
    else:
        print("\n✅ Demo complete! Try `python main.py --help` for the full command set.")


if __name__ == "__main__":
    try:
        interactive_demo()
    except KeyboardInterrupt:
        print("\n\n👋 Demo interrupted. Goodbye!")
    except Exception as e:
        print(f"\n❌ Error: {e}")
        print("\nMake sure all dependencies are installed:")
        print("pip install -r requirements.txt")
