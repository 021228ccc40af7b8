"""
Command-line front end for the garage dynamics toolkit
"""
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import click

from config import LOG_LEVEL, SCAN_CONFIG
from cover_analyzer import CoverAnalyzer, certify_tiling
from direction_classifier import scan as scan_directions
from errors import GarageToolkitError
from flow_tracer import BilliardTable, billiard_trace, flow_trace
from garage_catalog import FAMILIES, generate
from garage_io import load_garage, serialize_garage
from growth_counter import growth_count
from repro_orchestrator import ReproOrchestrator
from report_renderer import garage_svg, render_frame, render_report, surface_svg
from saddle_connection_finder import saddle_connections
from suitability_screener import SuitabilityScreener, is_lattice_family
from translation_surface import TranslationSurface
from unfolding_engine import lift_point, unfold

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_REPRO = 0, 1, 2, 3

BUILTIN_SURFACES = {
    "torus": TranslationSurface.unit_torus,
    "double-pentagon": TranslationSurface.double_pentagon,
}


def parse_pair(text: str) -> Tuple[float, float]:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise click.BadParameter(f"expected 'x,y', got {text!r}")
    return x, y


def load_surface(source: str) -> TranslationSurface:
    """A built-in surface name, or a garage file to unfold"""
    if source in BUILTIN_SURFACES:
        return BUILTIN_SURFACES[source]()
    return unfold(load_garage(source))


def emit(text: str, output: Optional[str] = None):
    if output:
        Path(output).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {output}")
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("--log-level", default=LOG_LEVEL, show_default=True,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
def cli(log_level: str):
    """Rational billiards, parking garages and their translation surfaces."""
    logging.basicConfig(
        level=log_level.upper(),
        stream=sys.stderr,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        force=True,
    )


@cli.command()
@click.argument("family", type=click.Choice(FAMILIES))
@click.argument("n", type=int)
@click.argument("stage", required=False)
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the garage file here")
def gen(family: str, n: int, stage: Optional[str], output: Optional[str]):
    """Generate a catalog garage file."""
    emit(serialize_garage(generate(family, n, stage)), output)


@cli.command(name="unfold")
@click.argument("source")
@click.option("--svg", type=click.Path(dir_okay=False), help="Also draw the face layout")
def unfold_cmd(source: str, svg: Optional[str]):
    """Unfold a garage (or a built-in surface) and report its topology."""
    surface = load_surface(source)
    emit(render_report(surface.report(), f"unfold {source}"))
    if svg:
        emit(surface_svg(surface), svg)


@cli.command()
@click.argument("p_file")
@click.argument("q_file")
@click.option("--screen", is_flag=True, help="Run the suitability screen")
@click.option("--lattice/--no-lattice", default=None, help="Whether P is a lattice polygon (default: catalog lookup)")
def cover(p_file: str, q_file: str, screen: bool, lattice: Optional[bool]):
    """Analyze the branched cover induced by a reflection tiling of Q by P."""
    p, q = load_garage(p_file), load_garage(q_file)
    cert = certify_tiling(p, q)
    analyzer = CoverAnalyzer(cert)
    emit(render_report(analyzer.report(), f"cover {q.name} over {p.name}"))
    if screen:
        flag = is_lattice_family(p) if lattice is None else lattice
        emit(render_report(SuitabilityScreener(cert, flag, analyzer).screen(), "suitability"))


@cli.command()
@click.argument("source")
@click.option("--start", required=True, help="Start point x,y in garage coordinates")
@click.option("--dir", "direction", required=True, help="Direction dx,dy")
@click.option("--len", "length", type=float, default=100.0, show_default=True, help="Maximum flow length")
@click.option("--billiard", is_flag=True, help="Billiard flow in the garage instead of the unfolded flow")
@click.option("--tile", type=int, default=None, help="Tile holding the start point")
@click.option("--bounces", type=int, default=None, help="Bounce budget for --billiard")
@click.option("--svg", type=click.Path(dir_okay=False), help="Draw the trajectory")
def trace(source: str, start: str, direction: str, length: float, billiard: bool,
          tile: Optional[int], bounces: Optional[int], svg: Optional[str]):
    """Trace a billiard or straight-line trajectory."""
    x, d = parse_pair(start), parse_pair(direction)
    if billiard:
        garage = load_garage(source)
        kwargs = {"max_bounces": bounces} if bounces is not None else {}
        trajectory = billiard_trace(garage, x, d, tile=tile, max_len=length, **kwargs)
        drawing = garage_svg(garage, trajectory) if svg else None
    else:
        if source in BUILTIN_SURFACES:
            surface = BUILTIN_SURFACES[source]()
            face = None
        else:
            garage = load_garage(source)
            surface = unfold(garage)
            if tile is None:
                tile = BilliardTable(garage).tile_containing(x)
            face, x = lift_point(surface, tile, x)
        trajectory = flow_trace(surface, x, d, length, face=face)
        drawing = surface_svg(surface, trajectory) if svg else None
    emit(render_report(trajectory, f"trace {source}"))
    if drawing:
        emit(drawing, svg)


@cli.command()
@click.argument("source")
@click.option("--dirs", type=int, default=SCAN_CONFIG["default_directions"], show_default=True)
@click.option("--budget", type=int, default=SCAN_CONFIG["default_budget"], show_default=True,
              help="Edge crossings per test orbit")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--sc-bound", type=float, default=SCAN_CONFIG["sc_bound"], show_default=True,
              help="Also classify saddle-connection directions up to this length")
def scan(source: str, dirs: int, budget: int, seed: int, sc_bound: float):
    """Classify directions as periodic, minimal or inconclusive."""
    frame = scan_directions(load_surface(source), n_dirs=dirs, budget=budget, seed=seed, sc_bound=sc_bound)
    emit(render_frame(frame, f"scan {source}"))


@cli.command()
@click.argument("source")
@click.option("--lmax", type=float, required=True, help="Length bound")
@click.option("--fit", is_flag=True, help="Fit the growth exponent at lmax/8, lmax/4, lmax/2, lmax")
@click.option("--method", type=click.Choice(["auto", "cylinders", "saddle_connections"]), default="auto",
              show_default=True)
def sc(source: str, lmax: float, fit: bool, method: str):
    """List saddle-connection holonomies up to a length bound."""
    surface = load_surface(source)
    vectors = saddle_connections(surface, lmax)
    emit(render_report({"count": len(vectors), "holonomies": vectors}, f"sc {source} lmax={lmax:g}"))
    if fit:
        values: List[float] = [lmax / 8, lmax / 4, lmax / 2, lmax]
        emit(render_report(growth_count(surface, values, method), "growth"))


@cli.command()
@click.argument("script", type=click.Choice(["thm3", "ward-impossibility"]))
@click.argument("n", type=int)
def repro(script: str, n: int):
    """Re-derive the claims of a worked example and check them exactly."""
    report = ReproOrchestrator().run(script, n)
    emit(render_report(report, f"repro {script} {n}"))
    status = "PASS" if report.passed else "FAIL: " + ", ".join(c.name for c in report.failed_claims)
    click.echo(status)
    return EXIT_OK if report.passed else EXIT_REPRO


def main(argv: Optional[List[str]] = None) -> int:
    try:
        result = cli.main(args=argv, prog_name="garage", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except OSError as e:
        click.echo(f"error: {e.strerror or e}: {e.filename}", err=True)
        return EXIT_USAGE
    except GarageToolkitError as e:
        logger.debug("Domain failure", exc_info=True)
        click.echo(f"error: {type(e).__name__}: {e}", err=True)
        return EXIT_DOMAIN
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
