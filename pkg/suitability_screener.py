"""
Suitability Screener
Screens a reflection tiling P -> Q for the properties that make the induced
cover a source of non-lattice surfaces with optimal dynamics
"""
import logging
from typing import List, Optional, Tuple

import pandas as pd

from config import load_lattice_catalog
from cover_analyzer import CoverAnalyzer, TilingCertificate
from errors import GarageToolkitError
from garage_catalog import base_family_of, catalog_entries, generate
from garage_model import Garage
from models import CheckResult, SuitabilityVerdict

logger = logging.getLogger(__name__)

APERIODICITY_NOTE = (
    "aperiodicity of the branch point is not decided here; "
    "aperiodicity_evidence gives a HEURISTIC height-split check"
)


def is_lattice_family(garage: Garage, catalog: Optional[dict] = None) -> bool:
    """Whether the garage's family is listed in the lattice catalog for its parameter"""
    if garage.family is None:
        return False
    catalog = catalog if catalog is not None else load_lattice_catalog()
    entry = catalog.get(base_family_of(garage.family.name))
    if entry is None:
        return False
    return garage.family.n >= int(entry.get("min_n", 3))


def minus_id_checks(q: Garage) -> Tuple[CheckResult, CheckResult]:
    """The two -Id screens, which only need Q"""
    n_q = q.group().order_n
    odd = CheckResult(
        name="minus_id_excluded",
        passed=n_q % 2 == 1,
        evidence=f"G_Q = D_{n_q}, -Id {'absent' if n_q % 2 else 'present'}",
    )
    even = [f"{b.base_class}(k={b.k})={b.angle}" for b in q.boundary_vertices if b.angle.den % 2 == 0]
    no_even = CheckResult(
        name="no_even_denominators",
        passed=not even,
        evidence="all boundary angles have odd denominators" if not even else f"even denominators at {', '.join(even)}",
    )
    return odd, no_even


class SuitabilityScreener:
    """Runs the five checks in order; failures are verdicts, never errors"""

    def __init__(self, cert: TilingCertificate, lattice_flag: bool, analyzer: Optional[CoverAnalyzer] = None):
        self.cert = cert
        self.lattice_flag = lattice_flag
        self.analyzer = analyzer or CoverAnalyzer(cert)

    def _lattice_check(self) -> CheckResult:
        return CheckResult(
            name="lattice_base",
            passed=self.lattice_flag,
            evidence=f"{self.cert.base.name} {'is' if self.lattice_flag else 'is not'} flagged as a lattice polygon",
        )

    def _unique_branch_point(self, branched: List[int]) -> CheckResult:
        return CheckResult(
            name="unique_branch_point",
            passed=len(branched) == 1,
            evidence=f"{len(branched)} branch point(s) on M_P: {branched}",
        )

    def _fixed_by_stabilizer(self, branched: List[int]) -> CheckResult:
        group = self.analyzer.stabilizer()
        moved = [
            (str(g), p) for p in branched for g in group
            if self.analyzer.act_on_point(g, p) != p
        ]
        passed = bool(branched) and not moved
        if not branched:
            evidence = "no branch point"
        elif moved:
            evidence = f"{moved[0][0]} moves point {moved[0][1]}"
        else:
            evidence = f"stabilizer of order {len(group)} fixes {branched}"
        return CheckResult(name="branch_point_fixed_by_stabilizer", passed=passed, evidence=evidence)

    def screen(self) -> SuitabilityVerdict:
        logger.info(f"Screening {self.cert.tiled.name} over {self.cert.base.name}")
        flags = self.analyzer.branch_points()
        branched = [p for p, b in flags.items() if b]
        checks = [
            self._lattice_check(),
            self._unique_branch_point(branched),
            *minus_id_checks(self.cert.tiled),
            self._fixed_by_stabilizer(branched),
        ]
        failed = next((c for c in checks if not c.passed), None)
        for c in checks:
            logger.debug(f"{c.name}: {'pass' if c.passed else 'fail'} ({c.evidence})")
        return SuitabilityVerdict(
            checks=checks,
            overall="rejected" if failed else "suitable-candidate",
            reason=f"{failed.name}: {failed.evidence}" if failed else None,
            note=APERIODICITY_NOTE,
        )


def suitability_screen(cert: TilingCertificate, lattice_flag: bool) -> SuitabilityVerdict:
    return SuitabilityScreener(cert, lattice_flag).screen()


def screen_catalog(max_n: int = 15) -> pd.DataFrame:
    """The -Id screens over every catalog garage with n <= max_n"""
    rows = []
    for name, n, stage in catalog_entries(max_n):
        try:
            q = generate(name, n, stage)
        except GarageToolkitError as e:
            logger.warning(f"Skipping {name} {n} {stage}: {e}")
            continue
        odd, no_even = minus_id_checks(q)
        rows.append({
            "family": name,
            "n": n,
            "stage": stage or "",
            "n_q": q.group().order_n,
            "even_denominator": any(b.angle.den % 2 == 0 for b in q.boundary_vertices),
            "minus_id_excluded": odd.passed,
            "no_even_denominators": no_even.passed,
        })
    return pd.DataFrame(rows)
