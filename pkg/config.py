"""
Configuration for the Parking Garage Dynamics toolkit
"""
import os
from pathlib import Path
from typing import Any, Dict

import yaml
from dotenv import load_dotenv

load_dotenv()

# Base paths
BASE_DIR = Path(__file__).resolve().parent
TEMPLATES_DIR = BASE_DIR / "templates"
LATTICE_CATALOG_PATH = Path(os.getenv("GARAGE_LATTICE_CATALOG", BASE_DIR / "lattice_catalog.yaml"))

LOG_LEVEL = os.getenv("GARAGE_LOG_LEVEL", "WARNING")

# Geometric tolerances (plane units / radians)
TOLERANCES = {
    "angle": float(os.getenv("GARAGE_EPS_ANGLE", 1e-9)),
    "length": float(os.getenv("GARAGE_EPS_LENGTH", 1e-9)),
    "sing": float(os.getenv("GARAGE_EPS_SING", 1e-9)),
    "close": float(os.getenv("GARAGE_EPS_CLOSE", 1e-9)),
    "max_denominator": 1000,  # used when a file omits declared angles
}

# Straight-line flow and direction classification
DYNAMICS_CONFIG = {
    "max_crossings": int(os.getenv("GARAGE_MAX_CROSSINGS", 10**8)),
    "separatrix_crossings": 20000,
    "test_orbits": 8,
    "grid_k": 20,
    "discrepancy_threshold": 0.02,
    "checkpoints": (0.125, 0.25, 0.5, 1.0),
    "billiard_max_bounces": 1000,
}

# Continued-fraction rationality heuristic
APERIODICITY_CONFIG = {
    "depth": 40,
    "quotient_cap": 10**6,
    "precision_floor": 1e-12,
}

GROWTH_CONFIG = {
    "min_values": 4,
    # above this many directions "auto" counts saddle connections instead of cylinders
    "max_cylinder_directions": 200,
}

SCAN_CONFIG = {
    "default_directions": 16,
    "default_budget": 10**4,
    "sc_bound": 3.0,
}

# Family parameter constraints, checked by the generators
FAMILY_CONSTRAINTS = {
    "veech-isosceles": {"min_n": 3},
    "veech-right": {"min_n": 3},
    "ward": {"min_n": 3},
    "thm3": {"min_n": 9, "odd": True, "divisible_by": 3},
    "ward-stage": {"min_n": 5, "odd": True, "stages": ("q0", "q0-right", "q1", "q2")},
}

REPORT_CONFIG = {
    "float_digits": 12,
    "svg_size": 800,
    "svg_margin": 20,
}


def load_lattice_catalog(path: Path = LATTICE_CATALOG_PATH) -> Dict[str, Any]:
    """Load the catalog of base families known to be lattice polygons"""
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    return data.get("lattice_families", {})
