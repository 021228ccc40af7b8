"""
Growth Counter
Counts cylinders (or saddle connections) up to a length T and fits the growth exponent
"""
import logging
from typing import List, Sequence

import numpy as np

from config import GROWTH_CONFIG
from cylinder_decomposer import cylinder_decomposition
from errors import BudgetExhausted, NoCylinderDecomposition
from models import GrowthReport, GrowthRow
from saddle_connection_finder import connection_directions, find_saddle_connections, group_holonomies
from translation_surface import TranslationSurface

logger = logging.getLogger(__name__)

METHODS = ("auto", "cylinders", "saddle_connections")


def _check_values(t_values: Sequence[float]):
    if len(t_values) < GROWTH_CONFIG["min_values"]:
        raise ValueError(f"need at least {GROWTH_CONFIG['min_values']} values of T, got {len(t_values)}")
    if any(t <= 0 for t in t_values):
        raise ValueError("values of T must be positive")
    if any(b <= a for a, b in zip(t_values, t_values[1:])):
        raise ValueError("values of T must be strictly ascending")


def fit_exponent(t_values: Sequence[float], counts: Sequence[int]):
    """Least-squares slope and intercept of log N against log T"""
    if min(counts) <= 0:
        raise ValueError("cannot fit a growth exponent through a zero count")
    slope, intercept = np.polyfit(np.log(t_values), np.log(counts), 1)
    return float(slope), float(intercept)


class GrowthCounter:
    def __init__(self, surface: TranslationSurface):
        self.surface = surface

    def cylinder_lengths(self, directions) -> List[float]:
        lengths = []
        for u, _ in directions:
            lengths.extend(c.circumference for c in cylinder_decomposition(self.surface, u))
        return lengths

    @staticmethod
    def connection_lengths(connections) -> List[float]:
        # one holonomy vector per +-v pair
        return [h.length for h in group_holonomies(connections) if h.dy > 0 or (h.dy == 0 and h.dx > 0)]

    def count(self, t_values: Sequence[float], method: str = "auto") -> GrowthReport:
        if method not in METHODS:
            raise ValueError(f"unknown growth method {method!r}; expected one of {', '.join(METHODS)}")
        t_values = [float(t) for t in t_values]
        _check_values(t_values)

        logger.info(f"Step 1: Enumerating saddle connections up to T = {t_values[-1]:g}")
        connections = find_saddle_connections(self.surface, t_values[-1])
        directions = connection_directions(connections)

        requested = method
        if method == "auto":
            method = "cylinders" if len(directions) <= GROWTH_CONFIG["max_cylinder_directions"] else "saddle_connections"
        lengths: List[float]
        if method == "cylinders":
            logger.info(f"Step 2: Decomposing {len(directions)} saddle-connection directions")
            try:
                lengths = self.cylinder_lengths(directions)
            except (NoCylinderDecomposition, BudgetExhausted) as e:
                if requested != "auto":
                    raise
                logger.warning(f"Falling back to saddle-connection counts: {e}")
                method, lengths = "saddle_connections", self.connection_lengths(connections)
        else:
            lengths = self.connection_lengths(connections)

        ordered = np.sort(np.array(lengths))
        counts = [int(np.searchsorted(ordered, t * (1 + 1e-12), side="right")) for t in t_values]
        slope, intercept = fit_exponent(t_values, counts)
        logger.info(f"Step 3: N(T) by {method}: exponent {slope:.4f}")
        return GrowthReport(
            method=method,
            rows=[GrowthRow(T=t, N=n) for t, n in zip(t_values, counts)],
            slope=slope,
            intercept=intercept,
        )


def growth_count(surface: TranslationSurface, t_values: Sequence[float], method: str = "auto") -> GrowthReport:
    return GrowthCounter(surface).count(t_values, method)
