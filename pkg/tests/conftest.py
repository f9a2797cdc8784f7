import math

import numpy as np
import pytest

from th_invert import catalog
from th_invert.symbols import CirclePoint, Monomial, PCSymbol, evaluate


@pytest.fixture
def quarter_twist():
    return catalog.quarter_twist()


@pytest.fixture
def quarter_pair():
    return catalog.quarter_twist_pair()


@pytest.fixture
def half_plane_pair():
    return catalog.half_plane_hankel_pair()


@pytest.fixture
def right_half_pair():
    return catalog.right_half_pair()


def grid_values(sym: PCSymbol, n: int = 1024):
    """Brute-force one-sided evaluation over the grid (oracle helper)."""
    from th_invert.symbols import evaluate_both_sides, grid_angles

    angles = grid_angles(sym, n)
    left, right = evaluate_both_sides(sym, angles)
    return angles, left, right


def max_grid_deviation(s1: PCSymbol, s2: PCSymbol, n: int = 1024) -> float:
    """max over grid and both sides of |s1 - s2| (pointwise oracle)."""
    from th_invert.symbols import evaluate_both_sides, grid_angles

    angles = grid_angles([s1, s2], n)
    l1, r1 = evaluate_both_sides(s1, angles)
    l2, r2 = evaluate_both_sides(s2, angles)
    return float(max(np.max(np.abs(l1 - l2)), np.max(np.abs(r1 - r2))))
