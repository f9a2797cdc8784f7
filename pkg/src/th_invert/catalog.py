"""Canonical generating functions used by the regression suite and selftest.

Each constructor returns a fresh symbol; the names describe the function,
not its provenance.
"""

from __future__ import annotations

import cmath
import math

from .matching import MatchingPair, make_matching_pair
from .symbols import (
    Const,
    Monomial,
    PCSymbol,
    PiecewiseConst,
    PowerArc,
    product,
)


def quarter_twist() -> PCSymbol:
    """exp(i*theta/4) on theta in (0, 2*pi): one jump at t = 1 from i to 1."""
    return product(Const(cmath.exp(1j * math.pi / 4)), PowerArc(0.25))


def half_plane_sign() -> PCSymbol:
    """+1 on the open upper half-circle, -1 on the lower; jumps at +-1."""
    return PiecewiseConst((0.0, math.pi), (1.0, -1.0))


def right_half_sign() -> PCSymbol:
    """+1 where Re t >= 0, -1 where Re t < 0; jumps at +-i."""
    return PiecewiseConst((math.pi / 2, 3 * math.pi / 2), (-1.0, 1.0))


def quarter_twist_pair(shift: int = 1) -> MatchingPair:
    """The matching pair (a, a * t^shift) for the quarter twist."""
    a = quarter_twist()
    return make_matching_pair(a, a * Monomial(shift))


def half_plane_hankel_pair() -> MatchingPair:
    """The pair (i, a) generating i*I + H(a) for the half-plane sign."""
    return make_matching_pair(Const(1j), half_plane_sign())


def right_half_pair() -> MatchingPair:
    """The pair (a, a*t) for the sign of Re t; here ~a = a."""
    a = right_half_sign()
    return make_matching_pair(a, a * Monomial(1))
