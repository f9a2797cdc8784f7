"""Piecewise-continuous generating functions on the unit circle.

A symbol is an immutable expression tree built from a handful of
primitives (constants, monomials t^n, rotated power functions, piecewise
constants, half-circle extensions) and closed under sum, product,
inversion, complex conjugation and the substitution t -> 1/t (written
``~a`` below and called the tilde).  Every node supports

* exact one-sided evaluation ``a(t+0)`` / ``a(t-0)`` at any circle point,
  where ``t+0`` is the limit along the counterclockwise-forward side;
* enumeration of its jump points;
* Fourier coefficients, analytically where a closed form exists and by
  adaptive quadrature split at the jump points otherwise.

Smart constructors (:func:`product`, :func:`inverse`, :func:`tilde`,
:func:`conjugate`) perform only exact rewrites, e.g. ``~t^n = t^-n`` or
the merging of two power arcs with the same anchor, so derived symbols
keep closed-form coefficients whenever possible.
"""

from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np
from scipy.integrate import quad

from .defaults import GRID_N, INVERTIBILITY_TOL, JUMP_TOL, QUADRATURE_TOL
from .errors import (
    DivisionBySmallModulus,
    NotPolynomial,
    PreconditionViolation,
    QuadratureNotConverged,
)

TWO_PI = 2.0 * math.pi

LEFT = "left"
RIGHT = "right"

# Reflected angles (2*pi - theta) do not round-trip bit-exactly, so one-sided
# evaluation snaps angles within this distance onto structural jump points.
ANGLE_SNAP = 1e-12


def _canonical_angle(angle: float) -> float:
    """Map an angle to [0, 2*pi). Canonicalization is exact: equality of
    circle points is float equality of canonical angles."""
    a = math.fmod(float(angle), TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:  # fmod rounding can land exactly on 2*pi
        a -= TWO_PI
    return a


@dataclass(frozen=True, order=True)
class CirclePoint:
    """A point t = exp(i*angle) on the counterclockwise oriented unit circle."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", _canonical_angle(self.angle))

    @classmethod
    def from_complex(cls, z: complex) -> "CirclePoint":
        if abs(abs(z) - 1.0) > 1e-9:
            raise PreconditionViolation(f"point {z} is not on the unit circle")
        return cls(cmath.phase(z))

    @property
    def value(self) -> complex:
        return cmath.exp(1j * self.angle)

    def reflected(self) -> "CirclePoint":
        """The point 1/t = conj(t)."""
        return CirclePoint(-self.angle)


POINT_ONE = CirclePoint(0.0)
POINT_MINUS_ONE = CirclePoint(math.pi)


def _flip(side: str) -> str:
    return LEFT if side == RIGHT else RIGHT


# ---------------------------------------------------------------------------
# expression tree
# ---------------------------------------------------------------------------


class PCSymbol:
    """Base class; nodes are frozen dataclasses and therefore hashable."""

    def __add__(self, other):
        return add(self, _as_symbol(other))

    def __radd__(self, other):
        return add(_as_symbol(other), self)

    def __sub__(self, other):
        return add(self, product(Const(-1.0), _as_symbol(other)))

    def __mul__(self, other):
        return product(self, _as_symbol(other))

    def __rmul__(self, other):
        return product(_as_symbol(other), self)

    def __neg__(self):
        return product(Const(-1.0), self)

    def inv(self) -> "PCSymbol":
        return inverse(self)

    def tilde(self) -> "PCSymbol":
        return tilde(self)

    def conj(self) -> "PCSymbol":
        return conjugate(self)


def _as_symbol(x) -> PCSymbol:
    if isinstance(x, PCSymbol):
        return x
    return Const(complex(x))


@dataclass(frozen=True)
class Const(PCSymbol):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True)
class Monomial(PCSymbol):
    """t^n."""

    n: int

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class PowerArc(PCSymbol):
    """Rotated power function with a single jump at ``anchor``.

    Anchored at 1 it is zeta |-> exp(i*beta*(zeta - pi)) for zeta in
    (0, 2*pi), so the one-sided limits at the anchor are exp(-i*pi*beta)
    from the forward side and exp(+i*pi*beta) from the backward side.
    Anchoring at t0 substitutes t -> t/t0.
    """

    beta: complex
    anchor: CirclePoint = POINT_ONE

    def __post_init__(self):
        object.__setattr__(self, "beta", complex(self.beta))


@dataclass(frozen=True)
class PiecewiseConst(PCSymbol):
    """Constant value ``values[j]`` on the open arc from ``breaks[j]`` to
    ``breaks[j+1]`` (counterclockwise, wrapping at the end)."""

    breaks: tuple
    values: tuple

    def __post_init__(self):
        pts = tuple(b if isinstance(b, CirclePoint) else CirclePoint(b) for b in self.breaks)
        vals = tuple(complex(v) for v in self.values)
        if len(pts) != len(vals) or not pts:
            raise PreconditionViolation("breaks and values must be equal-length and nonempty")
        if any(pts[i].angle >= pts[i + 1].angle for i in range(len(pts) - 1)):
            raise PreconditionViolation("breaks must be strictly increasing in angle")
        object.__setattr__(self, "breaks", pts)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class PiecewiseLinear(PCSymbol):
    """Affine-in-angle interpolation on each arc between consecutive breaks.

    On the arc from ``breaks[j]`` to ``breaks[j+1]`` the value runs linearly
    from ``starts[j]`` to ``ends[j]``.  Used internally to build the
    continuous-off-(+-1) interpolants of the index splitting; not part of
    the public config grammar.
    """

    breaks: tuple
    starts: tuple
    ends: tuple

    def __post_init__(self):
        pts = tuple(b if isinstance(b, CirclePoint) else CirclePoint(b) for b in self.breaks)
        s = tuple(complex(v) for v in self.starts)
        e = tuple(complex(v) for v in self.ends)
        if not (len(pts) == len(s) == len(e)) or not pts:
            raise PreconditionViolation("breaks/starts/ends must be equal-length and nonempty")
        if any(pts[i].angle >= pts[i + 1].angle for i in range(len(pts) - 1)):
            raise PreconditionViolation("breaks must be strictly increasing in angle")
        object.__setattr__(self, "breaks", pts)
        object.__setattr__(self, "starts", s)
        object.__setattr__(self, "ends", e)


@dataclass(frozen=True)
class HalfCircleExtension(PCSymbol):
    """g equal to g0 on the closed upper half-circle and to 1/g0(conj(t))
    on the lower one; satisfies g(t) * g(1/t) = 1 by construction."""

    g0: PCSymbol


@dataclass(frozen=True)
class Sum(PCSymbol):
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass(frozen=True)
class Product(PCSymbol):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))


@dataclass(frozen=True)
class Inverse(PCSymbol):
    child: PCSymbol


@dataclass(frozen=True)
class Conjugate(PCSymbol):
    child: PCSymbol


@dataclass(frozen=True)
class Tilde(PCSymbol):
    child: PCSymbol


@dataclass(frozen=True)
class Exp(PCSymbol):
    """exp of a symbol; always invertible.  Internal-only primitive."""

    child: PCSymbol


# ---------------------------------------------------------------------------
# smart constructors (exact rewrites only)
# ---------------------------------------------------------------------------


def add(*terms: PCSymbol) -> PCSymbol:
    flat: list[PCSymbol] = []
    const = 0.0 + 0.0j
    for term in terms:
        if isinstance(term, Sum):
            flat.extend(term.terms)
        elif isinstance(term, Const):
            const += term.value
        else:
            flat.append(term)
    if const != 0 or not flat:
        flat.append(Const(const))
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def product(*factors: PCSymbol) -> PCSymbol:
    """Multiply symbols, folding constants, merging monomial exponents and
    same-anchor power arcs (phi_b * phi_c = phi_{b+c} exactly)."""
    const = 1.0 + 0.0j
    mono = 0
    arcs: dict[CirclePoint, complex] = {}
    piecewise: dict[tuple, tuple] = {}
    rest: list[PCSymbol] = []

    def absorb(sym: PCSymbol):
        nonlocal const, mono
        if isinstance(sym, Product):
            for f in sym.factors:
                absorb(f)
        elif isinstance(sym, Const):
            const *= sym.value
        elif isinstance(sym, Monomial):
            mono += sym.n
        elif isinstance(sym, PowerArc):
            arcs[sym.anchor] = arcs.get(sym.anchor, 0.0) + sym.beta
        elif isinstance(sym, PiecewiseConst):
            prev = piecewise.get(sym.breaks)
            vals = sym.values if prev is None else tuple(x * y for x, y in zip(prev, sym.values))
            piecewise[sym.breaks] = vals
        else:
            rest.append(sym)

    for f in factors:
        absorb(f)

    out: list[PCSymbol] = []
    for breaks, vals in piecewise.items():
        if all(v == vals[0] for v in vals):
            const *= vals[0]  # no jumps left: fold into the constant
        else:
            out.append(PiecewiseConst(breaks, vals))
    for anchor, beta in arcs.items():
        if beta == 0:
            continue
        if beta.imag == 0 and float(beta.real).is_integer():
            # phi_m(t/t0) = (-1)^m (t/t0)^m for integer m
            m = int(beta.real)
            const *= (-1) ** m * cmath.exp(-1j * m * anchor.angle)
            mono += m
        else:
            out.append(PowerArc(beta, anchor))
    out.extend(rest)

    if const == 0:
        return Const(0.0)
    # fold a scalar into a lone piecewise-constant factor
    if const != 1 and mono == 0 and len(out) == 1 and isinstance(out[0], PiecewiseConst):
        pc = out[0]
        return PiecewiseConst(pc.breaks, tuple(const * v for v in pc.values))
    if mono != 0:
        out.insert(0, Monomial(mono))
    if const != 1 or not out:
        out.insert(0, Const(const))
    if len(out) == 1:
        return out[0]
    return Product(tuple(out))


def inverse(sym: PCSymbol) -> PCSymbol:
    if isinstance(sym, Const):
        if sym.value == 0:
            raise DivisionBySmallModulus("inverse of the zero constant")
        return Const(1.0 / sym.value)
    if isinstance(sym, Monomial):
        return Monomial(-sym.n)
    if isinstance(sym, PowerArc):
        return PowerArc(-sym.beta, sym.anchor)
    if isinstance(sym, PiecewiseConst):
        if any(v == 0 for v in sym.values):
            raise DivisionBySmallModulus("inverse of a vanishing piecewise constant")
        return PiecewiseConst(sym.breaks, tuple(1.0 / v for v in sym.values))
    if isinstance(sym, Product):
        return product(*(inverse(f) for f in sym.factors))
    if isinstance(sym, Inverse):
        return sym.child
    if isinstance(sym, Exp):
        return Exp(product(Const(-1.0), sym.child))
    if isinstance(sym, Tilde):
        return tilde(inverse(sym.child))
    if isinstance(sym, Conjugate):
        return conjugate(inverse(sym.child))
    return Inverse(sym)


def tilde(sym: PCSymbol) -> PCSymbol:
    """The symbol t |-> sym(1/t); jumps reflect and one-sided limits swap."""
    if isinstance(sym, Const):
        return sym
    if isinstance(sym, Monomial):
        return Monomial(-sym.n)
    if isinstance(sym, PowerArc):
        return PowerArc(-sym.beta, sym.anchor.reflected())
    if isinstance(sym, PiecewiseConst):
        pieces = _reflected_pieces(sym.breaks, sym.values)
        return PiecewiseConst(tuple(b for b, _ in pieces), tuple(v for _, v in pieces))
    if isinstance(sym, PiecewiseLinear):
        # the arc (b_j, b_{j+1}) running s_j -> e_j reflects to an arc running e_j -> s_j
        pieces = _reflected_pieces(sym.breaks, tuple(zip(sym.ends, sym.starts)))
        return PiecewiseLinear(
            tuple(b for b, _ in pieces),
            tuple(v[0] for _, v in pieces),
            tuple(v[1] for _, v in pieces),
        )
    if isinstance(sym, HalfCircleExtension):
        return Inverse(sym)  # g * ~g = 1 exactly, by construction
    if isinstance(sym, Sum):
        return add(*(tilde(t) for t in sym.terms))
    if isinstance(sym, Product):
        return product(*(tilde(f) for f in sym.factors))
    if isinstance(sym, Inverse):
        return inverse(tilde(sym.child))
    if isinstance(sym, Conjugate):
        return Conjugate(tilde(sym.child))
    if isinstance(sym, Tilde):
        return sym.child
    if isinstance(sym, Exp):
        return Exp(tilde(sym.child))
    raise TypeError(f"unknown symbol node {type(sym)!r}")


def _reflected_pieces(breaks, payloads):
    """Reflect arcs (b_j, b_{j+1}) |-> (2*pi - b_{j+1}, 2*pi - b_j), keeping payloads."""
    k = len(breaks)
    items = []
    for j in range(k):
        end = breaks[(j + 1) % k]
        items.append((end.reflected(), payloads[j]))
    items.sort(key=lambda it: it[0].angle)
    return items


def conjugate(sym: PCSymbol) -> PCSymbol:
    """Pointwise complex conjugate (values, not the variable)."""
    if isinstance(sym, Const):
        return Const(sym.value.conjugate())
    if isinstance(sym, Monomial):
        return Monomial(-sym.n)  # conj(t^n) = t^-n on |t| = 1
    if isinstance(sym, PowerArc):
        return PowerArc(-sym.beta.conjugate(), sym.anchor)
    if isinstance(sym, PiecewiseConst):
        return PiecewiseConst(sym.breaks, tuple(v.conjugate() for v in sym.values))
    if isinstance(sym, Sum):
        return add(*(conjugate(t) for t in sym.terms))
    if isinstance(sym, Product):
        return product(*(conjugate(f) for f in sym.factors))
    if isinstance(sym, Inverse):
        return inverse(conjugate(sym.child))
    if isinstance(sym, Conjugate):
        return sym.child
    if isinstance(sym, Tilde):
        return Tilde(conjugate(sym.child))
    if isinstance(sym, Exp):
        return Exp(conjugate(sym.child))
    return Conjugate(sym)


def monomial(n: int) -> Monomial:
    return Monomial(n)


def const(value: complex) -> Const:
    return Const(value)


def power_arc(beta: complex, anchor: CirclePoint | float = POINT_ONE) -> PCSymbol:
    if not isinstance(anchor, CirclePoint):
        anchor = CirclePoint(anchor)
    return product(PowerArc(beta, anchor))  # normalizes integer beta


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def evaluate(sym: PCSymbol, t: CirclePoint | float, side: str = RIGHT,
             tol: float = INVERTIBILITY_TOL) -> complex:
    """One-sided limit of the symbol at t.

    ``side="right"`` returns a(t+0), the limit along increasing angle
    (counterclockwise-forward); ``side="left"`` returns a(t-0).
    """
    if not isinstance(t, CirclePoint):
        t = CirclePoint(t)
    if side not in (LEFT, RIGHT):
        raise PreconditionViolation(f"side must be 'left' or 'right', got {side!r}")
    return _eval(sym, t.angle, side, tol)


def _eval(sym: PCSymbol, theta: float, side: str, tol: float) -> complex:
    if isinstance(sym, Const):
        return sym.value
    if isinstance(sym, Monomial):
        return cmath.exp(1j * sym.n * theta)
    if isinstance(sym, PowerArc):
        zeta = _canonical_angle(theta - sym.anchor.angle)
        if zeta < ANGLE_SNAP or TWO_PI - zeta < ANGLE_SNAP:
            zeta = 0.0 if side == RIGHT else TWO_PI
        return cmath.exp(1j * sym.beta * (zeta - math.pi))
    if isinstance(sym, PiecewiseConst):
        return sym.values[_piece_index(sym.breaks, theta, side)]
    if isinstance(sym, PiecewiseLinear):
        j = _piece_index(sym.breaks, theta, side)
        return _affine_value(sym, j, theta)
    if isinstance(sym, HalfCircleExtension):
        return _eval_half_circle(sym.g0, theta, side, tol)
    if isinstance(sym, Sum):
        return sum(_eval(t_, theta, side, tol) for t_ in sym.terms)
    if isinstance(sym, Product):
        out = 1.0 + 0.0j
        for f in sym.factors:
            out *= _eval(f, theta, side, tol)
        return out
    if isinstance(sym, Inverse):
        v = _eval(sym.child, theta, side, tol)
        if abs(v) < tol:
            raise DivisionBySmallModulus(
                f"modulus {abs(v):.3e} below tolerance {tol:.1e} at angle {theta:.6f} ({side})")
        return 1.0 / v
    if isinstance(sym, Conjugate):
        return _eval(sym.child, theta, side, tol).conjugate()
    if isinstance(sym, Tilde):
        return _eval(sym.child, _canonical_angle(-theta), _flip(side), tol)
    if isinstance(sym, Exp):
        return cmath.exp(_eval(sym.child, theta, side, tol))
    raise TypeError(f"unknown symbol node {type(sym)!r}")


def _piece_index(breaks, theta: float, side: str) -> int:
    """Index of the arc whose value governs the one-sided limit at theta."""
    k = len(breaks)
    angles = [b.angle for b in breaks]
    for j, a in enumerate(angles):
        d = abs(theta - a)
        if d < ANGLE_SNAP or abs(d - TWO_PI) < ANGLE_SNAP:
            return j if side == RIGHT else (j - 1) % k
    # strictly inside an arc: the last break at angle < theta (cyclically)
    j = bisect.bisect_left(angles, theta) - 1
    return j % k


def _affine_value(sym: PiecewiseLinear, j: int, theta: float) -> complex:
    k = len(sym.breaks)
    a0 = sym.breaks[j].angle
    a1 = sym.breaks[(j + 1) % k].angle
    if a1 <= a0:
        a1 += TWO_PI
    th = theta
    if th < a0:
        th += TWO_PI
    if th > a1:  # can only happen through side logic at a break
        th = a1
    s = (th - a0) / (a1 - a0)
    return sym.starts[j] + (sym.ends[j] - sym.starts[j]) * s


def _eval_half_circle(g0: PCSymbol, theta: float, side: str, tol: float) -> complex:
    def g0_at(angle, s):
        return _eval(g0, _canonical_angle(angle), s, tol)

    def inv_g0(angle, s):
        v = g0_at(angle, s)
        if abs(v) < tol:
            raise DivisionBySmallModulus("half-circle extension hit a small modulus")
        return 1.0 / v

    if theta < ANGLE_SNAP or TWO_PI - theta < ANGLE_SNAP:
        return g0_at(0.0, RIGHT) if side == RIGHT else inv_g0(0.0, RIGHT)
    if abs(theta - math.pi) < ANGLE_SNAP:
        return g0_at(math.pi, LEFT) if side == LEFT else inv_g0(math.pi, LEFT)
    if theta < math.pi:
        return g0_at(theta, side)
    # lower half: g(t) = 1/g0(conj t); conj reverses orientation
    return inv_g0(TWO_PI - theta, _flip(side))


def evaluate_array(sym: PCSymbol, thetas: np.ndarray, tol: float = INVERTIBILITY_TOL) -> np.ndarray:
    """Vectorized evaluation at generic (non-jump) angles.

    At an exact jump angle this returns the forward-side value; callers that
    care about one-sided limits use :func:`evaluate`.
    """
    thetas = np.asarray(thetas, dtype=float)
    if isinstance(sym, Const):
        return np.full(thetas.shape, sym.value, dtype=complex)
    if isinstance(sym, Monomial):
        return np.exp(1j * sym.n * thetas)
    if isinstance(sym, PowerArc):
        zeta = np.mod(thetas - sym.anchor.angle, TWO_PI)
        return np.exp(1j * sym.beta * (zeta - math.pi))
    if isinstance(sym, PiecewiseConst):
        idx = _piece_indices(sym.breaks, thetas)
        return np.asarray(sym.values, dtype=complex)[idx]
    if isinstance(sym, PiecewiseLinear):
        idx = _piece_indices(sym.breaks, thetas)
        out = np.empty(thetas.shape, dtype=complex)
        for j in range(len(sym.breaks)):
            mask = idx == j
            if mask.any():
                out[mask] = [_affine_value(sym, j, th) for th in thetas[mask]]
        return out
    if isinstance(sym, HalfCircleExtension):
        upper = (thetas <= math.pi)
        out = np.empty(thetas.shape, dtype=complex)
        out[upper] = evaluate_array(sym.g0, thetas[upper], tol)
        low = evaluate_array(sym.g0, np.mod(TWO_PI - thetas[~upper], TWO_PI), tol)
        if low.size and np.min(np.abs(low)) < tol:
            raise DivisionBySmallModulus("half-circle extension hit a small modulus")
        out[~upper] = 1.0 / low
        return out
    if isinstance(sym, Sum):
        return np.sum([evaluate_array(t_, thetas, tol) for t_ in sym.terms], axis=0)
    if isinstance(sym, Product):
        out = np.ones(thetas.shape, dtype=complex)
        for f in sym.factors:
            out *= evaluate_array(f, thetas, tol)
        return out
    if isinstance(sym, Inverse):
        v = evaluate_array(sym.child, thetas, tol)
        if v.size and np.min(np.abs(v)) < tol:
            raise DivisionBySmallModulus("modulus below tolerance in vectorized inverse")
        return 1.0 / v
    if isinstance(sym, Conjugate):
        return np.conj(evaluate_array(sym.child, thetas, tol))
    if isinstance(sym, Tilde):
        return evaluate_array(sym.child, np.mod(-thetas, TWO_PI), tol)
    if isinstance(sym, Exp):
        return np.exp(evaluate_array(sym.child, thetas, tol))
    raise TypeError(f"unknown symbol node {type(sym)!r}")


def _piece_indices(breaks, thetas: np.ndarray) -> np.ndarray:
    angles = np.array([b.angle for b in breaks])
    idx = np.searchsorted(angles, thetas, side="right") - 1
    return np.mod(idx, len(breaks))


# ---------------------------------------------------------------------------
# jumps and grids
# ---------------------------------------------------------------------------


def _jump_candidates(sym: PCSymbol) -> set[float]:
    if isinstance(sym, (Const, Monomial)):
        return set()
    if isinstance(sym, PowerArc):
        return {sym.anchor.angle}
    if isinstance(sym, (PiecewiseConst, PiecewiseLinear)):
        return {b.angle for b in sym.breaks}
    if isinstance(sym, HalfCircleExtension):
        inner = _jump_candidates(sym.g0)
        return {0.0, math.pi} | inner | {_canonical_angle(-a) for a in inner}
    if isinstance(sym, Sum):
        return set().union(*(_jump_candidates(t) for t in sym.terms))
    if isinstance(sym, Product):
        return set().union(*(_jump_candidates(f) for f in sym.factors))
    if isinstance(sym, (Inverse, Conjugate, Exp)):
        return _jump_candidates(sym.child)
    if isinstance(sym, Tilde):
        return {_canonical_angle(-a) for a in _jump_candidates(sym.child)}
    raise TypeError(f"unknown symbol node {type(sym)!r}")


def dedupe_angles(angles, tol: float = 10 * ANGLE_SNAP) -> list[float]:
    """Collapse angles that differ only by reflection round-off (cyclically)."""
    out: list[float] = []
    for a in sorted(angles):
        if not out or a - out[-1] > tol:
            out.append(a)
    if len(out) > 1 and (out[0] + TWO_PI) - out[-1] <= tol:
        out.pop()
    return out


@lru_cache(maxsize=50_000)
def _jump_set_cached(sym: PCSymbol, tol: float):
    out = []
    for angle in dedupe_angles(_jump_candidates(sym) | {0.0, math.pi}):
        t = CirclePoint(angle)
        left = evaluate(sym, t, LEFT)
        right = evaluate(sym, t, RIGHT)
        if abs(left - right) > tol:
            out.append((t, left, right))
    return tuple(out)


def jump_set(sym: PCSymbol, tol: float = JUMP_TOL):
    """Jump points with one-sided values, sorted by angle.

    The points +-1 are always probed; they play a distinguished role for
    Hankel operators (the only fixed points of the flip).  Results are
    cached per symbol (symbols are immutable).
    """
    return list(_jump_set_cached(sym, float(tol)))


def grid_angles(syms: Iterable[PCSymbol] | PCSymbol, n: int = GRID_N) -> np.ndarray:
    """Equispaced angles joined with every jump angle of the given symbols."""
    if isinstance(syms, PCSymbol):
        syms = [syms]
    angles = set(np.linspace(0.0, TWO_PI, n, endpoint=False))
    for sym in syms:
        angles |= _jump_candidates(sym)
    angles |= {0.0, math.pi}
    return np.array(dedupe_angles(angles, tol=1e-13))


def evaluate_both_sides(sym: PCSymbol, angles: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(left, right) one-sided values over a set of angles.

    Interior points are evaluated vectorized; grid angles within snapping
    distance of a candidate jump get the exact one-sided treatment.
    """
    angles = np.asarray(angles, dtype=float)
    right = evaluate_array(sym, angles)
    left = right.copy()
    specials = np.array(sorted(_jump_candidates(sym) | {0.0}))
    pos = np.searchsorted(specials, angles)
    lo = specials[np.clip(pos - 1, 0, len(specials) - 1)]
    hi = specials[np.clip(pos, 0, len(specials) - 1)]
    near = np.minimum(np.abs(angles - lo), np.abs(angles - hi)) < ANGLE_SNAP
    near |= (TWO_PI - angles) < ANGLE_SNAP  # wrap onto the candidate at 0
    for i in np.nonzero(near)[0]:
        t = CirclePoint(angles[i])
        left[i] = evaluate(sym, t, LEFT)
        right[i] = evaluate(sym, t, RIGHT)
    return left, right


def min_modulus_on_grid(sym: PCSymbol, n: int = GRID_N) -> float:
    angles = grid_angles(sym, n)
    left, right = evaluate_both_sides(sym, angles)
    return float(min(np.min(np.abs(left)), np.min(np.abs(right))))


def check_invertible(sym: PCSymbol, tol: float = INVERTIBILITY_TOL, n: int = GRID_N) -> float:
    """Return the grid minimum modulus, raising if it is below tolerance."""
    m = min_modulus_on_grid(sym, n)
    if m < tol:
        from .errors import NotInvertible

        raise NotInvertible(f"minimum modulus {m:.3e} below tolerance {tol:.1e}")
    return m


# ---------------------------------------------------------------------------
# half-circle extension constructor
# ---------------------------------------------------------------------------


def extend_half_circle(g0: PCSymbol, tol: float = 1e-9) -> PCSymbol:
    """Extend g0 from the closed upper half-circle to a matching function.

    Requires g0 continuous and +-1-valued at the points t = +-1 and
    invertible on the grid; the result g satisfies g(t) * g(1/t) = 1.
    """
    for t in (POINT_ONE, POINT_MINUS_ONE):
        lv = evaluate(g0, t, LEFT)
        rv = evaluate(g0, t, RIGHT)
        if abs(lv - rv) > tol:
            raise PreconditionViolation(f"g0 must be continuous at t=exp({t.angle:.3f}i)")
        if min(abs(rv - 1.0), abs(rv + 1.0)) > tol:
            raise PreconditionViolation(f"g0({t.value:.0f}) = {rv} is not in {{-1, 1}}")
    check_invertible(g0, tol)
    if isinstance(g0, Monomial) or (isinstance(g0, Const) and g0.value in (1, -1)):
        return g0  # 1/g0(conj t) = g0(t) already
    return HalfCircleExtension(g0)


# ---------------------------------------------------------------------------
# Fourier coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FourierCoefficient:
    index: int
    value: complex
    provenance: str  # "analytic" | "quadrature"
    error_bound: Optional[float] = None


def _analytic_coefficient(sym: PCSymbol, n: int) -> Optional[complex]:
    """Closed-form coefficient, or None when no closed form applies."""
    if isinstance(sym, Const):
        return sym.value if n == 0 else 0.0 + 0.0j
    if isinstance(sym, Monomial):
        return 1.0 + 0.0j if n == sym.n else 0.0 + 0.0j
    if isinstance(sym, PowerArc):
        beta = sym.beta
        if beta.imag == 0 and float(beta.real).is_integer():
            m = int(beta.real)
            base = (-1.0) ** m if n == m else 0.0
        else:
            base = cmath.sin(math.pi * beta) / (math.pi * (beta - n))
        return cmath.exp(-1j * n * sym.anchor.angle) * base
    if isinstance(sym, PiecewiseConst):
        total = 0.0 + 0.0j
        k = len(sym.breaks)
        for j in range(k):
            a0 = sym.breaks[j].angle
            a1 = sym.breaks[(j + 1) % k].angle
            if a1 <= a0:
                a1 += TWO_PI
            total += sym.values[j] * _segment_integral(a0, a1, n)
        return total / TWO_PI
    if isinstance(sym, PiecewiseLinear):
        total = 0.0 + 0.0j
        k = len(sym.breaks)
        for j in range(k):
            a0 = sym.breaks[j].angle
            a1 = sym.breaks[(j + 1) % k].angle
            if a1 <= a0:
                a1 += TWO_PI
            w0, w1 = sym.starts[j], sym.ends[j]
            slope = (w1 - w0) / (a1 - a0)
            total += _affine_integral(a0, a1, w0 - slope * a0, slope, n)
        return total / TWO_PI
    if isinstance(sym, Sum):
        parts = [_analytic_coefficient(t, n) for t in sym.terms]
        if any(p is None for p in parts):
            return None
        return sum(parts)
    if isinstance(sym, Product):
        scale = 1.0 + 0.0j
        shift = 0
        core: Optional[PCSymbol] = None
        for f in sym.factors:
            if isinstance(f, Const):
                scale *= f.value
            elif isinstance(f, Monomial):
                shift += f.n
            elif core is None:
                core = f
            else:
                return None  # two non-trivial factors: no closed form
        if core is None:
            return scale if n == shift else 0.0 + 0.0j
        inner = _analytic_coefficient(core, n - shift)
        return None if inner is None else scale * inner
    if isinstance(sym, Tilde):
        inner = _analytic_coefficient(sym.child, -n)
        return inner
    if isinstance(sym, Conjugate):
        inner = _analytic_coefficient(sym.child, -n)
        return None if inner is None else inner.conjugate()
    return None


def _segment_integral(a0: float, a1: float, n: int) -> complex:
    """integral of exp(-i n theta) over [a0, a1]."""
    if n == 0:
        return a1 - a0
    return (cmath.exp(-1j * n * a0) - cmath.exp(-1j * n * a1)) / (1j * n)


def _affine_integral(a0: float, a1: float, c0: complex, c1: complex, n: int) -> complex:
    """integral of (c0 + c1*theta) exp(-i n theta) over [a0, a1]."""
    if n == 0:
        return c0 * (a1 - a0) + c1 * (a1 * a1 - a0 * a0) / 2.0
    e0 = cmath.exp(-1j * n * a0)
    e1 = cmath.exp(-1j * n * a1)
    lin = ((a0 * e0 - a1 * e1) / (1j * n)) - (e0 - e1) / (n * n)
    return c0 * (e0 - e1) / (1j * n) + c1 * lin


def _quadrature_coefficient(sym: PCSymbol, n: int, tol: float) -> tuple[complex, float]:
    """Coefficient by panelwise quadrature split at the jump angles.

    For large |n| QUADPACK's oscillatory weights handle exp(-i n theta)
    without resolving each oscillation.  The certificate is either the
    summed QUADPACK estimate or, when that stalls (its estimates are very
    conservative near resonant frequencies although the values converge),
    the agreement between two successive panel-halving levels.
    """
    base = dedupe_angles({0.0} | _jump_candidates(sym))
    base.append(TWO_PI)
    if base[0] > ANGLE_SNAP:
        base.insert(0, 0.0)

    previous = None
    for refinement in range(3):
        panels = np.array(base)
        for _ in range(refinement):
            panels = np.sort(np.concatenate([panels, 0.5 * (panels[:-1] + panels[1:])]))
        total = 0.0 + 0.0j
        bound = 0.0
        eps = tol / max(1, 8 * (len(panels) - 1))
        for a0, a1 in zip(panels[:-1], panels[1:]):
            if a1 - a0 < 1e-11:
                continue

            def f(theta, _a0=a0, _a1=a1):
                # quadrature rules may evaluate at panel edges: use the side
                # whose limit belongs to this panel
                if theta - _a0 < ANGLE_SNAP:
                    return _eval(sym, _canonical_angle(_a0), RIGHT, INVERTIBILITY_TOL)
                if _a1 - theta < ANGLE_SNAP:
                    return _eval(sym, _canonical_angle(_a1), LEFT, INVERTIBILITY_TOL)
                return _eval(sym, _canonical_angle(theta), RIGHT, INVERTIBILITY_TOL)

            def f_re(theta):
                return f(theta).real

            def f_im(theta):
                return f(theta).imag

            if abs(n) <= 48:
                # moderately oscillatory: plain adaptive quadrature certifies
                # tighter bounds than the oscillatory-weight rules, whose
                # error estimates stall near resonant frequencies
                def g_re(theta):
                    return (f(theta) * cmath.exp(-1j * n * theta)).real

                def g_im(theta):
                    return (f(theta) * cmath.exp(-1j * n * theta)).imag

                re, ere = quad(g_re, a0, a1, epsabs=eps, limit=400)
                im, eim = quad(g_im, a0, a1, epsabs=eps, limit=400)
                total += re + 1j * im
                bound += ere + eim
            else:
                # f(t) e^{-int} = (fr cos + fi sin) + i (fi cos - fr sin)
                rc, e1 = quad(f_re, a0, a1, weight="cos", wvar=n, epsabs=eps, limit=200)
                rs, e2 = quad(f_re, a0, a1, weight="sin", wvar=n, epsabs=eps, limit=200)
                ic, e3 = quad(f_im, a0, a1, weight="cos", wvar=n, epsabs=eps, limit=200)
                is_, e4 = quad(f_im, a0, a1, weight="sin", wvar=n, epsabs=eps, limit=200)
                total += (rc + is_) + 1j * (ic - rs)
                bound += e1 + e2 + e3 + e4
        if bound / TWO_PI <= tol:  # the coefficient carries the 1/2pi factor
            return total / TWO_PI, bound / TWO_PI
        if previous is not None:
            two_grid = abs(total - previous) / TWO_PI
            if two_grid <= tol / 2:
                return total / TWO_PI, two_grid
        previous = total
    raise QuadratureNotConverged(
        f"quadrature error bound {bound / TWO_PI:.2e} exceeds tolerance "
        f"{tol:.1e} for n={n}")


@lru_cache(maxsize=200_000)
def _coefficient_cached(sym: PCSymbol, n: int, method: str, tol: float):
    if method in ("auto", "analytic"):
        value = _analytic_coefficient(sym, n)
        if value is not None:
            return complex(value), "analytic", None
        if method == "analytic":
            raise PreconditionViolation("no closed-form coefficient for this symbol")
    value, bound = _quadrature_coefficient(sym, n, tol)
    return complex(value), "quadrature", float(bound)


def fourier_coefficient(sym: PCSymbol, n: int, method: str = "auto",
                        tol: float = QUADRATURE_TOL) -> FourierCoefficient:
    """n-th Fourier coefficient (1/2pi) * integral of sym(e^{i theta}) e^{-i n theta}.

    ``method="auto"`` uses a closed form when one exists and falls back to
    adaptive quadrature split at the jump points; ``method="quadrature"``
    forces the quadrature path (used by the consistency tests).
    """
    value, provenance, bound = _coefficient_cached(sym, int(n), method, float(tol))
    return FourierCoefficient(int(n), value, provenance, bound)


def coefficient_range(sym: PCSymbol, lo: int, hi: int, method: str = "auto",
                      tol: float = QUADRATURE_TOL) -> np.ndarray:
    """Array of coefficients for indices lo..hi inclusive."""
    return np.array([fourier_coefficient(sym, n, method, tol).value for n in range(lo, hi + 1)])


# ---------------------------------------------------------------------------
# band-limited extraction
# ---------------------------------------------------------------------------


def laurent_coefficients(sym: PCSymbol) -> dict[int, complex]:
    """Exact coefficient dict for a finite Laurent polynomial.

    Raises NotPolynomial for symbols that are not band-limited.
    """
    if isinstance(sym, Const):
        return {0: sym.value} if sym.value != 0 else {}
    if isinstance(sym, Monomial):
        return {sym.n: 1.0 + 0.0j}
    if isinstance(sym, Sum):
        out: dict[int, complex] = {}
        for t in sym.terms:
            for k, v in laurent_coefficients(t).items():
                out[k] = out.get(k, 0.0) + v
        return {k: v for k, v in out.items() if v != 0}
    if isinstance(sym, Product):
        out = {0: 1.0 + 0.0j}
        for f in sym.factors:
            cur = laurent_coefficients(f)
            nxt: dict[int, complex] = {}
            for k1, v1 in out.items():
                for k2, v2 in cur.items():
                    nxt[k1 + k2] = nxt.get(k1 + k2, 0.0) + v1 * v2
            out = nxt
        return {k: v for k, v in out.items() if v != 0}
    if isinstance(sym, Tilde):
        return {-k: v for k, v in laurent_coefficients(sym.child).items()}
    if isinstance(sym, Conjugate):
        return {-k: v.conjugate() for k, v in laurent_coefficients(sym.child).items()}
    raise NotPolynomial(f"{type(sym).__name__} node is not band-limited")
