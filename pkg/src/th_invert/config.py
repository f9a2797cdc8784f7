"""Config ingestion: the JSON expression grammar and analysis settings.

The grammar mirrors the public symbol primitives one-to-one; angles are in
radians and complex numbers are objects {"re": x, "im": y} (bare reals are
accepted where convenient).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .defaults import (
    INVERTIBILITY_TOL,
    MATCHING_TOL,
    QUADRATURE_TOL,
    SV_THRESHOLD,
    WINDING_MIN_MODULUS,
)
from .errors import ParseError, ValidationError
from .symbols import (
    CirclePoint,
    Conjugate,
    Const,
    HalfCircleExtension,
    Inverse,
    Monomial,
    PCSymbol,
    PiecewiseConst,
    PowerArc,
    Product,
    Sum,
    Tilde,
)

_TOLERANCE_DEFAULTS = {
    "matching": MATCHING_TOL,
    "invertibility": INVERTIBILITY_TOL,
    "winding": WINDING_MIN_MODULUS,
    "sv_threshold": SV_THRESHOLD,
    "quadrature": QUADRATURE_TOL,
}


def _complex_from(obj, where: str) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, dict) and set(obj) <= {"re", "im"}:
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    raise ValidationError(f"{where}: expected a number or {{re, im}} object, got {obj!r}")


def _complex_to(z: complex):
    return {"re": z.real, "im": z.imag}


def decode_symbol(obj, where: str = "symbol") -> PCSymbol:
    """Expression grammar -> symbol tree."""
    if not isinstance(obj, dict) or "op" not in obj:
        raise ValidationError(f"{where}: expected an object with an 'op' field")
    op = obj["op"]

    def need(*fields):
        extra = set(obj) - {"op", *fields}
        if extra:
            raise ValidationError(f"{where}: unknown fields {sorted(extra)} for op '{op}'")
        for f in fields:
            if f not in obj:
                raise ValidationError(f"{where}: op '{op}' requires field '{f}'")

    if op == "const":
        extra = set(obj) - {"op", "re", "im"}
        if extra:
            raise ValidationError(f"{where}: unknown fields {sorted(extra)} for op 'const'")
        return Const(complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0))))
    if op == "monomial":
        need("n")
        return Monomial(int(obj["n"]))
    if op == "power_arc":
        extra = set(obj) - {"op", "beta", "anchor_angle"}
        if extra:
            raise ValidationError(f"{where}: unknown fields {sorted(extra)} for op 'power_arc'")
        beta = _complex_from(obj["beta"], f"{where}.beta") if "beta" in obj else None
        if beta is None:
            raise ValidationError(f"{where}: op 'power_arc' requires field 'beta'")
        anchor = CirclePoint(float(obj.get("anchor_angle", 0.0)))
        return PowerArc(beta, anchor)
    if op == "piecewise_const":
        need("break_angles", "values")
        breaks = tuple(CirclePoint(float(a)) for a in obj["break_angles"])
        values = tuple(_complex_from(v, f"{where}.values[{i}]")
                       for i, v in enumerate(obj["values"]))
        return PiecewiseConst(breaks, values)
    if op == "half_circle_extension":
        need("g0")
        return HalfCircleExtension(decode_symbol(obj["g0"], f"{where}.g0"))
    if op == "sum":
        need("terms")
        return Sum(tuple(decode_symbol(t, f"{where}.terms[{i}]")
                         for i, t in enumerate(obj["terms"])))
    if op == "product":
        need("factors")
        return Product(tuple(decode_symbol(t, f"{where}.factors[{i}]")
                             for i, t in enumerate(obj["factors"])))
    if op in ("inverse", "conjugate", "tilde"):
        need("child")
        child = decode_symbol(obj["child"], f"{where}.child")
        return {"inverse": Inverse, "conjugate": Conjugate, "tilde": Tilde}[op](child)
    raise ValidationError(f"{where}: unknown op '{op}'")


def encode_symbol(symbol: PCSymbol) -> dict:
    """Symbol tree -> expression grammar (public primitives only)."""
    if isinstance(symbol, Const):
        return {"op": "const", **_complex_to(symbol.value)}
    if isinstance(symbol, Monomial):
        return {"op": "monomial", "n": symbol.n}
    if isinstance(symbol, PowerArc):
        return {"op": "power_arc", "beta": _complex_to(symbol.beta),
                "anchor_angle": symbol.anchor.angle}
    if isinstance(symbol, PiecewiseConst):
        return {"op": "piecewise_const",
                "break_angles": [b.angle for b in symbol.breaks],
                "values": [_complex_to(v) for v in symbol.values]}
    if isinstance(symbol, HalfCircleExtension):
        return {"op": "half_circle_extension", "g0": encode_symbol(symbol.g0)}
    if isinstance(symbol, Sum):
        return {"op": "sum", "terms": [encode_symbol(t) for t in symbol.terms]}
    if isinstance(symbol, Product):
        return {"op": "product", "factors": [encode_symbol(f) for f in symbol.factors]}
    if isinstance(symbol, Inverse):
        return {"op": "inverse", "child": encode_symbol(symbol.child)}
    if isinstance(symbol, Conjugate):
        return {"op": "conjugate", "child": encode_symbol(symbol.child)}
    if isinstance(symbol, Tilde):
        return {"op": "tilde", "child": encode_symbol(symbol.child)}
    raise ValidationError(f"{type(symbol).__name__} has no config-grammar encoding")


@dataclass
class AnalysisConfig:
    symbols: dict
    p_values: list
    tolerances: dict = field(default_factory=lambda: dict(_TOLERANCE_DEFAULTS))
    finite_section_n: int = 256
    outputs: dict = field(default_factory=dict)

    def symbol(self, name: str) -> PCSymbol:
        if name not in self.symbols:
            raise ValidationError(f"config defines no symbol named '{name}'")
        return self.symbols[name]


_TOP_LEVEL_FIELDS = {"symbols", "p_values", "tolerances", "finite_section_n", "outputs"}


def parse_config(text: str) -> AnalysisConfig:
    """Parse and fully validate a config document; unknown fields rejected."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ValidationError("config root must be an object")
    unknown = set(raw) - _TOP_LEVEL_FIELDS
    if unknown:
        raise ValidationError(f"unknown top-level fields: {sorted(unknown)}")
    if "symbols" not in raw or not isinstance(raw["symbols"], dict) or not raw["symbols"]:
        raise ValidationError("field 'symbols' must be a nonempty object")

    symbols = {name: decode_symbol(expr, f"symbols.{name}")
               for name, expr in raw["symbols"].items()}

    p_values = raw.get("p_values", [])
    if not isinstance(p_values, list) or not all(isinstance(p, (int, float)) for p in p_values):
        raise ValidationError("field 'p_values' must be a list of numbers")
    for p in p_values:
        if not (1.0 < float(p) < math.inf):
            raise ValidationError(f"p_values: exponent {p} outside the open interval (1, inf)")

    tolerances = dict(_TOLERANCE_DEFAULTS)
    for key, val in raw.get("tolerances", {}).items():
        if key not in _TOLERANCE_DEFAULTS:
            raise ValidationError(f"tolerances: unknown tolerance '{key}'")
        if not isinstance(val, (int, float)) or val <= 0:
            raise ValidationError(f"tolerances.{key} must be a positive number")
        tolerances[key] = float(val)

    n = raw.get("finite_section_n", 256)
    if not isinstance(n, int) or n < 16:
        raise ValidationError("finite_section_n must be an integer >= 16")

    outputs = raw.get("outputs", {})
    if not isinstance(outputs, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in outputs.items()):
        raise ValidationError("outputs must map names to path strings")

    return AnalysisConfig(symbols, [float(p) for p in p_values], tolerances, n, outputs)
