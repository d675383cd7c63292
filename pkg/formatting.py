# formatting.py
import json
import dataclasses
from fractions import Fraction
from typing import Any, Dict

from sympy import Poly

from exact_core import AlgebraicAngle, IntMatrix, IsolatedRoot, PiMultiple, RatMatrix
from seifert_invariants import BlanchfieldValue, LaurentPoly, SeifertMatrix

SCHEMA_VERSION = "1"
DISPLAY_DIGITS = 12

# ---------------- Rationals ----------------

def decimal_display(value: Fraction, digits: int = DISPLAY_DIGITS) -> str:
    """Truncated decimal expansion; '...' marks a non-terminating or cut expansion."""
    value = Fraction(value)
    sign = "-" if value < 0 else ""
    num, den = abs(value.numerator), value.denominator
    whole, rem = divmod(num, den)
    frac_digits = []
    for _ in range(digits):
        if rem == 0:
            break
        d, rem = divmod(rem * 10, den)
        frac_digits.append(str(d))
    text = f"{sign}{whole}"
    if frac_digits:
        text += "." + "".join(frac_digits)
    if rem:
        text += "..."
    return text


def rational_json(value) -> Dict[str, Any]:
    value = Fraction(value)
    return {"num": value.numerator, "den": value.denominator, "display": decimal_display(value)}


def verdict(passed: bool) -> str:
    return "pass" if passed else "fail"


# ---------------- Domain objects ----------------

def angle_json(angle) -> Dict[str, Any]:
    if isinstance(angle, PiMultiple):
        return {"pi_multiple": rational_json(angle.r)}
    out = {
        "polynomial": str(angle.polynomial.as_expr()),
        "x_interval": [rational_json(angle.lo), rational_json(angle.hi)],
    }
    if isinstance(angle, AlgebraicAngle) and angle.half_turn:
        out["half_turn"] = True
    return out


def to_jsonable(obj: Any) -> Any:
    """Recursively turn report objects into JSON values; no floats are produced."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return rational_json(obj)
    if isinstance(obj, float):
        raise TypeError("floating point value in an exact report")
    if isinstance(obj, (PiMultiple, IsolatedRoot)):
        return angle_json(obj)
    if isinstance(obj, SeifertMatrix):
        return {"name": obj.name, "matrix": obj.V.to_lists()}
    if isinstance(obj, IntMatrix):
        return obj.to_lists()
    if isinstance(obj, RatMatrix):
        return [[rational_json(v) for v in row] for row in obj.entries]
    if isinstance(obj, (LaurentPoly, BlanchfieldValue)):
        return str(obj)
    if isinstance(obj, Poly):
        return str(obj.as_expr())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.repr}
    if hasattr(obj, "token"):
        return obj.token
    raise TypeError(f"cannot render {type(obj).__name__} as JSON")


def render_report(report: Dict[str, Any]) -> str:
    body = {"schema": SCHEMA_VERSION, **to_jsonable(report)}
    return json.dumps(body, indent=2, ensure_ascii=False) + "\n"
