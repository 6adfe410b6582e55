"""Canonical JSON reports.

Every leaf is a string, a boolean or null: integers become decimal strings,
fractions "p/q", and floating values are written with an explicit precision
tag as {"value": "<decimal>", "digits": "<n>"}. Keys are sorted, so the top
level reads command, inputs, results, status, version, and parsing then
re-serializing a report gives back the same bytes.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import mpmath

from . import __version__
from .arith import QuadElem
from .curve import Point

FLOAT_DIGITS = 12


def tagged(x, digits: int = FLOAT_DIGITS) -> dict:
    """A real or complex multiprecision value rounded to ``digits`` significant digits."""
    x = mpmath.mpmathify(x)
    if isinstance(x, mpmath.mpc):
        if x.imag == 0:
            x = x.real
        else:
            return {"re": tagged(x.real, digits), "im": tagged(x.imag, digits)}
    return {"value": mpmath.nstr(x, digits, min_fixed=-4, max_fixed=8, strip_zeros=False), "digits": str(digits)}


def parse_tagged(obj: dict) -> tuple[mpmath.mpf, int]:
    return mpmath.mpf(obj["value"]), int(obj["digits"])


def to_plain(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (mpmath.mpf, mpmath.mpc, float)):
        return tagged(obj)
    if isinstance(obj, QuadElem):
        return {"rational": to_plain(obj.a), "sqrt_coeff": to_plain(obj.b), "d": str(obj.field.d)}
    if isinstance(obj, Point):
        if obj.is_zero:
            return "O"
        return {"x": to_plain(obj.x), "y": to_plain(obj.y)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def make_report(command: str, inputs: dict, results: Any, ok: bool) -> dict:
    return {
        "command": command,
        "inputs": to_plain(inputs),
        "results": to_plain(results),
        "status": "ok" if ok else "failed",
        "version": __version__,
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)
