"""
JSON serialization of generation results.

Target-format coefficients are stored as hex-float strings so a saved report
reproduces bit-identical evaluations. Extended-precision values are decimal
strings with ``ndigits`` significant digits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import jsonschema
import mpmath

from .extprec import target_from_name
from .scheme import SchemeSpec

__all__ = ["SCHEMA_VERSION", "LoadedReport", "load_report", "report_to_dict", "dump_report"]

SCHEMA_VERSION = "polyeval-report/1"

_strs = {"type": "array", "items": {"type": "string"}}

REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": [
        "schema", "inputs", "c_prec", "tail_prec", "leading_coeff_sign", "c_vpa", "tail_vpa",
        "er_min", "savings", "n_solutions_total", "n_solutions_real", "all_cvpa", "warning",
        "message",
    ],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "inputs": {
            "type": "object",
            "additionalProperties": False,
            "required": ["b", "m", "precision", "type_pol", "ndigits", "s", "p"],
            "properties": {
                "b": _strs,
                "m": {"type": "integer", "minimum": 8},
                "precision": {"enum": ["single", "double"]},
                "type_pol": {"enum": [1, 2, 3]},
                "ndigits": {"type": "integer", "minimum": 16},
                "s": {"type": "integer", "minimum": 2},
                "p": {"type": "integer", "minimum": 0},
            },
        },
        "c_prec": _strs,
        "tail_prec": _strs,
        "leading_coeff_sign": {"enum": [1, -1]},
        "c_vpa": _strs,
        "tail_vpa": _strs,
        "er_min": {"type": "number"},
        "savings": {"type": "integer"},
        "n_solutions_total": {"type": "integer"},
        "n_solutions_real": {"type": "integer"},
        "all_cvpa": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
            },
        },
        "warning": {"type": "boolean"},
        "message": {"type": "string"},
    },
}


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def report_to_dict(report) -> dict:
    nd = report.ndigits

    def dec(v):
        return mpmath.nstr(mpmath.mpf(v), nd, min_fixed=1, max_fixed=0) if v != 0 else "0"

    all_cvpa = []
    for cs in report.sets:
        all_cvpa.append([[dec(mpmath.mpc(c).real), dec(mpmath.mpc(c).imag)] for c in cs.inner])
    spec = report.spec
    return {
        "schema": SCHEMA_VERSION,
        "inputs": {
            "b": [_frac_str(x) for x in report.b],
            "m": spec.m,
            "precision": report.target.kind,
            "type_pol": spec.variant,
            "ndigits": nd,
            "s": spec.s,
            "p": spec.p,
        },
        "c_prec": [float(c).hex() for c in report.c_prec],
        "tail_prec": [float(a).hex() for a in report.tail_prec],
        "leading_coeff_sign": spec.sign,
        "c_vpa": [dec(c) for c in report.c_vpa],
        "tail_vpa": [dec(a) for a in report.tail_vpa],
        "er_min": report.er_min,
        "savings": spec.savings,
        "n_solutions_total": len(report.sets),
        "n_solutions_real": report.n_real,
        "all_cvpa": all_cvpa,
        "warning": report.warning,
        "message": report.message,
    }


def dump_report(report, fh) -> None:
    json.dump(report_to_dict(report), fh, indent=2)
    fh.write("\n")


@dataclass
class LoadedReport:
    """What an evaluator needs from a saved report."""

    spec: SchemeSpec
    target: object
    c_prec: list
    tail_prec: list
    b: list
    warning: bool
    data: dict


def load_report(source) -> LoadedReport:
    """Parse and validate a report from a path, file object or dict."""
    if isinstance(source, dict):
        data = source
    elif hasattr(source, "read"):
        data = json.load(source)
    else:
        with open(source) as fh:
            data = json.load(fh)
    try:
        jsonschema.validate(data, REPORT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ValueError(f"invalid report: {exc.message}") from None
    inp = data["inputs"]
    target = target_from_name(inp["precision"])
    spec = SchemeSpec(inp["m"], inp["s"], inp["type_pol"], data["leading_coeff_sign"])
    c_prec = [target.dtype(float.fromhex(h)) for h in data["c_prec"]]
    tail_prec = [target.dtype(float.fromhex(h)) for h in data["tail_prec"]]
    if len(c_prec) != 4 * spec.s + 1 or len(tail_prec) != spec.p:
        raise ValueError("report coefficient counts do not match s and p")
    b = [Fraction(x) for x in inp["b"]]
    return LoadedReport(spec, target, c_prec, tail_prec, b, data["warning"], data)
