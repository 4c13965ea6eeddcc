"""
End-to-end coefficient generation: validate the input polynomial, pick the
block size, solve, and rank the real sets.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

from .extprec import PrecisionTarget, _parse_fraction, parse_number, target_from_name
from .scheme import SchemeSpec, check_degree, select_params
from .solver import InnerProblem, SolverConfig, solve
from .stability import StabilityReport, assess

__all__ = ["LeadingCoefficientError", "as_exact", "generate"]


class LeadingCoefficientError(ValueError):
    """The leading coefficient ``b_m`` is zero."""


def as_exact(coeffs) -> list[Fraction]:
    """Exact rationals from strings (``"0.1"``, ``"1/24"``), ints, floats or
    Fractions. Floats are taken at their exact binary value."""
    out = []
    for c in coeffs:
        if isinstance(c, str):
            out.append(_parse_fraction(c))
        elif isinstance(c, (int, float, Fraction)):
            out.append(Fraction(c))
        else:
            out.append(Fraction(float(c)))
    return out


def generate(
    b,
    precision: str | PrecisionTarget = "double",
    type_pol: int = 1,
    ndigits: int | None = None,
    s: int | None = None,
    config: SolverConfig | None = None,
) -> StabilityReport:
    """Compute the most stable coefficient set for ``sum(b_i A**i)``.

    Parameters
    ----------
    b : sequence
        Coefficients ``b_0 .. b_m``; strings may be exact ratios.
    precision : {'double', 'single'} or PrecisionTarget
    type_pol : {1, 2, 3}
        Structural variant.
    ndigits : int, optional
        Extended-precision digits; 32 for double and 16 for single by default.
    s : int, optional
        Block size override; by default the smallest one saving a product.

    Returns
    -------
    StabilityReport

    Raises
    ------
    RecommendPSError
        ``m < 8`` or ``m`` in {9, 11}.
    LeadingCoefficientError
        ``b_m == 0``.
    SchemeParameterError
        ``s`` outside ``2 <= s <= m/4``.
    """
    target = precision if isinstance(precision, PrecisionTarget) else target_from_name(precision)
    exact = as_exact(b)
    m = len(exact) - 1
    check_degree(m)
    if exact[-1] == 0:
        raise LeadingCoefficientError("leading coefficient b_m is zero")
    sign = -1 if exact[-1] < 0 else 1
    s, _ = select_params(m, s)
    if ndigits is None:
        ndigits = target.default_digits
    cfg = config or SolverConfig(ndigits=ndigits)
    spec = SchemeSpec(m, s, type_pol, sign)

    sets = solve(InnerProblem.from_polynomial(spec, exact), cfg)
    tail = tuple(parse_number(sign * x, ndigits) for x in exact[: spec.p])
    sets = [replace(cs, tail=tail) for cs in sets]
    return assess(sets, exact, spec, target, ndigits)
