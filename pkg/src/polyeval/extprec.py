"""
Extended-precision scalar layer.

Every coefficient computation in the package goes through :mod:`mpmath`
``mpf``/``mpc`` values created under :func:`working_digits`. This module adds
the pieces mpmath does not provide directly: parsing of exact rational
literals, and correctly rounded conversion to IEEE single/double with
overflow detection.
"""

from __future__ import annotations

import contextlib
import math
import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import libmp, mp

__all__ = [
    "DOUBLE",
    "SINGLE",
    "PrecisionTarget",
    "RoundingOverflowError",
    "parse_number",
    "round_to_target",
    "target_from_name",
    "to_fraction",
    "working_digits",
]

MIN_DIGITS = 16

_DECIMAL = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_RATIO = re.compile(r"^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$")


class RoundingOverflowError(OverflowError):
    """Value exceeds the finite range of the requested IEEE format."""


@dataclass(frozen=True)
class PrecisionTarget:
    """IEEE binary format that coefficients are rounded to."""

    kind: str
    mantissa_bits: int
    min_exponent: int  # exponent of the smallest normal number
    max_exponent: int  # exponent of the largest finite number
    dtype: type
    default_digits: int

    @property
    def u(self) -> float:
        """Unit roundoff ``2**-mantissa_bits``."""
        return math.ldexp(1.0, -self.mantissa_bits)

    @property
    def max_value(self) -> float:
        return float(np.finfo(self.dtype).max)


SINGLE = PrecisionTarget("single", 24, -126, 127, np.float32, 16)
DOUBLE = PrecisionTarget("double", 53, -1022, 1023, np.float64, 32)


def target_from_name(name: str) -> PrecisionTarget:
    if name == "double":
        return DOUBLE
    if name == "single":
        return SINGLE
    raise ValueError(f"precision must be 'single' or 'double', got {name!r}")


@contextlib.contextmanager
def working_digits(ndigits: int):
    """Run a block with mpmath carrying at least ``ndigits`` decimal digits.

    Round-to-nearest binary arithmetic; mpmath picks a mantissa of at least
    ``ceil(ndigits * log2(10))`` bits.
    """
    if ndigits < MIN_DIGITS:
        raise ValueError(f"ndigits must be >= {MIN_DIGITS}, got {ndigits}")
    with mpmath.workdps(ndigits):
        yield


def parse_number(text, ndigits: int | None = None) -> mpmath.mpf:
    """Parse a decimal literal or an integer ratio ``"p/q"``.

    The value is correctly rounded once to the working precision, so inputs
    such as ``"1/40320"`` never pass through binary floating point.

    Examples
    --------
    >>> with working_digits(32):
    ...     parse_number("1/2")
    mpf('0.5')
    """
    if isinstance(text, (int, Fraction)):
        frac = Fraction(text)
    elif isinstance(text, str):
        frac = _parse_fraction(text)
    else:
        raise TypeError(f"cannot parse {type(text).__name__} as a number")
    if ndigits is not None:
        with working_digits(ndigits):
            return _from_fraction(frac)
    return _from_fraction(frac)


def _parse_fraction(text: str) -> Fraction:
    stripped = text.strip()
    match = _RATIO.match(stripped)
    if match:
        p, q = int(match.group(1)), int(match.group(2))
        if q == 0:
            raise ZeroDivisionError(f"zero denominator in {text!r}")
        return Fraction(p, q)
    if _DECIMAL.match(stripped):
        return Fraction(stripped)
    raise ValueError(f"malformed number {text!r}")


def _from_fraction(frac: Fraction) -> mpmath.mpf:
    raw = libmp.from_rational(frac.numerator, frac.denominator, mp.prec, libmp.round_nearest)
    return mp.make_mpf(raw)


def to_fraction(x) -> Fraction:
    """Exact rational value of a finite mpf or float."""
    if isinstance(x, float):
        return Fraction(x)
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def round_to_target(x, target: PrecisionTarget = DOUBLE):
    """Round a real value to the nearest ``target`` float (ties to even).

    Subnormal results are rounded on the fixed subnormal grid. Magnitudes that
    round beyond the largest finite value raise :class:`RoundingOverflowError`.
    """
    x = mpmath.mpf(x)
    if not mpmath.isfinite(x):
        raise ValueError("cannot round a non-finite value")
    if x == 0:
        return target.dtype(0.0)
    _, exp = mpmath.frexp(x)  # |x| = f * 2**exp, 0.5 <= f < 1
    if exp - 1 >= target.min_exponent:
        raw = libmp.normalize(*x._mpf_, target.mantissa_bits, libmp.round_nearest)
    else:
        quantum = target.min_exponent - target.mantissa_bits + 1
        raw = mpmath.ldexp(_nint_even(mpmath.ldexp(x, -quantum)), quantum)._mpf_
    value = float(mp.make_mpf(raw))
    if math.isinf(value) or abs(value) > target.max_value:
        raise RoundingOverflowError(f"{mpmath.nstr(x, 8)} overflows IEEE {target.kind}")
    return target.dtype(value)


def _nint_even(y):
    floor = mpmath.floor(y)
    frac = y - floor
    if frac > 0.5 or (frac == 0.5 and int(floor) % 2 == 1):
        return floor + 1
    return floor
