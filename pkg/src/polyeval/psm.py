"""
Paterson-Stockmeyer evaluation: optimal degrees, cost model, evaluator.

The evaluator doubles as the extended-precision oracle when it is given an
object array of mpf values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .matrixeval import EvalResult, ProductCounter, _check_square, lincomb

__all__ = ["Polynomial", "PsPlan", "optimal_degrees", "ps_cost", "ps_eval"]


@dataclass(frozen=True)
class Polynomial:
    """Coefficients ``b_0 .. b_m`` of ``sum(b_i x**i)``, lowest degree first."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __call__(self, x):
        """Horner evaluation at a scalar."""
        acc = 0
        for b in reversed(self.coeffs):
            acc = acc * x + b
        return acc


@dataclass(frozen=True)
class PsPlan:
    s: int
    m0: int
    cost: int


def optimal_degrees(limit: int) -> list[int]:
    """Degrees ``s**2`` and ``s*(s+1)`` up to ``limit``, ascending."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    out = set()
    s = 1
    while s * s <= limit:
        out.add(s * s)
        if s * (s + 1) <= limit:
            out.add(s * (s + 1))
        s += 1
    return sorted(out)


def _cost_for(m: int, s: int) -> int:
    return s + math.ceil(m / s) - 2


def ps_cost(m: int) -> PsPlan:
    """Cheapest PS plan for degree ``m``; ties go to the smaller block size."""
    if m < 0:
        raise ValueError("degree must be non-negative")
    if m <= 1:
        return PsPlan(1, m, 0)
    lo = math.isqrt(m)
    hi = lo if lo * lo == m else lo + 1
    best = min((_cost_for(m, s), s) for s in {lo, hi})
    cost, s = best
    return PsPlan(s, s * math.ceil(m / s), cost)


def ps_eval(A, b, s: int | None = None) -> EvalResult:
    """Evaluate ``sum(b_i A**i)`` with the Paterson-Stockmeyer scheme.

    Parameters
    ----------
    A : (n, n) array
        Float matrix, or object array of mpf for extended precision.
    b : Polynomial or sequence
        Coefficients ``b_0 .. b_m``. Missing top coefficients up to the next
        multiple of ``s`` are taken as zero.
    s : int, optional
        Block size; defaults to the optimal one from :func:`ps_cost`.

    Returns
    -------
    EvalResult
        The value and the number of matrix products:
        ``(s-1) + (ceil(m/s) - 1)`` for ``m >= s``.
    """
    A = _check_square(A)
    coeffs = list(b.coeffs if isinstance(b, Polynomial) else b)
    m = len(coeffs) - 1
    if s is None:
        s = ps_cost(m).s
    if s < 1:
        raise ValueError("block size must be >= 1")
    mul = ProductCounter()
    top = min(s, m)
    pw = [None, A]
    for i in range(2, top + 1):
        pw.append(mul(pw[i - 1], A))
    if m <= s:
        return EvalResult(lincomb(coeffs, pw[: m + 1], A), mul.count)

    nblocks = math.ceil(m / s)
    zero = mpmath.mpf(0) if A.dtype == object else 0.0
    coeffs += [zero] * (nblocks * s - m)
    m0 = nblocks * s
    As = pw[s]
    # leading block has s+1 terms b_{m0-s} .. b_{m0}
    z = lincomb(coeffs[m0 - s : m0 + 1], pw[: s] + [As], A)
    for hi in range(m0 - s, 0, -s):
        z = mul(z, As) + lincomb(coeffs[hi - s : hi], pw[:s], A)
    return EvalResult(z, mul.count)
