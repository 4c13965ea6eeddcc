"""
Coefficient generators for the test applications, Westreich's factored
geometric-series formulas, and a seeded gallery of test matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .matrixeval import EvalResult, ProductCounter, _check_square, identity_like

__all__ = [
    "GALLERY_FAMILIES",
    "TestMatrixSpec",
    "exp_taylor_coeffs",
    "gallery",
    "geometric_coeffs",
    "westreich_eval",
]

GALLERY_FAMILIES = ("uniform01", "symmetric", "jordan_block", "nilpotent_band", "scaled_random")


def exp_taylor_coeffs(m: int) -> list[Fraction]:
    """Exact Taylor coefficients ``1/i!`` of ``exp`` up to degree ``m``."""
    if m < 0:
        raise ValueError("degree must be non-negative")
    return [Fraction(1, math.factorial(i)) for i in range(m + 1)]


def geometric_coeffs(N: int) -> list[Fraction]:
    """``N`` ones: the coefficients of ``I + A + ... + A**(N-1)``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return [Fraction(1)] * N


def westreich_eval(A, N: int) -> EvalResult:
    """Factored evaluation of the geometric series for ``N`` in 9, 13, 17.

    ``Psi(9)  = I + (I + A^2)(A + A^2)(I + A^4)``
    ``Psi(13) = I + (I + A^2)(A + A^2)(I + A^4 + A^8)``
    ``Psi(17) = I + (I + A^2)(A + A^2)(I + A^4)(I + A^8)``
    """
    if N not in (9, 13, 17):
        raise ValueError(f"Westreich formulas exist for N = 9, 13, 17, not {N}")
    A = _check_square(A)
    mul = ProductCounter()
    eye = identity_like(A)
    A2 = mul(A, A)
    A4 = mul(A2, A2)
    head = mul(eye + A2, A + A2)
    if N == 9:
        W = mul(head, eye + A4)
    else:
        A8 = mul(A4, A4)
        if N == 13:
            W = mul(head, eye + A4 + A8)
        else:
            W = mul(mul(head, eye + A4), eye + A8)
    return EvalResult(eye + W, mul.count)


@dataclass(frozen=True)
class TestMatrixSpec:
    family: str
    n: int
    seed: int = 0

    __test__ = False  # keep pytest from collecting this class


def gallery(spec: TestMatrixSpec) -> np.ndarray:
    """Deterministic test matrix for a family, size and seed.

    ``uniform01``
        entries uniform on [0, 1).
    ``symmetric``
        symmetric part of a normal matrix, scaled to unit 1-norm.
    ``jordan_block``
        upper bidiagonal, diagonal 0.9, superdiagonal 1 (seed unused).
    ``nilpotent_band``
        strictly upper triangular band with dyadic entries; ``A**n == 0``.
    ``scaled_random``
        normal entries scaled to 1-norm ``0.5 + u``, ``u`` uniform on [0, 1).
    """
    n = spec.n
    if n < 1:
        raise ValueError("matrix size must be >= 1")
    rng = np.random.default_rng(spec.seed)
    if spec.family == "uniform01":
        return rng.random((n, n))
    if spec.family == "symmetric":
        B = rng.standard_normal((n, n))
        S = (B + B.T) / 2
        return S / np.max(np.sum(np.abs(S), axis=0))
    if spec.family == "jordan_block":
        return 0.9 * np.eye(n) + np.eye(n, k=1)
    if spec.family == "nilpotent_band":
        A = np.zeros((n, n))
        for k in (1, 2):
            A += np.diag(rng.integers(-4, 5, size=max(n - k, 0)) / 8.0, k=k)
        return A
    if spec.family == "scaled_random":
        B = rng.standard_normal((n, n))
        return B * ((0.5 + rng.random()) / np.max(np.sum(np.abs(B), axis=0)))
    raise ValueError(f"unknown family {spec.family!r}; choose from {GALLERY_FAMILIES}")
