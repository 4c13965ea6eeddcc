"""
Dense matrix kernels with matrix-product accounting, and the evaluator for
the reduced-cost nested scheme.

Matrices are numpy arrays: ``float64``/``float32`` for target-format runs and
``object`` arrays of mpmath ``mpf`` for extended-precision oracle runs. Only
matrix-matrix products are counted; scalings and additions are free.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import mpmath
import numpy as np

__all__ = [
    "EvalResult",
    "ProductCounter",
    "evaluate_scheme",
    "identity_like",
    "lincomb",
    "mat_add",
    "mat_mul",
    "mat_scale",
    "norm1",
    "parse_matrix_csv",
    "read_matrix_csv",
    "to_bigreal",
    "write_matrix_csv",
]


class ProductCounter:
    """Counts every explicit matrix-matrix multiplication routed through it."""

    def __init__(self):
        self.count = 0

    def __call__(self, A, B):
        return mat_mul(A, B, self)


@dataclass
class EvalResult:
    value: np.ndarray
    product_count: int


def _check_square(A):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def mat_mul(A, B, counter: ProductCounter | None = None):
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch {A.shape} @ {B.shape}")
    if counter is not None:
        counter.count += 1
    if A.dtype == object or B.dtype == object:
        return np.dot(A, B)
    return A @ B


def mat_add(A, B):
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch {A.shape} + {B.shape}")
    return A + B


def mat_scale(c, A):
    return _scalar_like(c, A) * A


def norm1(A):
    """Maximum absolute column sum."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    if A.dtype == object:
        return max(mpmath.fsum(abs(v) for v in A[:, j]) for j in range(A.shape[1]))
    return float(np.max(np.sum(np.abs(A), axis=0)))


def identity_like(A):
    n = A.shape[0]
    if A.dtype == object:
        eye = np.empty((n, n), dtype=object)
        eye[:] = mpmath.mpf(0)
        for i in range(n):
            eye[i, i] = mpmath.mpf(1)
        return eye
    return np.eye(n, dtype=A.dtype)


def to_bigreal(A):
    """Exact conversion of a float matrix to an object array of mpf."""
    A = np.asarray(A)
    out = np.empty(A.shape, dtype=object)
    for idx, v in np.ndenumerate(A):
        out[idx] = v if isinstance(v, mpmath.mpf) else mpmath.mpf(float(v))
    return out


def _scalar_like(c, A):
    if A.dtype == object:
        return c if isinstance(c, (mpmath.mpf, mpmath.mpc)) else mpmath.mpf(c)
    return A.dtype.type(c)


def lincomb(coeffs, powers, A):
    """``sum(coeffs[k] * powers[k])`` accumulated from the last entry to the
    first; ``powers[k] is None`` stands for the identity."""
    acc = None
    for c, P in zip(reversed(coeffs), reversed(powers)):
        if P is None:
            term = identity_like(A) * _scalar_like(c, A)
        else:
            term = _scalar_like(c, A) * P
        acc = term if acc is None else acc + term
    if acc is None:
        acc = identity_like(A) * _scalar_like(0, A)
    return acc


def evaluate_scheme(A, spec, coeffs, tail=None) -> EvalResult:
    """Evaluate ``sign * z(A)`` for the nested scheme described by ``spec``.

    Parameters
    ----------
    A : (n, n) array
        Float or mpf-object matrix.
    spec : SchemeSpec
    coeffs : sequence
        Inner coefficient vector of length ``4s+1`` in the variant's layout
        (see :mod:`polyeval.scheme`).
    tail : sequence, optional
        Outer coefficients ``a_0 .. a_{p-1}`` already multiplied by the sign.

    Returns
    -------
    EvalResult
        ``product_count`` is ``s + 1 + ceil(p/s)``.
    """
    from .scheme import split_layout

    A = _check_square(A)
    s, p, t, r = spec.s, spec.p, spec.t, spec.r
    if len(coeffs) != 4 * s + 1:
        raise ValueError(f"expected {4 * s + 1} inner coefficients, got {len(coeffs)}")
    tail = list(tail) if tail is not None else []
    if len(tail) != p:
        raise ValueError(f"expected {p} tail coefficients, got {len(tail)}")
    blocks = split_layout(spec.variant, s, coeffs)
    mul = ProductCounter()

    pw = [None, A]  # pw[i] = A**i, pw[0] is the identity
    for i in range(2, s + 1):
        pw.append(mul(pw[i - 1], A))
    As = pw[s]

    def poly(cs, lo):
        # cs holds coefficients of A**lo .. A**s in ascending order
        return lincomb(cs, pw[lo : lo + len(cs)], A)

    y0 = mul(As, poly(blocks["q"], 1))
    if spec.variant == 1:
        left = y0 + poly(blocks["d"], 1)
        right = y0 + poly(blocks["e"], 2)
        y1 = mul(left, right) + _scalar_like(blocks["e0"], A) * y0 + poly(blocks["f"], 0)
    elif spec.variant == 2:
        left = y0 + poly(blocks["g"], 0)
        right = y0 + poly(blocks["e"], 2)
        y1 = mul(left, right) + poly(blocks["f"], 0)
    else:
        left = y0 + poly(blocks["d"], 1)
        right = y0 + poly(blocks["e"], 1)
        y1 = mul(left, right) + poly(blocks["f"], 0)

    z = y1
    for k in range(t):
        hi = p - k * s
        z = mul(z, As) + lincomb(tail[hi - s : hi], pw[0:s], A)
    if r > 0:
        z = mul(z, pw[r]) + lincomb(tail[0:r], pw[0:r], A)
    if spec.sign < 0:
        z = -z
    return EvalResult(z, mul.count)


def read_matrix_csv(path, dtype=np.float64) -> np.ndarray:
    """Read a square matrix stored one row per line."""
    with open(path, newline="") as fh:
        return parse_matrix_csv(fh.read(), dtype)


def parse_matrix_csv(text: str, dtype=np.float64) -> np.ndarray:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    try:
        A = np.array([[float(v) for v in row] for row in rows], dtype=dtype)
    except ValueError as exc:
        raise ValueError(f"malformed matrix CSV: {exc}") from None
    return _check_square(A)


def write_matrix_csv(A, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    for row in np.asarray(A):
        writer.writerow([repr(float(v)) for v in row])
