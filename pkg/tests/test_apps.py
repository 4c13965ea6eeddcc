import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from polyeval.apps import GALLERY_FAMILIES, TestMatrixSpec, exp_taylor_coeffs, gallery, geometric_coeffs, westreich_eval
from polyeval.extprec import DOUBLE
from polyeval.matrixeval import evaluate_scheme, norm1
from polyeval.psm import ps_eval

from conftest import cached_geometric_report

U = DOUBLE.u


def test_exp_coeffs():
    assert exp_taylor_coeffs(2) == [1, 1, Fraction(1, 2)]
    b = exp_taylor_coeffs(28)
    assert b[28] == Fraction(1, 304888344611713860501504000000)
    assert math.factorial(28) == 304888344611713860501504000000


def test_exp_sum_at_one():
    with mpmath.workdps(50):
        total = sum(mpmath.mpf(c.numerator) / c.denominator for c in exp_taylor_coeffs(28))
        assert abs(total - mpmath.e) <= mpmath.mpf(10) ** -29


def test_geometric_coeffs():
    assert geometric_coeffs(1) == [1]
    b = geometric_coeffs(17)
    assert b == [1] * 17 and len(b) - 1 == 16
    x = Fraction(1, 2)
    assert sum(c * x**i for i, c in enumerate(geometric_coeffs(13))) == (x**13 - 1) / (x - 1)


@pytest.mark.parametrize("N,count", [(9, 4), (13, 5), (17, 6)])
def test_westreich_counts_scalar(N, count):
    res = westreich_eval(np.array([[1.0]]), N)
    assert res.product_count == count
    assert res.value[0, 0] == N


def test_westreich_scalar_closed_form():
    x = 0.3
    val = westreich_eval(np.array([[x]]), 13).value[0, 0]
    ref = (x**13 - 1) / (x - 1)
    assert abs(val - ref) <= 10 * U * abs(ref)


def test_westreich_rejects():
    with pytest.raises(ValueError):
        westreich_eval(np.eye(2), 10)


def test_jordan_structure():
    A = gallery(TestMatrixSpec("jordan_block", 4, 3))
    assert np.array_equal(A, np.triu(A)) and np.array_equal(A, np.tril(A, 1))
    assert np.all(np.diag(A) == 0.9) and np.all(np.diag(A, 1) == 1)


def test_uniform_deterministic():
    a = gallery(TestMatrixSpec("uniform01", 100, 0))
    b = gallery(TestMatrixSpec("uniform01", 100, 0))
    assert np.array_equal(a, b)


def test_nilpotent():
    A = gallery(TestMatrixSpec("nilpotent_band", 8, 1))
    assert np.count_nonzero(A) > 0
    assert not np.any(np.linalg.matrix_power(A, 8))


def test_unknown_family():
    with pytest.raises(ValueError):
        gallery(TestMatrixSpec("hilbert", 4))


@pytest.mark.parametrize("family", GALLERY_FAMILIES)
@pytest.mark.parametrize("N", [9, 13, 17])
def test_pairwise_agreement(family, N):
    report = cached_geometric_report(N)
    for seed in range(3):
        A = gallery(TestMatrixSpec(family, 8, seed))
        if norm1(A) > 2:
            A = A * (1.5 / norm1(A))
        W = westreich_eval(A, N)
        P = ps_eval(A, [1.0] * N)
        Z = evaluate_scheme(A, report.spec, report.c_prec, report.tail_prec)
        ref = norm1(P.value)
        assert norm1(W.value - P.value) <= 50 * U * ref
        assert norm1(Z.value - P.value) <= 50 * U * ref
        assert norm1(Z.value - W.value) <= 50 * U * ref
        assert Z.product_count <= W.product_count - 1
