from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyeval.extprec import working_digits
from polyeval.matrixeval import evaluate_scheme, to_bigreal
from polyeval.psm import ps_cost
from polyeval.scheme import (
    CoefficientSet,
    RecommendPSError,
    SchemeParameterError,
    SchemeSpec,
    block_sizes,
    join_layout,
    reconstruct,
    reconstruct_inner,
    scheme_cost,
    select_params,
    split_layout,
)

ND = 32
SAVING_DEGREES = [8, 10] + list(range(12, 101))


def nested_scalar(variant, s, inner, tail, x):
    """Oracle: evaluate the nested formula directly on a scalar."""
    blk = split_layout(variant, s, inner)
    Q = sum(q * x ** (i + 1) for i, q in enumerate(blk["q"]))
    y0 = x**s * Q
    if variant == 1:
        L = sum(d * x ** (i + 1) for i, d in enumerate(blk["d"]))
        R = sum(e * x ** (i + 2) for i, e in enumerate(blk["e"]))
    elif variant == 2:
        L = sum(g * x**i for i, g in enumerate(blk["g"]))
        R = sum(e * x ** (i + 2) for i, e in enumerate(blk["e"]))
    else:
        L = sum(d * x ** (i + 1) for i, d in enumerate(blk["d"]))
        R = sum(e * x ** (i + 1) for i, e in enumerate(blk["e"]))
    F = sum(f * x**i for i, f in enumerate(blk["f"]))
    y1 = (y0 + L) * (y0 + R) + F
    if variant == 1:
        y1 += blk["e0"] * y0
    p = len(tail)
    return y1 * x**p + sum(a * x**j for j, a in enumerate(tail))


def test_select_params_examples():
    assert select_params(28) == (4, 12)
    assert select_params(46) == (6, 22)
    assert select_params(12) == (3, 0)
    assert select_params(8) == (2, 0)


def test_scheme_cost_examples():
    assert scheme_cost(2, 0) == 3
    assert scheme_cost(4, 0) == 5
    assert scheme_cost(4, 12) == 8
    assert ps_cost(28).cost - scheme_cost(4, 12) == 1


@pytest.mark.parametrize("m", SAVING_DEGREES)
def test_saving_coverage(m):
    s, p = select_params(m)
    assert 4 * s + p == m
    assert scheme_cost(s, p) == ps_cost(m).cost - 1
    assert SchemeSpec(m, s).savings == 1


@pytest.mark.parametrize("m", [0, 1, 5, 7, 9, 11])
def test_refusal(m):
    with pytest.raises(RecommendPSError):
        select_params(m)


@pytest.mark.parametrize("m", [9, 11])
def test_no_saving_exists(m):
    # independent scan over every admissible s
    assert all(scheme_cost(s, m - 4 * s) >= ps_cost(m).cost for s in range(2, m // 4 + 1))


def test_override_bounds():
    assert select_params(28, 7) == (7, 0)
    with pytest.raises(SchemeParameterError):
        select_params(28, 8)
    with pytest.raises(SchemeParameterError):
        select_params(28, 1)


@pytest.mark.parametrize("variant", [1, 2, 3])
@pytest.mark.parametrize("s", range(2, 11))
def test_layout_length(variant, s):
    assert sum(n for _, n in block_sizes(variant, s)) == 4 * s + 1
    coeffs = list(range(4 * s + 1))
    assert join_layout(variant, s, split_layout(variant, s, coeffs)) == coeffs


def test_split_rejects_wrong_length():
    with pytest.raises(ValueError):
        split_layout(1, 2, [0] * 8)


def test_monomial_x8():
    inner = [Fraction(0)] * 9
    inner[0] = Fraction(1)  # q_2
    assert reconstruct_inner(1, 2, inner) == [0] * 8 + [1]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.integers(2, 5), st.integers(0, 7), st.integers(0, 2**32 - 1))
def test_reconstruct_matches_nested_formula(variant, s, p, seed):
    rng = np.random.default_rng(seed)
    inner = [Fraction(int(v), 16) for v in rng.integers(-40, 40, 4 * s + 1)]
    tail = [Fraction(int(v), 8) for v in rng.integers(-40, 40, p)]
    spec = SchemeSpec(4 * s + p, s, variant)
    bhat = reconstruct(spec, CoefficientSet(tuple(inner), tuple(tail), True, variant))
    assert len(bhat) == spec.m + 1
    # leading coefficient is q_s**2 for every variant
    assert bhat[-1] == inner[0] ** 2
    for x in (Fraction(1, 3), Fraction(-2, 5), Fraction(7, 4)):
        assert sum(c * x**i for i, c in enumerate(bhat)) == nested_scalar(variant, s, inner, tail, x)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.integers(2, 4), st.integers(0, 9), st.integers(0, 2**32 - 1))
def test_reconstruct_matches_matrix_evaluation(variant, s, p, seed):
    rng = np.random.default_rng(seed)
    spec = SchemeSpec(4 * s + p, s, variant)
    with working_digits(ND):
        inner = [mpmath.mpf(float(v)) for v in rng.uniform(-1, 1, 4 * s + 1)]
        tail = [mpmath.mpf(float(v)) for v in rng.uniform(-1, 1, p)]
        x = mpmath.mpf(float(rng.uniform(-1.2, 1.2)))
        bhat = reconstruct(spec, CoefficientSet(tuple(inner), tuple(tail), True, variant))
        lhs = sum(c * x**i for i, c in enumerate(bhat))
        res = evaluate_scheme(to_bigreal([[x]]), spec, inner, tail)
        scale = sum(abs(c) * abs(x) ** i for i, c in enumerate(bhat))
        assert abs(lhs - res.value[0, 0]) <= mpmath.mpf(10) ** (8 - ND) * scale
        assert res.product_count == spec.cost


def test_negative_sign_spec():
    spec = SchemeSpec(8, 2, 1, -1)
    assert spec.cost == 3 and spec.savings == 1
    with pytest.raises(ValueError):
        SchemeSpec(8, 2, 4)
    with pytest.raises(ValueError):
        SchemeSpec(8, 2, 1, 0)
