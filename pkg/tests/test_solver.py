import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyeval.apps import exp_taylor_coeffs, geometric_coeffs
from polyeval.extprec import working_digits
from polyeval.scheme import CoefficientSet, SchemeSpec, reconstruct, split_layout
from polyeval.solver import (
    InnerProblem,
    SolverConfig,
    inner_residual,
    solve,
    solve_general,
    solve_s2,
)

ND = 32
TOL = mpmath.mpf(10) ** (8 - ND)
EXP8 = [Fraction(1, math.factorial(i)) for i in range(9)]

# [q2, q1, d2, d1, e2, e0] of the two positive-branch exp-Taylor m=8 sets,
# from an independent symbolic solve of the coefficient equations (20 digits)
EXP8_SETS = [
    ("0.0049801192055599734999", "0.019920476822239893999", "0.076652653211191466903",
     "0.87650098017855533598", "0.12255211501120747309", "2.9743072048476266638"),
    ("0.0049801192055599734999", "0.019920476822239893999", "0.34167736005584630709",
     "0.87650098017855533598", "-0.14247259183344736709", "14.635394306012439632"),
]


def residual(problem, cset):
    with working_digits(ND):
        return inner_residual(problem.spec.variant, problem.spec.s, cset.inner, problem.beta)


def problem_from(b, s=2, variant=1):
    sign = -1 if b[-1] < 0 else 1
    return InnerProblem.from_polynomial(SchemeSpec(len(b) - 1, s, variant, sign), b)


def _close(a, b, tol):
    scale = max(1, max(abs(mpmath.mpc(c)) for c in a))
    return max(abs(mpmath.mpc(x) - mpmath.mpc(y)) for x, y in zip(a, b)) <= tol * scale


def test_exp8_closed_form_against_symbolic_oracle():
    prob = problem_from(EXP8)
    sets = solve_s2(prob)
    assert len(sets) == 4 and all(cs.is_real for cs in sets)
    expected = []
    for row in EXP8_SETS:
        v = [mpmath.mpf(x) for x in row]
        expected += [v, [-x for x in v]]
    for exp in expected:
        assert any(_close(cs.inner[:6], exp, 1e-18) for cs in sets)
    for cs in sets:
        assert residual(prob, cs) <= TOL


def test_exp8_reconstruct_deviation():
    prob = problem_from(EXP8)
    with working_digits(ND):
        ref = [mpmath.mpf(b.numerator) / b.denominator for b in EXP8]
        for cs in solve_s2(prob):
            bhat = reconstruct(prob.spec, cs)
            assert max(abs(h - r) / r for h, r in zip(bhat, ref)) <= TOL


def test_monomial_uses_general_path():
    b = [Fraction(0)] * 8 + [Fraction(1)]
    sets = solve(problem_from(b))
    monomial = [cs for cs in sets if max(abs(c) for c in cs.inner[1:]) == 0]
    assert monomial and abs(monomial[0].inner[0]) == 1


def test_ones9_geometric():
    prob = problem_from(geometric_coeffs(9))
    sets = solve(prob)
    assert sets
    with working_digits(ND):
        x = mpmath.mpf("0.7")
        ref = (x**9 - 1) / (x - 1)
        for cs in sets:
            assert residual(prob, cs) <= TOL
            bhat = reconstruct(prob.spec, cs)
            assert abs(sum(c * x**i for i, c in enumerate(bhat)) - ref) <= TOL * abs(ref)


def test_singular_branch_c3_zero():
    # b7 = 0 with b5 != 0: linear in e2, two sets
    b = [Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(2, 7),
         Fraction(3, 4), Fraction(1, 6), Fraction(0), Fraction(1, 9)]
    prob = problem_from(b)
    sets = solve_s2(prob)
    assert len(sets) == 2
    for cs in sets:
        assert cs.is_real and cs.inner[1] == 0
        assert residual(prob, cs) <= TOL


def test_solve_s2_rejects_other_shapes():
    with pytest.raises(ValueError):
        solve_s2(problem_from(exp_taylor_coeffs(12), s=3))


def test_nonpositive_leading():
    with pytest.raises(ValueError):
        InnerProblem(SchemeSpec(8, 2), [1] * 8 + [0])


def test_residual_tol_bound():
    with pytest.raises(ValueError):
        SolverConfig(ndigits=32, residual_tol=1e-10)


@pytest.mark.parametrize("m,s,total,real", [(16, 4, 12, 4), (28, 5, 16, 8), (28, 6, 20, 4)])
def test_set_counts(m, s, total, real):
    b = geometric_coeffs(17) if m == 16 else exp_taylor_coeffs(m)
    prob = problem_from(b, s)
    sets = solve(prob)
    assert len(sets) >= total
    assert sum(cs.is_real for cs in sets) >= real
    assert len(sets) <= 2 * 2**s
    for cs in sets:
        assert residual(prob, cs) <= TOL


@pytest.mark.parametrize("variant", [1, 2, 3])
def test_variants_residual_sound(variant):
    prob = problem_from(exp_taylor_coeffs(16), 3, variant)
    sets = solve(prob)
    assert sets
    for cs in sets:
        assert cs.variant == variant
        assert residual(prob, cs) <= TOL


def test_real_sets_first_and_flagged():
    sets = solve(problem_from(geometric_coeffs(17), 4))
    flags = [cs.is_real for cs in sets]
    assert flags == sorted(flags, reverse=True)
    for cs in sets:
        imag = max(abs(mpmath.mpc(c).imag) for c in cs.inner)
        assert (imag == 0) == cs.is_real


def test_condition_d_ne_e():
    cfg = SolverConfig()
    for s in (3, 4, 5):
        for cs in solve(problem_from(exp_taylor_coeffs(4 * s), s), cfg):
            blk = split_layout(1, s, cs.inner)
            assert abs(mpmath.mpc(blk["d"][-1]) - mpmath.mpc(blk["e"][-1])) > cfg.tau_eq


def test_sign_symmetry():
    # negating everything but F maps a solution to a solution
    s = 3
    prob = problem_from(exp_taylor_coeffs(12), s)
    sets = solve(prob)
    nf = 3 * s
    for cs in sets:
        flipped = [-c for c in cs.inner[:nf]] + list(cs.inner[nf:])
        assert any(_close(flipped, other.inner, 1e-20) for other in sets)


def test_negative_leading_coefficient():
    b = [-x for x in exp_taylor_coeffs(12)]
    prob = problem_from(b, 3)
    assert prob.spec.sign == -1
    sets = solve(prob)
    assert sets
    with working_digits(ND):
        # the scheme produces -P; tails carry sign * b_j
        ref = [-mpmath.mpf(x.numerator) / x.denominator for x in b]
        for cs in sets:
            tail = tuple(ref[: prob.spec.p])
            bhat = reconstruct(prob.spec, CoefficientSet(cs.inner, tail, cs.is_real, 1))
            assert max(abs(h - r) for h, r in zip(bhat, ref)) <= TOL


def test_deterministic():
    prob = problem_from(exp_taylor_coeffs(12), 3)
    assert [cs.inner for cs in solve(prob)] == [cs.inner for cs in solve(prob)]


def _random_m8(seed):
    rng = np.random.default_rng(seed)
    b = [Fraction(int(v), int(d)) for v, d in zip(rng.integers(-60, 60, 9), rng.integers(1, 30, 9))]
    if b[7] == 0:
        b[7] = Fraction(1, 3)
    if b[8] == 0:
        b[8] = Fraction(2, 5)
    return b


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_closed_form_agrees_with_general(seed):
    prob = problem_from(_random_m8(seed))
    closed = solve_s2(prob)
    general = solve_general(prob)
    assert len(closed) == len(general)
    for cs in closed:
        assert residual(prob, cs) <= TOL
        assert any(_close(cs.inner, g.inner, 1e-12) for g in general)
