"""
Stability ranking of solution sets.

Each real set is rounded to the target format, the polynomial it generates is
rebuilt in extended precision, and its worst coefficient deviation

    delta_i = |b_i - b_hat_i| / |b_i|   (b_i != 0)
    delta_i = |b_i - b_hat_i|           (b_i == 0)

is the set's score. The lowest score wins; above ``10 u`` the result is
flagged as likely inaccurate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import mpmath

from .extprec import DOUBLE, PrecisionTarget, parse_number, round_to_target, working_digits
from .matrixeval import evaluate_scheme, to_bigreal
from .scheme import CoefficientSet, SchemeSpec, reconstruct

__all__ = ["NoRealSetError", "SetScore", "StabilityReport", "assess", "scalar_probe"]

log = logging.getLogger(__name__)

PROBE_DIGITS = 60


class NoRealSetError(ValueError):
    """No real candidate set is available for ranking."""


@dataclass
class SetScore:
    index: int
    eps_max: float
    deltas: list


@dataclass
class StabilityReport:
    spec: SchemeSpec
    target: PrecisionTarget
    per_set: list
    er_min: float
    chosen: int
    warning: bool
    c_prec: tuple
    c_vpa: tuple
    tail_prec: tuple
    tail_vpa: tuple
    sets: list = field(repr=False)
    b: tuple = field(default=(), repr=False)
    ndigits: int = 32

    @property
    def leading_coeff_sign(self) -> int:
        return self.spec.sign

    @property
    def s(self) -> int:
        return self.spec.s

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def savings(self) -> int:
        return self.spec.savings

    @property
    def n_real(self) -> int:
        return sum(1 for cs in self.sets if cs.is_real)

    @property
    def message(self) -> str:
        if self.warning:
            return (f"warning: er_min = {self.er_min:.3g} exceeds 10u = {10 * self.target.u:.3g}; "
                    "the evaluation formulas are likely to be inaccurate")
        return f"stable: er_min = {self.er_min:.3g} <= 10u; the evaluation formulas are likely accurate"


def _deltas(target_b, bhat):
    out = []
    for b, bh in zip(target_b, bhat):
        err = abs(b - bh)
        out.append(err / abs(b) if b != 0 else err)
    return out


def assess(sets, b, spec: SchemeSpec, target: PrecisionTarget = DOUBLE, ndigits: int = 32) -> StabilityReport:
    """Rank real sets by reconstruction error after rounding to ``target``.

    Parameters
    ----------
    sets : list of CoefficientSet
        Output of the solver (canonical order). Tails are filled in here.
    b : sequence
        Original coefficients ``b_0 .. b_m`` (mpf or exact rationals).
    """
    real = [(i, cs) for i, cs in enumerate(sets) if cs.is_real]
    if not real:
        raise NoRealSetError("no real stable candidates")
    sigma = spec.sign
    with working_digits(ndigits):
        sb = [sigma * _mp(x) for x in b]
        tail_vpa = tuple(sb[: spec.p])
        scores = []
        for i, cs in real:
            rounded = [mpmath.mpf(float(round_to_target(c, target))) for c in cs.inner]
            bhat = reconstruct(spec, CoefficientSet(tuple(rounded), tail_vpa, True, spec.variant))
            deltas = _deltas(sb, bhat)
            scores.append(SetScore(i, float(max(deltas)), [float(d) for d in deltas]))
    best = min(scores, key=lambda sc: (sc.eps_max, sc.index))
    chosen = sets[best.index]
    warning = best.eps_max > 10 * target.u
    report = StabilityReport(
        spec=spec,
        target=target,
        per_set=scores,
        er_min=best.eps_max,
        chosen=best.index,
        warning=warning,
        c_prec=tuple(round_to_target(c, target) for c in chosen.inner),
        c_vpa=tuple(chosen.inner),
        tail_prec=tuple(round_to_target(a, target) for a in tail_vpa),
        tail_vpa=tail_vpa,
        sets=list(sets),
        b=tuple(b),
        ndigits=ndigits,
    )
    if warning:
        log.warning(report.message)
    else:
        log.info(report.message)
    return report


def _mp(x):
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return x
    if isinstance(x, float) or hasattr(x, "_mpf_"):
        return mpmath.mpf(x)
    return parse_number(x)


def scalar_probe(report: StabilityReport, x, reference, ndigits: int = PROBE_DIGITS):
    """Relative error of the rounded scheme at the scalar ``x``.

    The target-rounded coefficients are used as exact values and the scheme
    is evaluated on the 1x1 matrix ``[x]`` with ``ndigits`` digits.
    """
    with working_digits(ndigits):
        reference = _mp(reference)
        if reference == 0:
            raise ValueError("reference value must be non-zero")
        A = to_bigreal([[_mp(x)]])
        inner = [mpmath.mpf(float(c)) for c in report.c_prec]
        tail = [mpmath.mpf(float(a)) for a in report.tail_prec]
        value = evaluate_scheme(A, report.spec, inner, tail).value[0, 0]
        return abs(reference - value) / abs(reference)
