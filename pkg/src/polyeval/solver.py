"""
Solution sets of the inner coefficient-matching system.

For a target ``beta_0 .. beta_{4s}`` (already multiplied by the sign so that
``beta_{4s} > 0``) the unknowns of ``y1`` are found band by band:

* top band (degrees 3s+1..4s) only involves ``Q**2``: ``q_s .. q_1`` follow
  one at a time;
* the next band is linear in ``U = L + R``: ``u_s .. u_1`` follow one at a
  time;
* degrees s+1..2s give s quadratic equations in the remaining s unknowns.
  For variants 1 and 2 they collapse to one polynomial in ``e_s``; for
  variant 3 to a quadratic;
* ``F`` is read off the lowest band.

The target is normalized so its leading coefficient is exactly 1, which keeps
every step up to the univariate polynomial in exact rational arithmetic. The
polynomial is split into square-free factors, so repeated roots are found
once with their multiplicity. Numerical work starts only at root finding.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
import sympy
from mpmath import libmp, mp

from .extprec import working_digits
from .scheme import CoefficientSet, SchemeSpec, join_layout, reconstruct_inner

__all__ = [
    "InnerProblem",
    "SolverConfig",
    "SolverError",
    "canonical_order",
    "inner_residual",
    "solve",
    "solve_general",
    "solve_s2",
]

log = logging.getLogger(__name__)

_Z = sympy.Symbol("z")


class SolverError(RuntimeError):
    """No solution set could be produced."""


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances of the solver. ``None`` fields take defaults from ``ndigits``."""

    ndigits: int = 32
    max_starts: int | None = None
    residual_tol: float | None = None
    dedup_tol: float | None = None
    tau_real: float | None = None
    tau_eq: float | None = None
    rng_seed: int = 0
    guard_digits: int = 20

    def __post_init__(self):
        nd = self.ndigits
        defaults = {
            "residual_tol": 10.0 ** (8 - nd),
            "dedup_tol": 10.0 ** (-nd / 2),
            "tau_real": 10.0 ** (-nd / 2),
            "tau_eq": 10.0 ** (-nd / 2),
        }
        for name, value in defaults.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, value)
        if self.residual_tol > 10.0 ** (8 - nd) * (1 + 1e-12):
            raise ValueError("residual_tol must not exceed 10**(8 - ndigits)")

    def starts(self, s: int) -> int:
        return self.max_starts if self.max_starts is not None else 2000 * s


@dataclass(frozen=True)
class InnerProblem:
    """Match ``y1`` to ``beta`` (exact rationals, lowest degree first)."""

    spec: SchemeSpec
    beta: tuple

    def __post_init__(self):
        beta = tuple(Fraction(b) for b in self.beta)
        object.__setattr__(self, "beta", beta)
        if len(beta) != 4 * self.spec.s + 1:
            raise ValueError(f"inner target needs {4 * self.spec.s + 1} coefficients")
        if beta[-1] <= 0:
            raise ValueError("leading inner coefficient must be positive after sign normalization")

    @classmethod
    def from_polynomial(cls, spec: SchemeSpec, exact_coeffs) -> "InnerProblem":
        sigma = spec.sign
        return cls(spec, tuple(sigma * Fraction(b) for b in exact_coeffs[spec.p :]))

    def beta_mpf(self):
        return [_mpf(b) for b in self.beta]


def _mpf(frac) -> mpmath.mpf:
    frac = Fraction(frac)
    return mp.make_mpf(libmp.from_rational(frac.numerator, frac.denominator, mp.prec, libmp.round_nearest))


def _frac(qq) -> Fraction:
    return Fraction(int(qq.numerator), int(qq.denominator))


# -- residuals and ordering --------------------------------------------------


def inner_residual(variant: int, s: int, inner, beta) -> mpmath.mpf:
    """``max|y_hat - beta| / max|beta|`` at the current precision."""
    beta = [b if isinstance(b, (mpmath.mpf, mpmath.mpc)) else _mpf(b) for b in beta]
    yhat = reconstruct_inner(variant, s, inner)
    num = max(abs(a - b) for a, b in zip(yhat, beta))
    den = max(abs(b) for b in beta)
    return num / den


def _sort_key(cset: CoefficientSet):
    key = []
    for c in cset.inner:
        c = mpmath.mpc(c)
        key.append((round(float(c.real), 10), round(float(c.imag), 10)))
    return (not cset.is_real, key)


def canonical_order(sets):
    """Real sets first, then lexicographic on rounded real/imaginary parts."""
    return sorted(sets, key=_sort_key)


def _dedup(sets, tol):
    out = []
    for cand in sets:
        for kept in out:
            scale = max(1, max(abs(mpmath.mpc(c)) for c in kept.inner))
            if max(abs(mpmath.mpc(a) - mpmath.mpc(b)) for a, b in zip(cand.inner, kept.inner)) <= tol * scale:
                break
        else:
            out.append(cand)
    return out


# -- closed form for s = 2 ----------------------------------------------------


def solve_s2(problem: InnerProblem, cfg: SolverConfig | None = None) -> list[CoefficientSet]:
    """Closed-form sets for the degree-8 inner problem (variant 1).

    With ``c4 = +-sqrt(b8)`` and ``c3 = b7 / (2 c4)`` the remaining unknowns
    follow from a quadratic in ``e2``; when ``b7 = 0`` the system is linear
    in ``e2`` instead. ``b7 = b5 = 0`` has no finite set of solutions here
    and is handed to :func:`solve_general`.
    """
    spec = problem.spec
    if spec.s != 2 or spec.variant != 1:
        raise ValueError("solve_s2 handles s=2, variant 1 only")
    cfg = cfg or SolverConfig()
    exact = problem.beta
    if exact[7] == 0 and exact[5] == 0:
        return solve_general(problem, cfg)

    sets = []
    with working_digits(cfg.ndigits + cfg.guard_digits):
        b = problem.beta_mpf()
        for sgn in (1, -1):
            c4 = sgn * mpmath.sqrt(b[8])
            c3 = b[7] / (2 * c4)
            de2 = (b[6] - c3**2) / c4
            d1 = (b[5] - c3 * de2) / c4
            if exact[7] != 0:
                ratio = c3 / c4
                disc = (d1 - ratio * de2) ** 2 + 4 * ratio * (b[3] + c3**2 / c4 * d1 - ratio * b[4])
                root = mpmath.sqrt(mpmath.mpc(disc)) if disc < 0 else mpmath.sqrt(disc)
                e2s = [(ratio * de2 - d1 + sq) / (2 * ratio) for sq in (root, -root)]
            else:
                d1 = b[5] / c4
                e2s = [b[3] / d1]
            for e2 in e2s:
                d2 = de2 - e2 if exact[7] != 0 else b[6] / c4 - e2
                e0 = (b[4] - c3 * d1 - d2 * e2) / c4
                inner = [c4, c3, d2, d1, e2, e0, b[2], b[1], b[0]]
                sets.append(_finish(spec, inner, problem, cfg))
    return _filter(sets, problem, cfg)


# -- exact elimination ---------------------------------------------------------


@dataclass
class _Reduced:
    """Scaled problem data after the two triangular bands (exact)."""

    gamma: int
    lam: Fraction
    q: list  # q[1..s], q[0] unused
    u: list  # u[1..s]
    c: list  # c[1..s]
    beta: list  # scaled target


def _scale_exponent(beta) -> int:
    s4 = len(beta) - 1
    lo = next((k for k, b in enumerate(beta) if b != 0), s4)
    if lo == s4:
        return 0
    ratio = abs(beta[lo]) / beta[s4]
    log2 = (ratio.numerator.bit_length() - ratio.denominator.bit_length())
    return round(log2 / (s4 - lo))


def _reduce(problem: InnerProblem) -> _Reduced:
    s = problem.spec.s
    beta = list(problem.beta)
    gamma = _scale_exponent(beta)
    lam = beta[4 * s] * Fraction(2) ** (4 * s * gamma)
    sb = [b * Fraction(2) ** (k * gamma) / lam for k, b in enumerate(beta)]

    q = [Fraction(0)] * (s + 1)
    q[s] = Fraction(1)
    for k in range(2 * s - 1, s, -1):
        j = k - s
        acc = sb[2 * s + k]
        for i in range(j + 1, s):
            i2 = k - i
            if j < i2 < s:
                acc -= q[i] * q[i2]
        q[j] = acc / 2

    def qq(jj):
        return sum((q[i] * q[jj - i] for i in range(1, jj) if 1 <= jj - i <= s), Fraction(0))

    u = [Fraction(0)] * (s + 1)
    for j in range(s, 0, -1):
        acc = sb[2 * s + j] - qq(j)
        for l in range(j + 1, s + 1):
            acc -= q[s + j - l] * u[l]
        u[j] = acc  # divided by q_s = 1

    c = [Fraction(0)] * (s + 1)
    for k in range(1, s + 1):
        c[k] = sb[s + k] - sum((q[i] * u[k - i] for i in range(1, k)), Fraction(0))
    return _Reduced(gamma, lam, q, u, c, sb)


class _Rat:
    """``num(z) / w(z)**a`` with ``w = u_s - 2 z``; exact rational coefficients."""

    __slots__ = ("num", "a")
    w = None

    def __init__(self, num, a=0):
        self.num = num
        self.a = a

    def _lift(self, a):
        return self.num * _Rat.w ** (a - self.a)

    def __add__(self, other):
        other = _as_rat(other)
        a = max(self.a, other.a)
        return _Rat(self._lift(a) + other._lift(a), a)

    __radd__ = __add__

    def __neg__(self):
        return _Rat(-self.num, self.a)

    def __sub__(self, other):
        return self + (-_as_rat(other))

    def __rsub__(self, other):
        return _as_rat(other) + (-self)

    def __mul__(self, other):
        other = _as_rat(other)
        return _Rat(self.num * other.num, self.a + other.a)

    __rmul__ = __mul__

    def over_w(self):
        return _Rat(self.num, self.a + 1)


def _as_rat(x):
    if isinstance(x, _Rat):
        return x
    return _Rat(sympy.Poly(sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x, _Z, domain=sympy.QQ))


def _band_polynomial(red: _Reduced, s: int):
    """Univariate polynomial in ``z = e_s`` whose roots give all sets
    (variants 1 and 2), with every spurious ``w`` factor removed."""
    u, c, q = red.u, red.c, red.q
    _Rat.w = sympy.Poly(u[s] - 2 * _Z, _Z, domain=sympy.QQ)
    z = _Rat(sympy.Poly(_Z, _Z, domain=sympy.QQ))
    theta = _as_rat(c[s]) - _as_rat(u[s]) * z + z * z
    e = {s: z}
    for k in range(s - 1, 1, -1):
        rhs = _as_rat(c[k]) - theta * _as_rat(q[k]) - _as_rat(u[k]) * z
        for i in range(k + 1, s):
            j = s + k - i
            if k < j < s:
                rhs = rhs - (_as_rat(u[i]) - e[i]) * e[j]
        e[k] = rhs.over_w()
    final = theta * _as_rat(q[1]) - _as_rat(c[1])
    for j in range(2, s + 1):
        i = s + 1 - j
        left = _as_rat(u[1]) if i == 1 else _as_rat(u[i]) - e[i]
        final = final + left * e[j]
    poly = final.num
    if poly.is_zero:
        return poly
    while True:
        quo, rem = poly.div(_Rat.w)
        if not rem.is_zero:
            break
        poly = quo
    return poly


def _poly_roots(poly, digits):
    """Roots of an exact squarefree rational polynomial, real ones flagged."""
    deg = poly.degree()
    if deg <= 0:
        return []
    n_real = poly.count_roots()
    coeffs = [_frac(cf) for cf in poly.all_coeffs()]
    with mpmath.workdps(digits):
        mcoeffs = [_mpf(cf) for cf in coeffs]
        if deg == 1:
            roots = [-mcoeffs[1] / mcoeffs[0]]
        else:
            roots = None
            for steps, extra in ((100, 2 * digits), (400, 6 * digits), (2000, 12 * digits)):
                try:
                    roots = mpmath.polyroots(mcoeffs, maxsteps=steps, extraprec=extra * 4)
                    break
                except mpmath.libmp.NoConvergence:
                    continue
            if roots is None:
                raise SolverError(f"root finding failed for a degree-{deg} factor")
        roots = [mpmath.mpc(r) for r in roots]
        by_imag = sorted(range(len(roots)), key=lambda i: abs(roots[i].imag) / max(1, abs(roots[i])))
        real_idx = set(by_imag[:n_real])
        out = []
        for i, r in enumerate(roots):
            if i in real_idx:
                out.append((mpmath.mpf(r.real), True))
            else:
                out.append((r, False))
    return out


def _backsub(red: _Reduced, s: int, variant: int, z):
    """Numerical back-substitution from ``z`` to the scaled blocks."""
    u = [_mpf(x) for x in red.u]
    c = [_mpf(x) for x in red.c]
    q = [_mpf(x) for x in red.q]
    w = u[s] - 2 * z
    e = [0] * (s + 1)
    e[s] = z
    if variant in (1, 2):
        theta = c[s] - (u[s] - z) * z
        lo = 2
    else:
        theta = 0
        lo = 1
    for k in range(s - 1, lo - 1, -1):
        rhs = c[k] - theta * q[k] - u[k] * z
        for i in range(k + 1, s):
            j = s + k - i
            if k < j < s:
                rhs -= (u[i] - e[i]) * e[j]
        e[k] = rhs / w
    ell = [0] + [u[i] - e[i] for i in range(1, s + 1)]
    L = ([theta] if variant == 2 else [0]) + ell[1:]
    R = list(e)
    beta = [_mpf(b) for b in red.beta]
    f = []
    for k in range(s + 1):
        f.append(beta[k] - sum(L[i] * R[k - i] for i in range(0, k + 1)))
    return q, ell, e, theta, f, w


def _unscale(red: _Reduced, s: int, variant: int, parts, sign: int):
    q, ell, e, theta, f, _ = parts
    rho = mpmath.sqrt(_mpf(red.lam))
    lam = _mpf(red.lam)
    g = red.gamma

    def sc(k):
        return mpmath.ldexp(1, -k * g)

    Q = [sign * rho * q[i] * sc(s + i) for i in range(1, s + 1)]
    ELL = [sign * rho * ell[i] * sc(i) for i in range(1, s + 1)]
    E = [sign * rho * e[i] * sc(i) for i in range(1, s + 1)]
    TH = sign * rho * theta
    F = [lam * f[i] * sc(i) for i in range(s + 1)]
    if variant == 1:
        blocks = {"q": Q, "d": ELL, "e": E[1:], "e0": TH, "f": F}
    elif variant == 2:
        blocks = {"q": Q, "g": [TH] + ELL, "e": E[1:], "f": F}
    else:
        blocks = {"q": Q, "d": ELL, "e": E, "f": F}
    return join_layout(variant, s, blocks)


def solve_general(problem: InnerProblem, cfg: SolverConfig | None = None) -> list[CoefficientSet]:
    """All solution sets of the inner problem for any ``s >= 2`` and variant."""
    cfg = cfg or SolverConfig()
    spec = problem.spec
    s, variant = spec.s, spec.variant
    red = _reduce(problem)
    digits = cfg.ndigits + cfg.guard_digits

    roots = []  # (z, is_real, multiplicity)
    if variant in (1, 2):
        poly = _band_polynomial(red, s)
        if poly.is_zero:
            log.info("inner system has a family of solutions; taking e_s = 0")
            if s > 2 and red.u[s] == 0:
                return _newton_fallback(problem, cfg)
            roots = [(Fraction(0), True, 0)]
        else:
            _, factors = poly.sqf_list()
            for factor, mult in factors:
                roots += [(z, real, mult) for z, real in _poly_roots(factor, digits)]
    else:
        disc = red.u[s] ** 2 - 4 * red.c[s]
        if disc == 0:
            return _newton_fallback(problem, cfg)
        with mpmath.workdps(digits):
            sq = mpmath.sqrt(_mpf(disc)) if disc > 0 else mpmath.sqrt(mpmath.mpc(_mpf(disc)))
            for sgn in (1, -1):
                roots.append(((_mpf(red.u[s]) + sgn * sq) / 2, disc > 0, 1))

    sets = []
    with working_digits(digits):
        for z, is_real, mult in roots:
            z = _mpf(z) if isinstance(z, Fraction) else z
            parts = _backsub(red, s, variant, z)
            if s > 2 or variant == 3:
                # d_s - e_s equals w in every variant
                w = parts[5]
                if abs(w) <= cfg.tau_eq * max(1, abs(z)):
                    continue
            for sign in (1, -1):
                inner = _unscale(red, s, variant, parts, sign)
                cset = _finish(spec, inner, problem, cfg, real_hint=is_real)
                cset.meta["multiplicity"] = mult
                sets.append(cset)
    sets = _filter(sets, problem, cfg)
    if not sets:
        return _newton_fallback(problem, cfg)
    return sets


def _finish(spec, inner, problem, cfg, real_hint=None) -> CoefficientSet:
    inner = [mpmath.mpc(c) for c in inner]
    scale = max(1, max(abs(c) for c in inner))
    if real_hint is None:
        is_real = all(abs(c.imag) <= cfg.tau_real * max(scale, abs(c)) for c in inner)
    else:
        is_real = bool(real_hint)
    beta = problem.beta_mpf()
    if is_real:
        inner = [mpmath.mpf(c.real) for c in inner]
    residual = inner_residual(spec.variant, spec.s, inner, beta)
    return CoefficientSet(inner=tuple(inner), tail=(), is_real=is_real, variant=spec.variant,
                          residual=residual, meta={})


def _filter(sets, problem, cfg):
    kept = []
    for cset in sets:
        if not mpmath.isfinite(cset.residual) or cset.residual > cfg.residual_tol:
            log.debug("dropping set with residual %s", mpmath.nstr(cset.residual, 5))
            continue
        kept.append(cset)
    with working_digits(cfg.ndigits):
        kept = [_round_set(cs) for cs in kept]
    kept = _dedup(kept, cfg.dedup_tol)
    return canonical_order(kept)


def _round_set(cset):
    # report values at ndigits; +x rounds to the current precision
    return CoefficientSet(inner=tuple(+c for c in cset.inner), tail=cset.tail, is_real=cset.is_real,
                          variant=cset.variant, residual=cset.residual, meta=dict(cset.meta))


# -- multistart Newton fallback ----------------------------------------------


def _newton_fallback(problem: InnerProblem, cfg: SolverConfig) -> list[CoefficientSet]:
    """Damped Newton on all ``4s+1`` unknowns from seeded random starts.

    Used only when the elimination degenerates. Starts run in complex double,
    converged points are polished at extended precision.
    """
    spec = problem.spec
    s, variant = spec.s, spec.variant
    n = 4 * s + 1
    beta = np.array([float(b) for b in problem.beta])
    scale = np.max(np.abs(beta))
    rng = np.random.default_rng(cfg.rng_seed)

    def resid(x):
        return np.array(reconstruct_inner(variant, s, list(x)), dtype=complex) - beta

    def jac(x):
        # residual is quadratic: central differences are exact up to rounding
        J = np.empty((n, n), dtype=complex)
        for j in range(n):
            h = np.zeros(n, dtype=complex)
            h[j] = 1.0
            J[:, j] = (resid(x + h) - resid(x - h)) / 2
        return J

    found = []
    stale, started = 0, 0
    while started < cfg.starts(s) and stale < 5:
        new = 0
        for _ in range(50):
            started += 1
            x = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * math.sqrt(scale)
            for _ in range(100):
                r = resid(x)
                if np.max(np.abs(r)) <= 1e-13 * scale:
                    break
                step = np.linalg.lstsq(jac(x), -r, rcond=None)[0]
                damp = 1.0
                while damp > 1e-4 and np.max(np.abs(resid(x + damp * step))) > np.max(np.abs(r)):
                    damp /= 2
                x = x + damp * step
            else:
                continue
            if all(np.max(np.abs(x - y)) > 1e-8 * max(1, np.max(np.abs(y))) for y in found):
                found.append(x)
                new += 1
        stale = stale + 1 if new == 0 else 0

    sets = []
    with working_digits(cfg.ndigits + cfg.guard_digits):
        beta_m = problem.beta_mpf()
        for x0 in found:
            x = mpmath.matrix([mpmath.mpc(complex(v)) for v in x0])
            for _ in range(8):
                r = mpmath.matrix([a - b for a, b in zip(reconstruct_inner(variant, s, list(x)), beta_m)])
                J = mpmath.matrix(n, n)
                for j in range(n):
                    xp = list(x)
                    xm = list(x)
                    xp[j] += 1
                    xm[j] -= 1
                    col = [(a - b) / 2 for a, b in zip(reconstruct_inner(variant, s, xp), reconstruct_inner(variant, s, xm))]
                    for i in range(n):
                        J[i, j] = col[i]
                try:
                    x = x - mpmath.lu_solve(J, r)
                except ZeroDivisionError:
                    break
            sets.append(_finish(spec, list(x), problem, cfg))
    sets = _filter(sets, problem, cfg)
    if not sets:
        raise SolverError(f"no solution set found for s={s}, variant {variant}")
    return sets


def solve(problem: InnerProblem, cfg: SolverConfig | None = None) -> list[CoefficientSet]:
    """Dispatch to the closed form when it applies, else the general solver."""
    spec = problem.spec
    if spec.s == 2 and spec.variant == 1:
        return solve_s2(problem, cfg)
    return solve_general(problem, cfg)
