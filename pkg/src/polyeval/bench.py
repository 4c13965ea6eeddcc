"""Accuracy sweeps and the geometric-series comparison against PS and Westreich."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .apps import exp_taylor_coeffs, geometric_coeffs, westreich_eval
from .extprec import DOUBLE
from .matrixeval import evaluate_scheme, norm1
from .pipeline import generate
from .psm import ps_eval

__all__ = ["BenchRow", "SweepRow", "bench_geometric", "compare_geometric", "max_workers", "rel_diff", "sweep_exp"]


def max_workers() -> int:
    """Worker cap from ``POLYEVAL_THREADS`` (default: CPU count)."""
    env = os.environ.get("POLYEVAL_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def rel_diff(X, Y) -> float:
    """``||X - Y||_1 / ||Y||_1``, or the absolute difference when ``Y == 0``."""
    den = norm1(Y)
    num = norm1(X - Y)
    return num / den if den != 0 else num


@dataclass
class SweepRow:
    m: int
    s: int
    p: int
    savings: int
    n_real: int
    er_min: float
    warning: bool


def _sweep_one(m: int) -> SweepRow:
    r = generate(exp_taylor_coeffs(m))
    return SweepRow(m, r.s, r.p, r.savings, r.n_real, r.er_min, r.warning)


def sweep_exp(degrees, workers: int | None = None) -> list[SweepRow]:
    """Generate exp-Taylor coefficients for each degree; rows keep input order."""
    degrees = [m for m in degrees if m >= 8 and m not in (9, 11)]
    if not degrees:
        raise ValueError("range contains no degree with a one-product saving")
    workers = workers or max_workers()
    if workers == 1 or len(degrees) == 1:
        return [_sweep_one(m) for m in degrees]
    with ProcessPoolExecutor(max_workers=min(workers, len(degrees))) as pool:
        return list(pool.map(_sweep_one, degrees))


@dataclass
class BenchRow:
    n: int
    scheme_vs_ps: float
    scheme_vs_w: float
    w_vs_ps: float


def compare_geometric(A, report, N: int = 17):
    """Relative differences (in units of u) between the generated scheme,
    PS and the Westreich formula for the geometric series ``Psi(N, A)``."""
    u = DOUBLE.u
    Z = evaluate_scheme(A, report.spec, [np.float64(c) for c in report.c_prec],
                        [np.float64(a) for a in report.tail_prec]).value
    b = [1.0] * N
    P = ps_eval(A, b, 4 if N == 17 else None).value
    W = westreich_eval(A, N).value
    return rel_diff(Z, P) / u, rel_diff(Z, W) / u, rel_diff(W, P) / u


def bench_geometric(sizes, trials: int, seed: int = 0, report=None, matrices=None) -> list[BenchRow]:
    """Maximum pairwise differences over seeded uniform(0,1) trials per size.

    ``matrices`` may supply ``callable(n, rng) -> A`` to override the draw.
    """
    if report is None:
        report = generate(geometric_coeffs(17))
    rows = []
    for n in sizes:
        if n < 2:
            raise ValueError("matrix size must be >= 2")
        rng = np.random.default_rng(seed)
        worst = [0.0, 0.0, 0.0]
        for _ in range(trials):
            A = matrices(n, rng) if matrices is not None else rng.random((n, n))
            diffs = compare_geometric(A, report)
            worst = [max(w, d) for w, d in zip(worst, diffs)]
        rows.append(BenchRow(n, *worst))
    return rows


def fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.6g}"
