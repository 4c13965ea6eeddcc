"""
Taylor polynomial of the exponential
====================================

Generate coefficients for the degree-28 Taylor polynomial of ``exp`` that
use one matrix product fewer than Paterson-Stockmeyer, then compare the
default block size with an unstable one.
"""

import mpmath
import numpy as np
from scipy.linalg import expm

from polyeval import exp_taylor_coeffs, generate, ps_eval, scalar_probe
from polyeval.matrixeval import evaluate_scheme, norm1

b = exp_taylor_coeffs(28)
report = generate(b)
print(f"s={report.s} p={report.p} savings={report.savings} products={report.spec.cost}")
print(report.message)

# %%
# The scalar value at x = 1 should be e up to a fraction of u.
with mpmath.workdps(60):
    print("relative error at x=1:", mpmath.nstr(scalar_probe(report, 1, mpmath.e), 3))

# %%
# Forcing s = 7 still saves a product, but every real set loses accuracy
# once rounded to double.
bad = generate(b, s=7)
print(f"s=7: er_min={bad.er_min:.3g} warning={bad.warning}")

# %%
# On a matrix with small norm the scheme matches the exponential.
rng = np.random.default_rng(0)
A = rng.standard_normal((50, 50))
A *= 0.5 / norm1(A)
Z = evaluate_scheme(A, report.spec, report.c_prec, report.tail_prec)
P = ps_eval(A, [float(c) for c in b])
E = expm(A)
print("products: scheme", Z.product_count, "PS", P.product_count)
print("rel. diff vs expm:", norm1(Z.value - E) / norm1(E))
