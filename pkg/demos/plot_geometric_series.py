"""
Geometric series against Westreich's factorization
==================================================

``I + A + ... + A**16`` costs six products with PS and with Westreich's
factored formula. The generated scheme needs five.
"""

import numpy as np

from polyeval import generate, geometric_coeffs, westreich_eval
from polyeval.bench import compare_geometric
from polyeval.matrixeval import evaluate_scheme

report = generate(geometric_coeffs(17))
print(f"{len(report.sets)} sets, {report.n_real} real, er_min={report.er_min:.3g}")

# %%
# Product counts on the identity, where the answer is 17 I.
eye = np.eye(3)
Z = evaluate_scheme(eye, report.spec, report.c_prec, report.tail_prec)
W = westreich_eval(eye, 17)
print("scheme:", Z.product_count, "Westreich:", W.product_count, "value:", Z.value[0, 0])

# %%
# Pairwise relative differences in units of u on a few random matrices.
rng = np.random.default_rng(1)
for trial in range(3):
    A = rng.random((100, 100))
    zp, zw, wp = compare_geometric(A, report)
    print(f"trial {trial}: scheme/PS {zp:.2f}u  scheme/W {zw:.2f}u  W/PS {wp:.2f}u")
