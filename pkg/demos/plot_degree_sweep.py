"""
Stability across degrees
========================

Sweep the exp Taylor degree and record the best reconstruction error found
for each. Degrees 9 and 11 are skipped since no block size saves a product.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from polyeval.bench import sweep_exp
from polyeval.extprec import DOUBLE

rows = sweep_exp(range(8, 41))
for r in rows:
    print(f"m={r.m:2d} s={r.s} p={r.p:2d} real={r.n_real:2d} er_min={r.er_min:.3g}")

fig, ax = plt.subplots()
ax.semilogy([r.m for r in rows], [r.er_min for r in rows], "o-", label="er_min")
ax.axhline(10 * DOUBLE.u, color="r", ls="--", label="10u")
ax.axhline(DOUBLE.u, color="k", ls=":", label="u")
ax.set_xlabel("degree m")
ax.legend()
fig.savefig("degree_sweep.png", dpi=120)
