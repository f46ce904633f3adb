"""Exact N D*_N for the first 3^k points of the two-dimensional sequence.

The values are exact rationals; the log N and log^2 N fits are a rough
illustration only, since the lower bound is asymptotic.
"""
import sys

from xadic.discrepancy import growth_sweep
from xadic.laurent import paperfolding_theta

k_max = int(sys.argv[1]) if len(sys.argv) > 1 else 7
table = growth_sweep(paperfolding_theta(4096), k_max)
for k, N, D in table.rows:
    print(f"k={k:2d} N={N:5d} N*D* = {float(N * D):8.4f}  ({N * D})")
print(table.fit_summary())
