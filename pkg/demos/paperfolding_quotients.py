"""Partial-quotient degrees of the shifted paperfolding series.

Expands <X^r theta> for a range of shifts and prints the degree histogram of
every certified partial quotient, then a brute-force search over monic Q.
"""
import sys

from xadic.hankel import brute_inf, deficiency_scan
from xadic.laurent import continued_fraction, paperfolding_theta

r_max = int(sys.argv[1]) if len(sys.argv) > 1 else 64

theta = paperfolding_theta(4096)
print("first coefficients:", "".join(str(theta.coef(i)) for i in range(1, 41)))

cf = continued_fraction(theta)
print("degrees of the first 20 quotients:", [q.degree for q in cf.quotients[:20]])

rep = deficiency_scan(theta, r_max)
print(rep.to_text())

# the inf over Q of |Q|^2 |<X^r Q theta>| is X^-(largest quotient degree)
print("brute_inf(r <= 16, deg Q <= 8) =", brute_inf(theta, 16, 8))
