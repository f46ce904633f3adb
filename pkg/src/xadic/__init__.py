"""Exact arithmetic for digital point sets built from Laurent series over F_p.

Submodules: ``algebra`` (F_p, polynomials, matrices), ``laurent`` (truncated
Laurent series and continued fractions), ``hankel`` (Hankel regularity and
deficiency scans), ``digital`` (nets, t-values, admissibility), ``boxcount``
(exact box counts via affine systems), ``discrepancy`` (exact star
discrepancy) and ``cli``.
"""

from .algebra import GF, NEG_INF, POS_INF, FpMatrix, Poly, mat_rank, solve_affine
from .boxcount import (FalsificationError, build_gamma, choose_u, count_in_interval, deficit,
                       enumerate_intervals, solve_nbar)
from .digital import (NetSpec, admissibility_check, digital_point, hankel_of, net_t_value,
                      radical_inverse, sequence_t_check, unit, vdck_net)
from .discrepancy import PointSet, growth_sweep, star_discrepancy_exact, vdck_points
from .hankel import brute_inf, deficiency_scan, hankel_submatrix, regular_sizes
from .laurent import (HorizonError, LaurentSeries, continued_fraction, convergents,
                      from_rational, paperfolding_theta)

__version__ = "0.1.0"

__all__ = [
    "GF", "NEG_INF", "POS_INF", "FpMatrix", "Poly", "mat_rank", "solve_affine",
    "FalsificationError", "build_gamma", "choose_u", "count_in_interval", "deficit",
    "enumerate_intervals", "solve_nbar",
    "NetSpec", "admissibility_check", "digital_point", "hankel_of", "net_t_value",
    "radical_inverse", "sequence_t_check", "unit", "vdck_net",
    "PointSet", "growth_sweep", "star_discrepancy_exact", "vdck_points",
    "brute_inf", "deficiency_scan", "hankel_submatrix", "regular_sizes",
    "HorizonError", "LaurentSeries", "continued_fraction", "convergents",
    "from_rational", "paperfolding_theta",
]
