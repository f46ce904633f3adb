"""Exact star discrepancy of small point sets in dimension 1 to 3.

Over anchored boxes [0, b) the supremum of |A(b)/N - vol(b)| is only
approached in limits.  Raising b_i down onto a coordinate value gives the
closed count #{x_i <= b_i}; lowering it up onto a value gives the open
count #{x_i < b_i}.  Both are evaluated on the grid of coordinate values
extended by 1.

The fast routine sweeps the first coordinate and keeps cumulative counts of
the rest.  Local values are screened in float64 and the near-maximal
candidates are re-evaluated in exact integer arithmetic, so the returned
value is exact.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import BudgetError
from .digital import NetSpec, digit_array, hankel_of, unit
from .laurent import LaurentSeries

__all__ = [
    "BudgetError", "PointSet", "DiscResult", "local_discrepancy",
    "star_discrepancy_exact", "star_discrepancy_naive", "extend_with_index",
    "vdck_points", "prefix_discrepancies", "ExtensionBound", "extension_bound_check",
    "GrowthTable", "growth_sweep", "EXACT_BUDGET",
]

# largest N per dimension accepted by star_discrepancy_exact
EXACT_BUDGET = {1: 10 ** 6, 2: 20_000, 3: 4_000}
NAIVE_BUDGET = 128
SCREEN_TOL = 1e-9
# default digit depth of generated points, so tables do not depend on their length
POINT_DEPTH = 40


@dataclass(frozen=True)
class PointSet:
    s: int
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        pts = tuple(tuple(Fraction(c) for c in x) for x in self.points)
        object.__setattr__(self, "points", pts)
        if not 1 <= self.s <= 3:
            raise ValueError("dimension must be 1, 2 or 3")
        for x in pts:
            if len(x) != self.s:
                raise ValueError(f"point {x} does not have {self.s} coordinates")
            if not all(0 <= c < 1 for c in x):
                raise ValueError(f"point {x} is not in [0,1)^{self.s}")

    @classmethod
    def of(cls, points) -> "PointSet":
        points = [tuple(x) if isinstance(x, (tuple, list)) else (x,) for x in points]
        if not points:
            raise ValueError("cannot infer the dimension of an empty point list")
        return cls(len(points[0]), tuple(points))

    @property
    def N(self) -> int:
        return len(self.points)

    def project(self, coords: Sequence[int]) -> "PointSet":
        return PointSet(len(coords), tuple(tuple(x[i] for i in coords) for x in self.points))

    def head(self, M: int) -> "PointSet":
        return PointSet(self.s, self.points[:M])


@dataclass(frozen=True)
class DiscResult:
    """``witness`` is the box corner b; ``closed`` says whether the supremum is
    approached from above (count #{x <= b}) or from below (#{x < b})."""

    N: int
    Dstar: Fraction
    witness: tuple[Fraction, ...]
    closed: bool

    @property
    def NDstar(self) -> Fraction:
        return self.N * self.Dstar


def local_discrepancy(P: PointSet, b: Sequence[Fraction], closed: bool) -> Fraction:
    """Signed limit value at corner b: count/N - vol if closed, vol - count/N otherwise."""
    if closed:
        c = sum(all(x[i] <= b[i] for i in range(P.s)) for x in P.points)
    else:
        c = sum(all(x[i] < b[i] for i in range(P.s)) for x in P.points)
    vol = math.prod((Fraction(v) for v in b), start=Fraction(1))
    return Fraction(c, P.N) - vol if closed else vol - Fraction(c, P.N)


def _integer_grid(P: PointSet):
    """Common denominator Q, integer coordinates, and per-axis grids ending in Q."""
    Q = math.lcm(*(c.denominator for x in P.points for c in x)) if P.N else 1
    X = [[c.numerator * (Q // c.denominator) for c in x] for x in P.points]
    grids = [sorted({x[i] for x in X} | {Q}) for i in range(P.s)]
    return Q, X, grids


def _empty_result(P: PointSet) -> DiscResult:
    return DiscResult(0, Fraction(0), tuple(Fraction(0) for _ in range(P.s)), True)


def _shift_down(a: np.ndarray) -> np.ndarray:
    """out[i] = a[i - 1] along every axis, with zeros at index 0."""
    if a.ndim == 0:
        return a
    out = np.zeros_like(a)
    out[tuple(slice(1, None) for _ in range(a.ndim))] = a[tuple(slice(0, -1) for _ in range(a.ndim))]
    return out


def star_discrepancy_exact(P: PointSet) -> DiscResult:
    N, s = P.N, P.s
    if N == 0:
        return _empty_result(P)
    if N > EXACT_BUDGET[s]:
        raise BudgetError(f"N={N} exceeds the exact budget {EXACT_BUDGET[s]} for s={s}")
    Q, X, grids = _integer_grid(P)
    index = [{g: k for k, g in enumerate(gr)} for gr in grids]
    ranks = np.array([[index[i][x[i]] for i in range(s)] for x in X], dtype=np.int64)
    fgrid = [np.array([g / Q for g in gr]) for gr in grids]
    rest_shape = tuple(len(gr) for gr in grids[1:])
    vol_rest = np.ones(rest_shape)
    for axis, f in enumerate(fgrid[1:]):
        shape = [1] * (s - 1)
        shape[axis] = -1
        vol_rest = vol_rest * f.reshape(shape)

    order = np.argsort(ranks[:, 0], kind="stable")
    by_first = ranks[order]
    bounds = np.searchsorted(by_first[:, 0], np.arange(len(grids[0]) + 1))
    hist = np.zeros(rest_shape, dtype=np.int64)
    closed_prev = np.zeros(rest_shape, dtype=np.int64)
    best = -1.0
    cands: list[tuple[float, int, tuple, bool, int]] = []

    for a in range(len(grids[0])):
        new = by_first[bounds[a]:bounds[a + 1], 1:]
        if s == 1:
            hist = hist + len(new)
        elif len(new):
            np.add.at(hist, tuple(new.T), 1)
        closed = hist
        for axis in range(s - 1):
            closed = np.cumsum(closed, axis=axis)
        # open count: first coordinate < g_a (= closed count at a-1), others shifted by one
        open_ = _shift_down(closed_prev)
        vol = fgrid[0][a] * vol_rest
        vc = closed / N - vol
        vo = vol - open_ / N
        row_best = max(float(vc.max()), float(vo.max()))
        if row_best >= best - SCREEN_TOL:
            best = max(best, row_best)
            for vals, counts, is_closed in ((vc, closed, True), (vo, open_, False)):
                for idx in np.argwhere(np.atleast_1d(vals >= best - SCREEN_TOL)):
                    idx = tuple(int(i) for i in idx)[:s - 1]
                    cands.append((float(vals[idx]), a, idx, is_closed, int(counts[idx])))
            if len(cands) > 4096:
                cands = [c for c in cands if c[0] >= best - SCREEN_TOL]
        closed_prev = closed

    top = None
    denom = N * Q ** s
    for val, a, idx, is_closed, count in cands:
        if val < best - SCREEN_TOL:
            continue
        corner = (grids[0][a],) + tuple(grids[i + 1][k] for i, k in enumerate(idx))
        vnum = math.prod(corner)
        exact = count * Q ** s - N * vnum if is_closed else N * vnum - count * Q ** s
        if top is None or exact > top[0]:
            top = (exact, corner, is_closed)
    exact, corner, is_closed = top
    return DiscResult(N, Fraction(max(exact, 0), denom),
                      tuple(Fraction(g, Q) for g in corner), is_closed)


def star_discrepancy_naive(P: PointSet) -> DiscResult:
    """Direct evaluation at every grid corner; an independent cross-check."""
    N, s = P.N, P.s
    if N == 0:
        return _empty_result(P)
    if N > NAIVE_BUDGET:
        raise BudgetError(f"naive discrepancy is limited to N <= {NAIVE_BUDGET}")
    Q, X, grids = _integer_grid(P)
    Qs = Q ** s
    Xa = np.array(X, dtype=object)
    best = None
    for corner in itertools.product(*grids):
        c = np.array(corner, dtype=object)
        closed = int(np.all(Xa <= c, axis=1).sum())
        opened = int(np.all(Xa < c, axis=1).sum())
        vnum = math.prod(corner)
        for val, flag in ((closed * Qs - N * vnum, True), (N * vnum - opened * Qs, False)):
            if best is None or val > best[0]:
                best = (val, corner, flag)
    val, corner, flag = best
    return DiscResult(N, Fraction(max(val, 0), N * Qs), tuple(Fraction(g, Q) for g in corner), flag)


def extend_with_index(P: PointSet, p: int, m: int) -> PointSet:
    """y_n = (x_n, n / p^m) for the first p^m terms of a sequence."""
    N = p ** m
    if P.N != N:
        raise ValueError(f"expected exactly {N} points, got {P.N}")
    return PointSet(P.s + 1, tuple(x + (Fraction(n, N),) for n, x in enumerate(P.points)))


def vdck_points(theta: LaurentSeries, N: int, R: int | None = None) -> PointSet:
    """First N terms of (phi_p(n), <theta n(X)>|_{X=p}), both truncated to R digits."""
    p = theta.p
    m = 0
    while p ** m < N:
        m += 1
    R = max(POINT_DEPTH, m + 16) if R is None else R
    spec = NetSpec(p, max(m, 1), (unit(p), hankel_of(theta)), max(R, m, 1))
    if N == 0:
        return PointSet(2, ())
    digits = digit_array(spec, np.arange(N))
    weights = np.array([p ** (spec.R - 1 - j) for j in range(spec.R)], dtype=object)
    den = p ** spec.R
    nums = digits.astype(object) @ weights
    return PointSet(2, tuple((Fraction(int(a), den), Fraction(int(b), den)) for a, b in nums))


def prefix_discrepancies(P: PointSet) -> list[Fraction]:
    """M * D*_M of the first M points, for M = 1..N."""
    return [star_discrepancy_exact(P.head(M)).NDstar for M in range(1, P.N + 1)]


@dataclass
class ExtensionBound:
    N: int
    lhs: Fraction
    rhs: Fraction
    argmax_M: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def extension_bound_check(P: PointSet, p: int, m: int) -> ExtensionBound:
    """N D*_N(x_n, n/N) against max_{M <= N} M D*_M(x_n) + 1, both exact."""
    if P.s >= 3:
        raise ValueError("the extended set must stay within dimension 3")
    N = p ** m
    prefix = prefix_discrepancies(P.head(N))
    k = max(range(N), key=lambda i: prefix[i])
    lhs = star_discrepancy_exact(extend_with_index(P.head(N), p, m)).NDstar
    return ExtensionBound(N, lhs, prefix[k] + 1, k + 1)


def _lstsq(x: np.ndarray, y: np.ndarray):
    A = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sum((A @ coef - y) ** 2))
    return float(coef[0]), float(coef[1]), resid


@dataclass
class GrowthTable:
    p: int
    rows: list[tuple[int, int, Fraction]] = field(default_factory=list)  # (k, N, Dstar)

    @property
    def fits(self) -> dict:
        """Approximate least-squares fits of N D*_N = a L + b against L = log^2 N and L = log N."""
        if len(self.rows) < 2:
            return {}
        logs = np.array([math.log(N) for _, N, _ in self.rows])
        y = np.array([float(N * D) for _, N, D in self.rows])
        a2, b2, r2 = _lstsq(logs ** 2, y)
        a1, b1, r1 = _lstsq(logs, y)
        return {"log2_coef": a2, "log2_intercept": b2, "log2_residual": r2,
                "log_coef": a1, "log_intercept": b1, "log_residual": r1}

    @property
    def log2_fit_better(self) -> bool:
        f = self.fits
        return bool(f) and f["log2_coef"] >= 0 and f["log2_residual"] < f["log_residual"]

    @property
    def nondecreasing(self) -> bool:
        vals = [N * D for _, N, D in self.rows]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "N", "Dstar_num", "Dstar_den", "NDstar"])
        for k, N, D in self.rows:
            nd = N * D
            w.writerow([k, N, D.numerator, D.denominator, f"{nd.numerator}/{nd.denominator}"])
        return buf.getvalue()

    def fit_summary(self) -> str:
        lines = ["note: empirical illustration only; fit coefficients are floating point"]
        lines += [f"{k}: {v:.12g}" for k, v in self.fits.items()]
        lines.append(f"log2_fit_better: {self.log2_fit_better}")
        lines.append(f"NDstar_nondecreasing: {self.nondecreasing}")
        return "\n".join(lines) + "\n"


def growth_sweep(theta: LaurentSeries, k_max: int, k_min: int = 1, R: int | None = None) -> GrowthTable:
    """Exact N D*_N of the first N = p^k points of the two-dimensional sequence."""
    p = theta.p
    if p ** k_max > EXACT_BUDGET[2]:
        raise BudgetError(f"N = {p}^{k_max} exceeds the exact budget {EXACT_BUDGET[2]}")
    P = vdck_points(theta, p ** k_max, R)
    table = GrowthTable(p)
    for k in range(k_min, k_max + 1):
        N = p ** k
        table.rows.append((k, N, star_discrepancy_exact(P.head(N)).Dstar))
    return table
