"""Hankel matrices of Laurent series, regularity, and deficiency scans."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .algebra import NEG_INF, FpMatrix, mat_rank
from .laurent import HorizonError, LaurentSeries, continued_fraction, shift_frac

__all__ = [
    "hankel_submatrix", "regular_sizes", "DeficiencyReport", "deficiency_scan",
    "brute_inf", "brute_inf_search", "monic_polys",
]


def hankel_submatrix(theta: LaurentSeries, rows: int, cols: int, offset: int = 0) -> FpMatrix:
    """Upper-left block of H(<X^offset theta>): entry (i, l) = a_{i+l+offset}, i >= 1, l >= 0."""
    need = rows + cols - 1 + offset
    if rows and cols and need > theta.horizon:
        raise HorizonError(f"{rows}x{cols} Hankel block needs a_{need}, horizon is {theta.horizon}")
    if rows == 0 or cols == 0:
        return FpMatrix.zeros(theta.p, rows, cols)
    a = theta.window(1 + offset, need)
    idx = np.arange(rows)[:, None] + np.arange(cols)[None, :]
    return FpMatrix(theta.p, a[idx])


def regular_sizes(theta: LaurentSeries, m_max: int) -> set[int]:
    """All m <= m_max whose upper-left m x m Hankel block is nonsingular."""
    if 2 * m_max - 1 > theta.horizon:
        raise HorizonError(f"m_max={m_max} needs horizon >= {2 * m_max - 1}")
    big = hankel_submatrix(theta, m_max, m_max)
    out = set()
    for m in range(1, m_max + 1):
        if mat_rank(FpMatrix(theta.p, big.data[:m, :m])) == m:
            out.add(m)
    return out


@dataclass
class DeficiencyReport:
    """Result of scanning partial-quotient degrees of <X^r theta>, r <= r_max.

    ``D_hat`` is max certified degree minus one: a verified statement about
    the scanned shifts only, never a claim about every r.
    """

    D_hat: int
    max_degree: int
    scanned_r: int
    r_max: int
    horizon: int
    witnesses: list[tuple[int, int, int]]
    degree_histogram: dict[int, int]
    quotients_checked: int
    max_exhaustion_bound: int
    collapsed_at: int | None = None
    bound: int | None = None
    violations: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """No rational collapse and, if a bound was given, no certified degree above it."""
        return self.collapsed_at is None and not self.violations

    def as_dict(self) -> dict:
        return {
            "D_hat": self.D_hat,
            "max_certified_degree": self.max_degree,
            "scanned_r": self.scanned_r,
            "r_max": self.r_max,
            "horizon": self.horizon,
            "quotients_checked": self.quotients_checked,
            "degree_histogram": " ".join(f"{k}:{v}" for k, v in sorted(self.degree_histogram.items())),
            "max_exhaustion_lower_bound": self.max_exhaustion_bound,
            "degree_bound": "none" if self.bound is None else self.bound,
            "violations": len(self.violations),
            "rational_collapse_at_r": "none" if self.collapsed_at is None else self.collapsed_at,
            "witnesses": " ".join(f"(r={r},h={h},deg={g})" for r, h, g in self.witnesses[:20]),
            "witness_count": len(self.witnesses),
            "scope": f"verified for 0 <= r <= {self.scanned_r} only",
            "status": "PASS" if self.passed else "FAIL",
        }

    def to_text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.as_dict().items())


def _scan_one(theta: LaurentSeries, r: int, max_quotients):
    return continued_fraction(shift_frac(theta, r), max_quotients)


def deficiency_scan(theta: LaurentSeries, r_max: int, max_quotients: int | None = None,
                    bound: int | None = None, workers: int = 1) -> DeficiencyReport:
    """Partial-quotient degrees of <X^r theta> for 0 <= r <= r_max.

    ``bound`` (optional) is a claimed maximum degree; certified degrees above
    it are recorded as violations.  A shift whose expansion exhausts the
    horizon with d_h < K/4 is treated as a rational collapse and ends the scan.
    """
    if theta.is_zero():
        raise ValueError("theta must be nonzero")
    rs = range(r_max + 1)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as ex:
            cfs = list(ex.map(lambda r: _scan_one(theta, r, max_quotients), rs))
    else:
        cfs = (_scan_one(theta, r, max_quotients) for r in rs)
    hist: Counter = Counter()
    max_deg, witnesses, violations = 0, [], []
    checked, exhaust, collapsed, scanned = 0, 0, None, -1
    for r, cf in zip(rs, cfs):
        scanned = r
        for h, g in enumerate(cf.quotient_degrees, start=1):
            hist[g] += 1
            checked += 1
            if g > max_deg:
                max_deg, witnesses = g, []
            if g == max_deg:
                witnesses.append((r, h, g))
            if bound is not None and g > bound:
                violations.append((r, h, g))
        if cf.next_degree_lower_bound is not None:
            exhaust = max(exhaust, cf.next_degree_lower_bound)
        if cf.rational_collapse:
            collapsed = r
            break
    return DeficiencyReport(
        D_hat=max(max_deg - 1, 0), max_degree=max_deg, scanned_r=scanned, r_max=r_max,
        horizon=theta.horizon, witnesses=witnesses, degree_histogram=dict(hist),
        quotients_checked=checked, max_exhaustion_bound=exhaust, collapsed_at=collapsed,
        bound=bound, violations=violations)


def monic_polys(p: int, d: int) -> np.ndarray:
    """All monic polynomials of degree d as rows (q_0, ..., q_{d-1}, 1)."""
    if d == 0:
        return np.ones((1, 1), dtype=np.int64)
    low = np.array(list(itertools.product(range(p), repeat=d)), dtype=np.int64)[:, ::-1]
    return np.hstack([low, np.ones((low.shape[0], 1), dtype=np.int64)])


def _first_nonzero(mat: np.ndarray) -> np.ndarray:
    """Column index of the first nonzero per row, -1 if the row is zero."""
    nz = mat != 0
    idx = nz.argmax(axis=1)
    idx[~nz.any(axis=1)] = -1
    return idx


def brute_inf_search(theta: LaurentSeries, r_max: int, degQ_max: int, margin: int = 8,
                     chunk: int = 1 << 16):
    """Exhaustive minimum of deg Q + deg <X^r Q theta>.

    Returns ``(exponent, r, Q)`` where exponent is the base-2 logarithm of
    the smallest |Q| * ||X^r Q theta|| found, or NEG_INF when some product
    vanishes on every known coefficient.  Only monic Q are visited: scaling Q
    by a unit of F_p changes neither |Q| nor the degree of the product.
    """
    p, K = theta.p, theta.horizon
    if K < r_max + 2 * degQ_max + margin:
        raise HorizonError(
            f"horizon {K} too small for r_max={r_max}, degQ_max={degQ_max} (margin {margin})")
    best = (None, None, None)
    for d in range(degQ_max + 1):
        Qs = monic_polys(p, d)
        for r in range(r_max + 1):
            top = K - r - d  # largest index i with a certified coefficient of X^r Q theta
            B = min(top, d + 6)
            # coefficient of X^{-i} in X^r Q theta is sum_k q_k a_{i+r+k}
            a = theta.window(1 + r, B + r + d)
            H = a[np.arange(d + 1)[:, None] + np.arange(B)[None, :]].astype(np.float64)
            for s in range(0, Qs.shape[0], chunk):
                block = Qs[s:s + chunk]
                prod = np.fmod(block.astype(np.float64) @ H, p)
                first = _first_nonzero(prod)
                unresolved = np.flatnonzero(first < 0)
                if unresolved.size:
                    a2 = theta.window(1 + r, top + r + d)
                    H2 = a2[np.arange(d + 1)[:, None] + np.arange(top)[None, :]]
                    full = (block[unresolved] @ H2) % p
                    f2 = _first_nonzero(full)
                    if np.any(f2 < 0):
                        q = block[unresolved[int(np.flatnonzero(f2 < 0)[0])]]
                        return NEG_INF, r, tuple(int(x) for x in q)
                    first[unresolved] = f2
                k = int(first.argmax())
                e = d - (int(first[k]) + 1)
                if best[0] is None or e < best[0]:
                    best = (e, r, tuple(int(x) for x in block[k]))
    return best


def brute_inf(theta: LaurentSeries, r_max: int, degQ_max: int, margin: int = 8):
    return brute_inf_search(theta, r_max, degQ_max, margin)[0]
