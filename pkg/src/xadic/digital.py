"""Digital point sets: generator matrices, points, t-values and admissibility.

Indices follow the usual digital-method conventions: row i of a generator
matrix (1-based) produces the i-th base-p digit of a coordinate, and the
digit vector of n is little-endian, ``n = n_0 + n_1 p + ...``.
"""

from __future__ import annotations

import csv
import enum
import functools
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .algebra import POS_INF, BudgetError, FpMatrix, Poly, mat_rank
from .hankel import hankel_submatrix
from .laurent import HorizonError, LaurentSeries, frac, mul_poly_shift

__all__ = [
    "Kind", "GeneratorMatrix", "unit", "hankel_of", "antidiag", "explicit",
    "NetSpec", "DigitalPoint", "radical_inverse", "int_digits", "digit_array",
    "digital_point", "kronecker_coord", "compositions", "check_net",
    "net_t_value", "sequence_t_check", "pnorm", "first_nonzero_digit",
    "AdmissibilityResult", "admissibility_check", "default_depth",
    "points_csv", "vdck_net",
]


class Kind(enum.Enum):
    UNIT = "I"
    HANKEL = "H"
    ANTIDIAG = "J"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class GeneratorMatrix:
    p: int
    kind: Kind
    theta: LaurentSeries | None = None
    matrix: FpMatrix | None = None

    def materialize(self, rows: int, cols: int) -> FpMatrix:
        """The upper-left ``rows x cols`` block."""
        p = self.p
        if self.kind is Kind.UNIT:
            return FpMatrix(p, np.eye(rows, cols, dtype=np.int64))
        if self.kind is Kind.HANKEL:
            return hankel_submatrix(self.theta, rows, cols)
        if self.kind is Kind.ANTIDIAG:
            a = np.zeros((rows, cols), dtype=np.int64)
            for i in range(min(rows, cols)):
                a[i, cols - 1 - i] = 1
            return FpMatrix(p, a)
        m = self.matrix
        if cols > m.cols:
            raise ValueError(f"explicit matrix has {m.cols} columns, {cols} requested")
        a = np.zeros((rows, cols), dtype=np.int64)
        k = min(rows, m.rows)
        a[:k] = m.data[:k, :cols]
        return FpMatrix(p, a)

    def __repr__(self):
        return f"GeneratorMatrix({self.kind.value}, p={self.p})"


def unit(p: int) -> GeneratorMatrix:
    return GeneratorMatrix(p, Kind.UNIT)


def hankel_of(theta: LaurentSeries) -> GeneratorMatrix:
    return GeneratorMatrix(theta.p, Kind.HANKEL, theta=theta)


def antidiag(p: int) -> GeneratorMatrix:
    return GeneratorMatrix(p, Kind.ANTIDIAG)


def explicit(m: FpMatrix) -> GeneratorMatrix:
    return GeneratorMatrix(m.p, Kind.EXPLICIT, matrix=m)


def default_depth(m: int, D: int) -> int:
    """Digit depth m + D + 8: admissibility needs about m + D + 3 digits."""
    return m + D + 8


@dataclass(frozen=True)
class NetSpec:
    p: int
    m: int
    matrices: tuple[GeneratorMatrix, ...]
    R: int

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))
        if self.R < self.m:
            raise ValueError(f"digit depth R={self.R} must be at least m={self.m}")
        if any(c.p != self.p for c in self.matrices):
            raise ValueError("all generator matrices must share p")

    @property
    def s(self) -> int:
        return len(self.matrices)

    @property
    def size(self) -> int:
        return self.p ** self.m

    def generators(self, rows: int | None = None) -> tuple[FpMatrix, ...]:
        return _materialized(self, self.R if rows is None else rows)


@functools.lru_cache(maxsize=64)
def _materialized(spec: NetSpec, rows: int) -> tuple[FpMatrix, ...]:
    return tuple(c.materialize(rows, spec.m) for c in spec.matrices)


def vdck_net(theta: LaurentSeries, m: int, R: int) -> NetSpec:
    """The three-dimensional net generated by I, H(theta) and J."""
    p = theta.p
    return NetSpec(p, m, (unit(p), hankel_of(theta), antidiag(p)), R)


@dataclass(frozen=True)
class DigitalPoint:
    """A point whose coordinates are given by R base-p digits each."""

    p: int
    digits: tuple[tuple[int, ...], ...]

    @property
    def R(self) -> int:
        return len(self.digits[0]) if self.digits else 0

    @property
    def s(self) -> int:
        return len(self.digits)

    def coord(self, i: int) -> Fraction:
        num = 0
        for y in self.digits[i]:
            num = num * self.p + y
        return Fraction(num, self.p ** len(self.digits[i]))

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(self.coord(i) for i in range(self.s))

    def truncate(self, r: int | Sequence[int]) -> tuple[Fraction, ...]:
        """[x]_r per coordinate: keep the first r digits (r may differ per coordinate)."""
        rs = [r] * self.s if isinstance(r, int) else list(r)
        out = []
        for ds, k in zip(self.digits, rs):
            if k > len(ds):
                raise HorizonError(f"truncation depth {k} exceeds digit depth {len(ds)}")
            num = 0
            for y in ds[:k]:
                num = num * self.p + y
            out.append(Fraction(num, self.p ** k))
        return tuple(out)

    def ominus(self, other: "DigitalPoint") -> "DigitalPoint":
        """Digit-wise subtraction mod p, coordinate by coordinate."""
        return DigitalPoint(self.p, tuple(
            tuple((a - b) % self.p for a, b in zip(x, y)) for x, y in zip(self.digits, other.digits)))


def radical_inverse(b: int, n: int) -> Fraction:
    if b < 2:
        raise ValueError("base must be at least 2")
    if n < 0:
        raise ValueError("n must be nonnegative")
    num, den = 0, 1
    while n:
        n, d = divmod(n, b)
        num = num * b + d
        den *= b
    return Fraction(num, den)


def int_digits(n: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        n, d = divmod(n, p)
        out.append(d)
    return out


def _digit_matrix(ns: np.ndarray, p: int, m: int) -> np.ndarray:
    out = np.empty((ns.size, m), dtype=np.int64)
    rest = ns.astype(object) if ns.dtype == object else ns.copy()
    for j in range(m):
        out[:, j] = rest % p
        rest = rest // p
    return out


def digit_array(spec: NetSpec, ns) -> np.ndarray:
    """Digits of x_n for each n in ``ns``: shape (len(ns), s, R)."""
    ns = np.asarray(ns)
    if ns.size and (ns.min() < 0 or int(ns.max()) >= spec.size):
        raise ValueError(f"indices must lie in [0, {spec.p}^{spec.m})")
    if ns.dtype != object and spec.size >= 2 ** 62:
        ns = ns.astype(object)
    vec = _digit_matrix(ns.reshape(-1), spec.p, spec.m)
    mats = spec.generators()
    return np.stack([(vec @ c.data.T) % spec.p for c in mats], axis=1)


def digital_point(spec: NetSpec, n: int) -> DigitalPoint:
    if not 0 <= n < spec.size:
        raise ValueError(f"n={n} outside [0, {spec.p}^{spec.m})")
    vec = np.array(int_digits(n, spec.p, spec.m), dtype=np.int64)
    digits = tuple(tuple(int(y) for y in c.matvec(vec)) for c in spec.generators())
    return DigitalPoint(spec.p, digits)


def kronecker_coord(theta: LaurentSeries, n: int, R: int) -> Fraction:
    """<theta n(X)> evaluated at X = p, to R base-p digits."""
    if n == 0:
        return Fraction(0)
    npoly = Poly.from_int(theta.p, n)
    if theta.horizon - npoly.deg() < R:
        raise HorizonError(f"need horizon >= {R + npoly.deg()} for n={n}, R={R}")
    return frac(mul_poly_shift(theta, npoly, 0)).evaluate_at_p(R)


def compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative ints summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _stack_rank(mats: Sequence[FpMatrix], ds: Sequence[int]) -> int:
    p = mats[0].p
    block = np.vstack([c.data[:d] for c, d in zip(mats, ds)])
    return mat_rank(FpMatrix(p, block))


def check_net(spec: NetSpec, t: int):
    """Rank condition of a digital (t, m, s)-net.

    Only compositions with d_1 + ... + d_s = m - t are tested; dropping rows
    from a full-row-rank matrix keeps full row rank.  Returns ``(ok, witness)``.
    """
    m = spec.m
    if t >= m:
        return True, None
    mats = spec.generators(m)
    for ds in compositions(m - t, spec.s):
        if _stack_rank(mats, ds) < m - t:
            return False, ds
    return True, None


def net_t_value(spec: NetSpec) -> int:
    """Smallest t for which the net property holds."""
    for t in range(spec.m + 1):
        if check_net(spec, t)[0]:
            return t
    return spec.m


def sequence_t_check(C1: GeneratorMatrix, C2: GeneratorMatrix, m_range: Iterable[int], t: int):
    """Rank condition of a digital (t, 2)-sequence, for each m in ``m_range``.

    Returns ``{m: (ok, witness)}``; ``witness`` is the failing (d1, d2).
    """
    out = {}
    for m in m_range:
        if m <= t:
            out[m] = (True, None)
            continue
        mats = (C1.materialize(m, m), C2.materialize(m, m))
        res = (True, None)
        for ds in compositions(m - t, 2):
            if _stack_rank(mats, ds) < m - t:
                res = (False, ds)
                break
        out[m] = res
    return out


def first_nonzero_digit(digits: np.ndarray) -> np.ndarray:
    """1-based index of the first nonzero digit along the last axis; 0 if none."""
    nz = digits != 0
    idx = nz.argmax(axis=-1) + 1
    idx[~nz.any(axis=-1)] = 0
    return idx


def pnorm(x: DigitalPoint):
    """The exponent l with ||x||_p = p^{-l}, or POS_INF when a coordinate vanishes."""
    l = 0
    for ds in x.digits:
        j = next((k for k, y in enumerate(ds, start=1) if y), None)
        if j is None:
            return POS_INF
        l += j
    return l


def _exponents(digits: np.ndarray) -> np.ndarray:
    """Vectorized pnorm over shape (..., s, R); -1 encodes POS_INF."""
    f = first_nonzero_digit(digits)
    l = f.sum(axis=-1)
    l[(f == 0).any(axis=-1)] = -1
    return l


@dataclass(frozen=True)
class AdmissibilityResult:
    ok: bool
    d: int
    mode: str
    min_norm_exponent: object  # largest l seen (smallest norm), POS_INF if some difference vanishes
    witness: tuple[int, ...] | None = None


def admissibility_check(spec: NetSpec, d: int, mode: str = "zero-shortcut",
                        budget: int = 3 ** 10) -> AdmissibilityResult:
    """Is min ||x_k (-) x_n||_p > p^{-m-d} over distinct points?

    ``zero-shortcut`` only inspects x_n, 0 < n < p^m: differences of points
    of a digital net are again points of the net.  ``exhaustive`` compares
    every pair.  Decisions are exact provided R >= m + d - s.
    """
    N = spec.size
    if N > budget:
        raise BudgetError(f"p^m = {N} exceeds the budget {budget}")
    if spec.R < spec.m + d - spec.s:
        raise ValueError(f"digit depth R={spec.R} too shallow to decide d={d}")
    thresh = spec.m + d
    digits = digit_array(spec, np.arange(N))
    if mode == "zero-shortcut":
        l = _exponents(digits[1:])
        bad = np.flatnonzero((l < 0) | (l >= thresh))
        worst = POS_INF if np.any(l < 0) else int(l.max()) if l.size else 0
        if bad.size:
            return AdmissibilityResult(False, d, mode, worst, (int(bad[0]) + 1,))
        return AdmissibilityResult(True, d, mode, worst)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    worst = 0
    for k in range(N - 1):
        diff = (digits[k] - digits[k + 1:]) % spec.p
        l = _exponents(diff)
        if np.any(l < 0):
            n = k + 1 + int(np.flatnonzero(l < 0)[0])
            return AdmissibilityResult(False, d, mode, POS_INF, (k, n))
        worst = max(worst, int(l.max()))
        bad = np.flatnonzero(l >= thresh)
        if bad.size:
            return AdmissibilityResult(False, d, mode, worst, (k, k + 1 + int(bad[0])))
    return AdmissibilityResult(True, d, mode, worst)


def points_csv(spec: NetSpec, ns: Iterable[int], with_digits: bool = False) -> str:
    """CSV text with columns n, x1, x2[, x3] as exact fractions over p^R."""
    ns = list(ns)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = ["n"] + [f"x{i + 1}" for i in range(spec.s)]
    if with_digits:
        head += [f"digits{i + 1}" for i in range(spec.s)]
    w.writerow(head)
    den = spec.p ** spec.R
    if ns:
        digits = digit_array(spec, np.array(ns, dtype=object))
        weights = [spec.p ** (spec.R - 1 - j) for j in range(spec.R)]
        for n, dg in zip(ns, digits):
            nums = [sum(int(y) * wt for y, wt in zip(row, weights)) for row in dg]
            row = [n] + [f"{num}/{den}" for num in nums]
            if with_digits:
                row += ["".join(str(int(y)) for y in r) for r in dg]
            w.writerow(row)
    return buf.getvalue()
