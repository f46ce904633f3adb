"""Exact arithmetic over the prime field F_p and the polynomial ring F_p[X].

Field elements are plain integers in ``range(p)``; the modulus travels with
the :class:`GF` context object.  Polynomials are immutable coefficient
tuples (constant term first, leading coefficient nonzero, ``()`` for zero).
Matrices are small dense numpy ``int64`` arrays reduced mod p; every entry
stays below ``2**16`` so products fit comfortably in 64 bits.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GF", "Infinity", "NEG_INF", "POS_INF", "Poly", "FpMatrix",
    "SolutionSet", "poly_mul", "poly_divmod", "mat_rank", "solve_affine",
    "is_prime", "FieldMismatch", "BudgetError", "poly_gcd",
]

MAX_P = 2 ** 16


class BudgetError(RuntimeError):
    """The requested computation exceeds a configured size budget."""


class FieldMismatch(ValueError):
    pass


class Infinity(enum.Enum):
    """Signed infinity used for degrees and valuations.

    ``NEG_INF`` is the degree of the zero polynomial; ``POS_INF`` is the
    minimum of an empty index set.  Both compare and add against ints.
    """

    NEG = -1
    POS = 1

    def __repr__(self):
        return "-inf" if self is Infinity.NEG else "+inf"

    __str__ = __repr__

    def _key(self):
        return float("-inf") if self is Infinity.NEG else float("inf")

    def __lt__(self, other):
        return self._key() < _as_key(other)

    def __le__(self, other):
        return self._key() <= _as_key(other)

    def __gt__(self, other):
        return self._key() > _as_key(other)

    def __ge__(self, other):
        return self._key() >= _as_key(other)

    def __add__(self, other):
        if isinstance(other, Infinity) and other is not self:
            raise ArithmeticError("-inf + inf is undefined")
        return self

    __radd__ = __add__

    def __neg__(self):
        return Infinity.POS if self is Infinity.NEG else Infinity.NEG

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other


def _as_key(x):
    return x._key() if isinstance(x, Infinity) else x


NEG_INF = Infinity.NEG
POS_INF = Infinity.POS


@functools.lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class GF:
    """The prime field F_p."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p) or self.p > MAX_P:
            raise ValueError(f"p must be a prime <= 2**16, got {self.p!r}")

    def __call__(self, value: int) -> int:
        return value % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(a, -1, self.p)

    def elements(self):
        return range(self.p)

    def poly(self, coeffs: Iterable[int]) -> "Poly":
        return Poly(self.p, coeffs)

    def monomial(self, k: int, c: int = 1) -> "Poly":
        return Poly(self.p, [0] * k + [c])

    def matrix(self, rows) -> "FpMatrix":
        return FpMatrix.from_rows(self.p, rows)


class Poly:
    """Dense polynomial over F_p, normalized (leading coefficient nonzero)."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable[int] = ()):
        c = [int(a) % p for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls, p: int) -> "Poly":
        return cls(p, ())

    @classmethod
    def one(cls, p: int) -> "Poly":
        return cls(p, (1,))

    @classmethod
    def x(cls, p: int) -> "Poly":
        return cls(p, (0, 1))

    @classmethod
    def from_int(cls, p: int, n: int) -> "Poly":
        """The polynomial n(X) whose coefficients are the base-p digits of n."""
        digits = []
        while n:
            n, d = divmod(n, p)
            digits.append(d)
        return cls(p, digits)

    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.p == other.p and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == Poly(self.p, (other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return f"Poly(p={self.p}, 0)"
        terms = []
        for i, a in reversed(list(enumerate(self.coeffs))):
            if a == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if not mono:
                terms.append(str(a))
            else:
                terms.append(mono if a == 1 else f"{a}{mono}")
        return f"Poly(p={self.p}, {' + '.join(terms)})"

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly):
            return NotImplemented
        if other.p != self.p:
            raise FieldMismatch(f"moduli differ: {self.p} vs {other.p}")

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly(self.p, (other,))
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.p, (self[i] + other[i] for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.p, (-a for a in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = Poly(self.p, (other,))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly(self.p, (a * other for a in self.coeffs))
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __divmod__(self, other):
        return poly_divmod(self, other)

    def __floordiv__(self, other):
        return poly_divmod(self, other)[0]

    def __mod__(self, other):
        return poly_divmod(self, other)[1]

    def shift(self, k: int) -> "Poly":
        """Multiply by X^k (k >= 0)."""
        if not self.coeffs:
            return self
        return Poly(self.p, (0,) * k + self.coeffs)

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self * pow(self.lead(), -1, self.p)

    def evaluate(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc


def poly_mul(a: Poly, b: Poly) -> Poly:
    if a._check(b) is NotImplemented:
        raise TypeError("poly_mul expects two Poly values")
    if not a.coeffs or not b.coeffs:
        return Poly(a.p, ())
    p = a.p
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                out[i + j] += x * y
    return Poly(p, out)


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Euclidean division: ``a = q*b + r`` with ``deg r < deg b``."""
    if a._check(b) is NotImplemented:
        raise TypeError("poly_divmod expects two Poly values")
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    p = a.p
    r = list(a.coeffs)
    db = len(b.coeffs) - 1
    inv = pow(b.coeffs[-1], -1, p)
    if len(r) - 1 < db:
        return Poly(p, ()), a
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] % p
        if c == 0:
            continue
        c = c * inv % p
        q[k - db] = c
        for j, y in enumerate(b.coeffs):
            r[k - db + j] -= c * y
    return Poly(p, q), Poly(p, r[:db])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class FpMatrix:
    """Dense matrix over F_p backed by a read-only ``int64`` array."""

    __slots__ = ("p", "data")

    def __init__(self, p: int, data):
        arr = np.array(data, dtype=np.int64, copy=True)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError("FpMatrix needs a 2-d array")
        arr %= p
        arr.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FpMatrix is immutable")

    @classmethod
    def from_rows(cls, p: int, rows) -> "FpMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(p, np.zeros((0, 0), dtype=np.int64))
        return cls(p, rows)

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def __getitem__(self, idx):
        return self.data[idx]

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.p, self.data.shape, self.data.tobytes()))

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.data.tolist()})"

    def tolist(self):
        return self.data.tolist()

    def vstack(self, *others: "FpMatrix") -> "FpMatrix":
        blocks = [self.data] + [o.data for o in others]
        return FpMatrix(self.p, np.vstack(blocks))

    def matvec(self, v) -> np.ndarray:
        return (self.data @ np.asarray(v, dtype=np.int64)) % self.p


def _row_reduce(a: np.ndarray, p: int, ncols: int | None = None):
    """In-place Gauss-Jordan elimination mod p.

    Pivots are taken as the first nonzero entry in column order, scanning
    rows top to bottom, so the result is deterministic.  Only the first
    ``ncols`` columns are eligible as pivot columns (an augmented column
    is carried along without pivoting).  Returns the pivot column list.
    """
    nrows, total = a.shape
    ncols = total if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return pivots


def mat_rank(m: FpMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    a = m.data.copy()
    return len(_row_reduce(a, m.p))


@dataclass(frozen=True)
class SolutionSet:
    """Solutions of ``A x = b`` over F_p.

    ``particular`` is None exactly when the system is inconsistent;
    otherwise the solution set is ``particular + ker(A)`` and has
    ``p ** nullity`` elements.
    """

    p: int
    particular: tuple[int, ...] | None
    nullity: int
    rank: int
    free_columns: tuple[int, ...] = field(default=())

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def size(self) -> int:
        return self.p ** self.nullity if self.consistent else 0

    @property
    def unique(self) -> bool:
        return self.consistent and self.nullity == 0


def solve_affine(a: FpMatrix, b: Sequence[int]) -> SolutionSet:
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if b.shape[0] != a.rows:
        raise ValueError(f"right-hand side has length {b.shape[0]}, expected {a.rows}")
    p, n = a.p, a.cols
    aug = np.empty((a.rows, n + 1), dtype=np.int64)
    aug[:, :n] = a.data
    aug[:, n] = b % p
    pivots = _row_reduce(aug, p, ncols=n)
    rank = len(pivots)
    free = tuple(c for c in range(n) if c not in set(pivots))
    if rank < a.rows and np.any(aug[rank:, n]):
        return SolutionSet(p, None, n - rank, rank, free)
    x = [0] * n
    for i, c in enumerate(pivots):
        x[c] = int(aug[i, n])
    return SolutionSet(p, tuple(x), n - rank, rank, free)
