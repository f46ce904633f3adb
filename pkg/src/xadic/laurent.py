"""Truncated formal Laurent series in X^{-1} over F_p.

A series ``sum_{i >= j} a_i X^{-i}`` is stored by its tight start index
``j`` (so ``deg = -j``), the coefficients ``a_j .. a_K`` and the horizon
``K``, the largest index whose coefficient is known.  Operations compute
the horizon of their result and never invent coefficients past it.

Continued fractions are computed by running the polynomial Euclidean
algorithm on the truncation ``N(X) / X^K``.  Two certificates are attached
to each partial quotient A_{h+1}:

* its *degree* is certain once ``d_h + d_{h+1} <= K`` (the first nonzero
  coefficient of <Q_h theta> lies inside the horizon);
* the *polynomial itself* is certain once ``2 d_{h+1} <= K`` (both
  convergents h and h+1 are then convergents of the truncation as well).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import GF, NEG_INF, Poly

__all__ = [
    "HorizonError", "LaurentSeries", "Quotient", "CFExpansion", "Convergent",
    "from_rational", "paperfolding", "paperfolding_theta", "frac",
    "mul_poly_shift", "shift_frac", "continued_fraction", "convergents",
    "DEFAULT_HORIZON", "PAPERFOLDING_HORIZON",
]

DEFAULT_HORIZON = 256
PAPERFOLDING_HORIZON = 4096


class HorizonError(ValueError):
    """Requested coefficient lies beyond the known precision of a series."""


class LaurentSeries:
    __slots__ = ("p", "start", "coeffs", "horizon")

    def __init__(self, p: int, start: int, coeffs, horizon: int | None = None):
        GF(p)
        arr = np.asarray(coeffs, dtype=np.int64).reshape(-1) % p
        if horizon is None:
            horizon = start + arr.size - 1
        if start + arr.size - 1 > horizon:
            arr = arr[: max(0, horizon - start + 1)]
        if arr.size < horizon - start + 1:
            arr = np.concatenate([arr, np.zeros(horizon - start + 1 - arr.size, np.int64)])
        nz = np.flatnonzero(arr)
        if nz.size == 0:
            start, arr = horizon + 1, np.zeros(0, np.int64)
        else:
            start += int(nz[0])
            arr = arr[int(nz[0]):]
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "start", int(start))
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "horizon", int(horizon))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    @classmethod
    def zero(cls, p: int, horizon: int) -> "LaurentSeries":
        return cls(p, horizon + 1, (), horizon)

    @classmethod
    def from_poly(cls, poly: Poly, horizon: int) -> "LaurentSeries":
        """The polynomial as a series (coefficient of X^k sits at index -k)."""
        if poly.is_zero():
            return cls.zero(poly.p, horizon)
        d = poly.deg()
        return cls(poly.p, -d, list(reversed(poly.coeffs)), horizon)

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return self.coeffs.size == 0

    def coef(self, i: int) -> int:
        if i > self.horizon:
            raise HorizonError(f"coefficient {i} beyond horizon {self.horizon}")
        if i < self.start:
            return 0
        return int(self.coeffs[i - self.start])

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients a_lo .. a_hi as an int64 array."""
        if hi > self.horizon:
            raise HorizonError(f"coefficient {hi} beyond horizon {self.horizon}")
        out = np.zeros(max(0, hi - lo + 1), dtype=np.int64)
        a, b = max(lo, self.start), hi
        if a <= b:
            out[a - lo: b - lo + 1] = self.coeffs[a - self.start: b - self.start + 1]
        return out

    def deg(self):
        return NEG_INF if self.is_zero() else -self.start

    def abs_exponent(self):
        """log2 |theta|."""
        return self.deg()

    def norm_exponent(self):
        """log2 ||theta||, the distance to the nearest polynomial."""
        return frac(self).deg()

    def polynomial_part(self) -> Poly:
        if self.horizon < 0 and self.start <= 0:
            raise HorizonError("polynomial part not determined within horizon")
        if self.start > 0:
            return Poly(self.p, ())
        return Poly(self.p, [self.coef(-k) for k in range(0, -self.start + 1)])

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.p, self.start, self.horizon) == (other.p, other.start, other.horizon) \
            and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.start, self.horizon, self.coeffs.tobytes()))

    def __repr__(self):
        head = " ".join(str(int(a)) for a in self.coeffs[:12])
        more = " ..." if self.coeffs.size > 12 else ""
        return f"LaurentSeries(p={self.p}, start={self.start}, K={self.horizon}: {head}{more})"

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        if other.p != self.p:
            raise ValueError("moduli differ")
        k = min(self.horizon, other.horizon)
        lo = min(self.start, other.start, k + 1)
        a = self.window(lo, k) - other.window(lo, k)
        return LaurentSeries(self.p, lo, a, k)

    def truncate(self, horizon: int) -> "LaurentSeries":
        if horizon > self.horizon:
            raise HorizonError("cannot extend the horizon of a series")
        return LaurentSeries(self.p, self.start, self.coeffs, horizon)

    def evaluate_at_p(self, digits: int | None = None) -> Fraction:
        """<theta>|_p truncated to ``digits`` base-p digits (default: horizon)."""
        r = self.horizon if digits is None else digits
        if r > self.horizon:
            raise HorizonError(f"need {r} digits, horizon is {self.horizon}")
        num = 0
        for a in self.window(1, r):
            num = num * self.p + int(a)
        return Fraction(num, self.p ** r)

    def to_text(self) -> str:
        """Serialize as ``p j a_j a_{j+1} ... a_K``."""
        if self.is_zero():
            return f"{self.p} {self.horizon + 1}"
        body = " ".join(str(int(a)) for a in self.coeffs)
        return f"{self.p} {self.start} {body}"

    @classmethod
    def from_text(cls, text: str) -> "LaurentSeries":
        parts = text.split()
        if len(parts) < 2:
            raise ValueError("series text needs at least 'p j'")
        p, j = int(parts[0]), int(parts[1])
        digits = [int(t) for t in parts[2:]]
        if any(not 0 <= d < p for d in digits):
            raise ValueError(f"coefficients must be digits in [0, {p})")
        return cls(p, j, digits, j + len(digits) - 1)


def from_rational(P: Poly, Q: Poly, horizon: int) -> LaurentSeries:
    """Laurent expansion of P/Q, exact through index ``horizon``."""
    if Q.is_zero():
        raise ZeroDivisionError("denominator is the zero polynomial")
    if P.p != Q.p:
        raise ValueError("moduli differ")
    p = P.p
    if P.is_zero():
        return LaurentSeries.zero(p, horizon)
    A, R = divmod(P, Q)
    n = Q.deg()
    inv = pow(Q.lead(), -1, p)
    start = -A.deg() if not A.is_zero() else 1
    coeffs = [A[-i] for i in range(start, 1)]
    # X * R_{i-1} = c_i Q + R_i with c_i a constant
    r = list(R.coeffs) + [0] * (n - len(R.coeffs))
    q = Q.coeffs
    for _ in range(max(0, horizon)):
        r = [0] + r  # multiply by X; r has length n + 1 now
        c = r[n] * inv % p
        if c:
            r = [(x - c * y) % p for x, y in zip(r, q)]
        coeffs.append(c)
        r = r[:n]
    return LaurentSeries(p, start, coeffs, horizon)


def paperfolding(n: int) -> int:
    """The regular paperfolding sequence in {0, 1}, indexed from 1."""
    if n < 1:
        raise ValueError("paperfolding is indexed from n = 1")
    k = n >> ((n & -n).bit_length() - 1)
    return 0 if k % 4 == 1 else 1


def paperfolding_theta(horizon: int = PAPERFOLDING_HORIZON) -> LaurentSeries:
    """theta = sum_{i>=1} f_i X^{-i} over F_3 with f the paperfolding sequence."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    n = np.arange(1, horizon + 1, dtype=np.int64)
    odd = n // (n & -n)
    f = np.where(odd % 4 == 1, 0, 1)
    return LaurentSeries(3, 1, f, horizon)


def frac(theta: LaurentSeries) -> LaurentSeries:
    """Fractional part <theta>: drop every term with index <= 0."""
    if theta.start >= 1:
        return theta
    if theta.horizon < 1:
        return LaurentSeries.zero(theta.p, theta.horizon)
    return LaurentSeries(theta.p, 1, theta.window(1, theta.horizon), theta.horizon)


def mul_poly_shift(theta: LaurentSeries, Q: Poly, r: int = 0) -> LaurentSeries:
    """X^r * Q * theta, with horizon ``K - r - deg Q``."""
    if Q.p != theta.p:
        raise ValueError("moduli differ")
    if r < 0:
        raise ValueError("shift must be nonnegative")
    dq = 0 if Q.is_zero() else Q.deg()
    new_h = theta.horizon - r - dq
    if new_h < 0:
        raise HorizonError(
            f"X^{r}*Q*theta keeps no certified coefficient at or below X^0 (horizon {new_h})")
    if Q.is_zero() or theta.is_zero():
        return LaurentSeries.zero(theta.p, new_h)
    a = theta.coeffs
    qrev = np.array(Q.coeffs[::-1], dtype=np.int64)
    c = np.convolve(a, qrev)[: a.size] % theta.p
    return LaurentSeries(theta.p, theta.start - r - dq, c, new_h)


def shift_frac(theta: LaurentSeries, r: int) -> LaurentSeries:
    """<X^r theta> = sum_{i>=1} a_{i+r} X^{-i}."""
    k = theta.horizon - r
    if k < 1:
        raise HorizonError(f"<X^{r} theta> has no known coefficient (horizon {theta.horizon})")
    return LaurentSeries(theta.p, 1, theta.window(1 + r, theta.horizon), k)


@dataclass(frozen=True)
class Quotient:
    poly: Poly
    certified: bool
    degree_certified: bool = True

    @property
    def degree(self) -> int:
        return self.poly.deg()


@dataclass(frozen=True)
class CFExpansion:
    """Continued fraction [A0; A1, A2, ...] of a truncated series.

    ``quotients`` lists every partial quotient whose degree is certain;
    those flagged ``certified`` (a prefix) are exact polynomials.
    ``stop`` is ``"max_quotients"`` or ``"horizon"``; in the latter case
    <Q_h theta> vanishes on every known coefficient and the next partial
    quotient has degree at least ``next_degree_lower_bound``.
    """

    p: int
    A0: Poly
    quotients: tuple[Quotient, ...]
    degrees: tuple[int, ...]
    horizon: int
    stop: str
    next_degree_lower_bound: int | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def certified(self) -> tuple[Quotient, ...]:
        return tuple(q for q in self.quotients if q.certified)

    @property
    def quotient_degrees(self) -> tuple[int, ...]:
        return tuple(q.degree for q in self.quotients)

    @property
    def terminated(self) -> bool:
        """The fractional remainder vanished within the horizon."""
        return self.stop == "horizon"

    @property
    def rational_collapse(self) -> bool:
        """Exhausted with d_h < K/4: the data pin theta to a low-degree rational."""
        if not self.terminated:
            return False
        last = self.degrees[-1] if self.degrees else 0
        return 4 * last < self.horizon


def _strip(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[int(nz[0]):] if nz.size else a[:0]


def continued_fraction(theta: LaurentSeries, max_quotients: int | None = None) -> CFExpansion:
    p, K = theta.p, theta.horizon
    if K < 0:
        raise HorizonError("polynomial part of theta is not determined")
    A0 = theta.polynomial_part()
    limit = K if max_quotients is None else max_quotients
    quotients, degrees = [], []
    # N(X) = sum_{i=1}^K a_i X^{K-i}, stored high degree first; theta' = N / X^K
    w = _strip(theta.window(1, K).copy()) if K >= 1 else np.zeros(0, np.int64)
    u = np.zeros(K + 1, dtype=np.int64)
    u[0] = 1
    d = 0
    stop = "max_quotients"
    lower = None
    while len(quotients) < limit:
        if w.size == 0 or d + (d + (u.size - w.size)) > K:
            stop, lower = "horizon", K - 2 * d + 1
            break
        g = u.size - w.size
        d_next = d + g
        inv = pow(int(w[0]), -1, p)
        r = u.copy()
        q = np.zeros(g + 1, dtype=np.int64)
        lw = w.size
        for i in range(g + 1):
            c = int(r[i]) * inv % p
            q[i] = c
            if c:
                r[i:i + lw] = (r[i:i + lw] - c * w) % p
        quotients.append(Quotient(Poly(p, q[::-1].tolist()), 2 * d_next <= K, True))
        degrees.append(d_next)
        u, w = w, _strip(r[g + 1:])
        d = d_next
    return CFExpansion(p, A0, tuple(quotients), tuple(degrees), K, stop, lower)


@dataclass(frozen=True)
class Convergent:
    P: Poly
    Q: Poly
    d: int


def convergents(cf: CFExpansion, certified_only: bool = True) -> list[Convergent]:
    """P_h/Q_h for h = 1, 2, ... from the three-term recurrence."""
    p = cf.p
    P_prev, Q_prev = Poly.one(p), Poly.zero(p)
    P_cur, Q_cur = cf.A0, Poly.one(p)
    out = []
    for q, d in zip(cf.quotients, cf.degrees):
        if certified_only and not q.certified:
            break
        P_prev, P_cur = P_cur, q.poly * P_cur + P_prev
        Q_prev, Q_cur = Q_cur, q.poly * Q_cur + Q_prev
        if Q_cur.deg() != d:
            raise AssertionError(f"deg Q_h = {Q_cur.deg()} but d_h = {d}")
        lead = pow(Q_cur.lead(), -1, p)
        out.append(Convergent(P_cur * lead, Q_cur * lead, d))
    return out
