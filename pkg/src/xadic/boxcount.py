"""Exact box counts for the three-dimensional net generated by I, H(theta), J.

The anchored box J = [0, g1) x [0, g2) x [0, g3) is cut into disjoint
elementary intervals.  Membership of x_n in an elementary interval is a
system of linear equations in the digit vector of n, so every count is
``0`` or ``p^(m - rank)`` and no point is ever enumerated.  This keeps
m = 96 or 192 (p^m points) within reach.
"""

from __future__ import annotations

import csv
import io
import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import POS_INF, FpMatrix, mat_rank, solve_affine
from .digital import NetSpec, digital_point, pnorm
from .hankel import hankel_submatrix
from .laurent import LaurentSeries

__all__ = [
    "FalsificationError", "GammaSpec", "ElementaryInterval", "DeficitReport",
    "choose_u", "build_gamma", "solve_nbar", "enumerate_intervals",
    "count_in_interval", "deficit", "block_length", "min_order_triples",
]


class FalsificationError(RuntimeError):
    """A computation contradicted a structural claim about the net."""


def block_length(D: int) -> int:
    """v = 3(D + 1)."""
    return 3 * (D + 1)


def choose_u(theta: LaurentSeries, m: int, D: int) -> int:
    """Smallest u in [D, 2D) whose (m/4 - u) Hankel block of <X^{m/2} theta> is regular."""
    if D < 1:
        raise ValueError("D = 0 leaves the range D <= u < 2D empty")
    if m % 4:
        raise ValueError("m must be divisible by 4")
    for u in range(D, 2 * D):
        size = m // 4 - u
        if size <= 0:
            break
        H = hankel_submatrix(theta, size, size, offset=m // 2)
        if mat_rank(H) == size:
            return u
    raise FalsificationError(
        f"no u in [{D}, {2 * D}) makes the Hankel block of <X^{m // 2} theta> regular; "
        f"theta does not behave like a series of deficiency {D} here")


def _jv(v: int) -> list[int]:
    return [0] * (v - 1) + [1]


@dataclass(frozen=True)
class GammaSpec:
    p: int
    m: int
    v: int
    u: int
    gamma: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    middle_filled: bool = False

    @property
    def r(self) -> tuple[int, int, int]:
        return tuple(len(g) for g in self.gamma)

    @property
    def middle(self) -> range:
        """1-based positions of gamma^(3) that are fixed by solving for n-bar."""
        return range(self.m // 4 + self.u + 1, self.m // 2 + 1)

    def value(self, i: int) -> Fraction:
        num = 0
        for y in self.gamma[i]:
            num = num * self.p + y
        return Fraction(num, self.p ** len(self.gamma[i]))

    @property
    def lambda_J(self) -> Fraction:
        return self.value(0) * self.value(1) * self.value(2)


def build_gamma(m: int, v: int, u: int, p: int = 3) -> GammaSpec:
    if v < 1 or m % (8 * v):
        raise ValueError(f"m={m} must be a positive multiple of 8v = {8 * v}")
    if not 0 <= u < v:
        raise ValueError(f"u={u} must satisfy 0 <= u < v={v}")
    L = m // (4 * v)
    g1 = _jv(v) * L
    g2 = [0] * (v - u) + _jv(v) * (L - 1)
    g3 = [0] * (m // 4 + u) + [0] * (m // 4 - u) + _jv(v) * L
    assert len(g1) == m // 4 and len(g2) == m // 4 - u and len(g3) == 3 * m // 4
    return GammaSpec(p, m, v, u, (tuple(g1), tuple(g2), tuple(g3)), False)


def solve_nbar(spec: NetSpec, g: GammaSpec):
    """The unique n-bar with [x^(i)_nbar]_{r_i} = gamma^(i), i = 1, 2, 3.

    gamma^(3) is only prescribed outside its middle block; the returned
    GammaSpec carries the middle block read off x^(3)_nbar.  Returns
    ``(digits, nbar, filled_gamma)``.
    """
    if spec.s != 3 or spec.m != g.m or spec.p != g.p:
        raise ValueError("spec and gamma disagree on s, m or p")
    C1, C2, C3 = spec.generators()
    r1, r2, r3 = g.r
    mid = set(g.middle)
    rows3 = [j for j in range(1, r3 + 1) if j not in mid]
    A = np.vstack([C1.data[:r1], C2.data[:r2], C3.data[[j - 1 for j in rows3]]])
    b = list(g.gamma[0]) + list(g.gamma[1]) + [g.gamma[2][j - 1] for j in rows3]
    sol = solve_affine(FpMatrix(spec.p, A), b)
    if not sol.consistent:
        raise FalsificationError("no n satisfies the gamma constraints (inconsistent system)")
    if sol.nullity:
        raise FalsificationError(
            f"gamma constraints leave {sol.nullity} free digit(s): n-bar is not unique")
    digits = sol.particular
    nbar = sum(d * spec.p ** i for i, d in enumerate(digits))
    x = digital_point(spec, nbar)
    g3 = list(g.gamma[2])
    for j in g.middle:
        g3[j - 1] = x.digits[2][j - 1]
    filled = GammaSpec(g.p, g.m, g.v, g.u, (g.gamma[0], g.gamma[1], tuple(g3)), True)
    for i in range(3):
        if tuple(x.digits[i][:filled.r[i]]) != filled.gamma[i]:
            raise FalsificationError(f"regenerated x_nbar misses gamma^({i + 1})")
    return digits, nbar, filled


@dataclass(frozen=True)
class ElementaryInterval:
    """prod_i [ [g_i]_{j_i-1} + (k_i-1) p^{-j_i}, [g_i]_{j_i-1} + k_i p^{-j_i} ).

    ``prefixes[i]`` holds the j_i leading digits every member shares.  A
    resolution j_i = 0 leaves coordinate i unconstrained.
    """

    p: int
    js: tuple[int, ...]
    ks: tuple[int, ...]
    prefixes: tuple[tuple[int, ...], ...]

    @classmethod
    def from_prefixes(cls, p: int, prefixes) -> "ElementaryInterval":
        prefixes = tuple(tuple(x) for x in prefixes)
        return cls(p, tuple(len(x) for x in prefixes),
                   tuple(x[-1] + 1 if x else 0 for x in prefixes), prefixes)

    @property
    def order(self) -> int:
        return sum(self.js)

    @property
    def volume(self) -> Fraction:
        return Fraction(1, self.p ** self.order)

    def lower(self) -> tuple[Fraction, ...]:
        out = []
        for x in self.prefixes:
            num = 0
            for y in x:
                num = num * self.p + y
            out.append(Fraction(num, self.p ** len(x)))
        return tuple(out)

    def contains(self, point) -> bool:
        return all(tuple(point.digits[i][:j]) == self.prefixes[i] for i, j in enumerate(self.js))


def enumerate_intervals(g: GammaSpec) -> list[ElementaryInterval]:
    per_coord = []
    for gam in g.gamma:
        opts = []
        for j, gj in enumerate(gam, start=1):
            for k in range(1, gj + 1):
                opts.append((j, k, gam[:j - 1] + (k - 1,)))
        per_coord.append(opts)
    out = []
    for combo in itertools.product(*per_coord):
        out.append(ElementaryInterval(
            g.p, tuple(c[0] for c in combo), tuple(c[1] for c in combo),
            tuple(c[2] for c in combo)))
    return out


def _interval_system(spec: NetSpec, I: ElementaryInterval):
    mats = spec.generators()
    blocks = [c.data[:j] for c, j in zip(mats, I.js)]
    A = np.vstack(blocks) if blocks else np.zeros((0, spec.m), np.int64)
    b = [y for x in I.prefixes for y in x]
    return FpMatrix(spec.p, A.reshape(-1, spec.m)), b


def count_in_interval(spec: NetSpec, I: ElementaryInterval) -> int:
    """#{0 <= n < p^m : x_n in I}, from the rank of the membership system."""
    if any(j > spec.R for j in I.js):
        raise ValueError(f"interval resolution exceeds digit depth R={spec.R}")
    A, b = _interval_system(spec, I)
    if A.rows == 0:
        return spec.size
    return solve_affine(A, b).size


def min_order_triples(m: int, v: int) -> int:
    """Number of (l1, l2, l3) with l1, l3 in [1, m/4v], l2 in [1, m/4v - 1], sum m/2v."""
    L = m // (4 * v)
    return sum(1 for a in range(1, L + 1) for b in range(1, L)
               if 1 <= 2 * L - a - b <= L)


@dataclass
class DeficitReport:
    m: int
    v: int
    u: int
    D: int
    t: int
    p: int
    nbar: int | None
    deficit: Fraction
    lambda_J: Fraction
    volume_sum: Fraction
    count_in_J: int
    empty_interval_orders: Counter
    triples_at_min_order: int
    min_order: int
    rows: list = field(default_factory=list, repr=False)
    low_order_exact: bool = True
    low_order_checked: int = 0
    high_order_empty: bool = True
    high_order_checked: int = 0
    proof_shape_ok: bool = True
    falsifications: list = field(default_factory=list)

    @property
    def decomposition_exact(self) -> bool:
        return self.volume_sum == self.lambda_J

    @property
    def order_bound(self) -> Fraction:
        """-(triples at minimal order) * p^(u - v)."""
        return -self.triples_at_min_order * Fraction(self.p) ** (self.u - self.v)

    @property
    def quadratic_floor(self) -> int:
        """(m / 8v)^2, the floor on the number of minimal-order triples."""
        return (self.m // (8 * self.v)) ** 2

    @property
    def passed(self) -> bool:
        return (self.deficit < 0 and self.low_order_exact and self.high_order_empty
                and self.proof_shape_ok and self.decomposition_exact
                and self.deficit <= self.order_bound
                and self.triples_at_min_order >= self.quadratic_floor
                and not self.falsifications)

    def as_dict(self) -> dict:
        return {
            "p": self.p, "m": self.m, "D": self.D, "v": self.v, "u": self.u, "t": self.t,
            "nbar": "n/a" if self.nbar is None else self.nbar,
            "deficit": str(self.deficit),
            "deficit_float": float(self.deficit),
            "lambda_J": str(self.lambda_J),
            "count_in_J": self.count_in_J,
            "p^m*lambda_J": str(self.lambda_J * self.p ** self.m),
            "intervals": len(self.rows),
            "decomposition_exact": self.decomposition_exact,
            "min_order": self.min_order,
            "triples_at_min_order": self.triples_at_min_order,
            "quadratic_floor_(m/8v)^2": self.quadratic_floor,
            "minimal_order_bound": str(self.order_bound),
            "empty_interval_orders": " ".join(
                f"{k}x{v}" for k, v in sorted(self.empty_interval_orders.items())),
            "low_order_intervals_exact": f"{self.low_order_exact} ({self.low_order_checked} checked)",
            "high_order_intervals_empty": f"{self.high_order_empty} ({self.high_order_checked} checked)",
            "proof_shape_ok": self.proof_shape_ok,
            "falsifications": len(self.falsifications),
            "status": "PASS" if self.passed else "FAIL",
        }

    def to_text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.as_dict().items())

    def intervals_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j1", "j2", "j3", "k1", "k2", "k3", "order", "count", "contribution"])
        for I, count, contrib in self.rows:
            w.writerow([*I.js, *I.ks, I.order, count, str(contrib)])
        return buf.getvalue()


def deficit(spec: NetSpec, g: GammaSpec, D: int, t: int | None = None,
            nbar: int | None = None) -> DeficitReport:
    """Signed discrepancy #{x_n in J} - p^m lambda(J), summed interval by interval.

    ``t`` defaults to D.  ``nbar`` anchors the admissibility cross-check of
    any nonempty high-order interval; it is solved for on demand.
    """
    if not g.middle_filled:
        raise ValueError("solve for n-bar first (gamma^(3) middle block is unfilled)")
    t = D if t is None else t
    m, p, v, u = g.m, g.p, g.v, g.u
    min_order = m + v - u
    total = Fraction(0)
    vol_sum = Fraction(0)
    in_J = 0
    empty = Counter()
    rows = []
    rep = DeficitReport(m, v, u, D, t, p, nbar, Fraction(0), g.lambda_J, Fraction(0), 0,
                        empty, 0, min_order)
    triples = set()
    for I in enumerate_intervals(g):
        A, b = _interval_system(spec, I)
        sol = solve_affine(A, b)
        count = sol.size
        contrib = count - Fraction(p) ** (m - I.order)
        rows.append((I, count, contrib))
        total += contrib
        vol_sum += I.volume
        in_J += count
        if count == 0:
            empty[I.order] += 1
        if I.order <= m - t:
            rep.low_order_checked += 1
            if contrib != 0:
                rep.low_order_exact = False
        if I.order > m - D:
            if I.order < min_order or I.js[2] <= m // 2:
                rep.proof_shape_ok = False
        if I.order >= min_order:
            rep.high_order_checked += 1
            if I.order == min_order:
                triples.add(I.js)
            if count:
                rep.high_order_empty = False
                if rep.nbar is None:
                    rep.nbar = solve_nbar(spec, g)[1]
                xbar = digital_point(spec, rep.nbar)
                digits = sol.particular
                n = sum(d * p ** i for i, d in enumerate(digits))
                l = pnorm(digital_point(spec, n).ominus(xbar))
                rep.falsifications.append({
                    "interval": I.js, "n": n, "norm_exponent": l,
                    "admissibility_bound": m + D + 3,
                    "contradicts_admissibility": l is POS_INF or l >= m + D + 3,
                })
    rep.deficit = total
    rep.volume_sum = vol_sum
    rep.count_in_J = in_J
    rep.rows = rows
    rep.triples_at_min_order = len(triples)
    return rep
