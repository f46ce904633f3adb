import random

import numpy as np
import pytest

from conftest import random_rational
from xadic.algebra import NEG_INF, Poly
from xadic.hankel import (brute_inf, brute_inf_search, deficiency_scan, hankel_submatrix,
                          monic_polys, regular_sizes)
from xadic.laurent import (HorizonError, LaurentSeries, continued_fraction, convergents, frac,
                           from_rational, mul_poly_shift, paperfolding_theta,
                           shift_frac)

GEOM = from_rational(Poly.one(3), Poly(3, [2, 1]), 64)


def test_hankel_block_examples():
    assert hankel_submatrix(GEOM, 2, 2).tolist() == [[1, 1], [1, 1]]
    x2 = LaurentSeries(3, 2, [1], 10)
    assert hankel_submatrix(x2, 2, 2).tolist() == [[0, 1], [1, 0]]
    assert not hankel_submatrix(LaurentSeries.zero(3, 10), 3, 3).data.any()


def test_hankel_block_offset_reads_shifted_series():
    t = paperfolding_theta(300)
    a = hankel_submatrix(t, 5, 7, offset=40)
    b = hankel_submatrix(shift_frac(t, 40), 5, 7)
    assert a == b


def test_hankel_block_refuses_unknown_coefficients():
    with pytest.raises(HorizonError):
        hankel_submatrix(paperfolding_theta(10), 6, 6)
    with pytest.raises(HorizonError):
        regular_sizes(paperfolding_theta(10), 6)


def test_regular_sizes_of_geometric_series():
    assert regular_sizes(GEOM, 4) == {1}


def test_regular_sizes_with_all_linear_quotients():
    # [0; X, X, ..., X] has convergent degrees 1, 2, ..., 12
    p = 3
    x = Poly(p, [0, 1])
    P_prev, Q_prev, P, Q = Poly.one(p), Poly.zero(p), Poly.zero(p), Poly.one(p)
    for _ in range(12):
        P_prev, P = P, x * P + P_prev
        Q_prev, Q = Q, x * Q + Q_prev
    t = from_rational(P, Q, 64)
    assert [q.degree for q in continued_fraction(t).quotients] == [1] * 12
    assert regular_sizes(t, 15) == set(range(1, 13))


def test_regular_sizes_are_convergent_degrees():
    rng = random.Random(3)
    for _ in range(20):
        p = rng.choice([2, 3, 5])
        _, _, t = random_rational(rng, p, 20)
        ds = {c.d for c in convergents(continued_fraction(t)) if c.d <= 20}
        assert regular_sizes(t, 20) == ds


def test_scan_flags_rational_collapse():
    rep = deficiency_scan(GEOM, 10)
    assert rep.collapsed_at == 0 and not rep.passed
    assert rep.scanned_r == 0


def test_geometric_series_is_self_similar_under_shifts():
    for r in range(10):
        cf = continued_fraction(shift_frac(GEOM, r))
        assert cf.quotient_degrees == (1,)


def test_paperfolding_small_scan(paperfolding):
    t = paperfolding.truncate(1024)
    rep = deficiency_scan(t, 8)
    assert rep.passed and rep.max_degree <= 4
    assert rep.D_hat == rep.max_degree - 1
    assert all(g == rep.max_degree for _, _, g in rep.witnesses)
    assert sum(rep.degree_histogram.values()) == rep.quotients_checked
    assert "verified for 0 <= r <= 8 only" in rep.to_text()


def test_scan_independent_of_thread_count(paperfolding):
    t = paperfolding.truncate(512)
    a = deficiency_scan(t, 12, workers=1)
    b = deficiency_scan(t, 12, workers=4)
    assert a.as_dict() == b.as_dict()


def test_scan_bound_records_violations(paperfolding):
    rep = deficiency_scan(paperfolding.truncate(1024), 4, bound=2)
    assert rep.violations and all(g > 2 for _, _, g in rep.violations)
    assert not rep.passed


def test_monic_enumeration():
    polys = monic_polys(3, 2)
    assert polys.shape == (9, 3) and np.all(polys[:, -1] == 1)
    assert len({tuple(r) for r in polys}) == 9


def test_brute_inf_rational_sentinel():
    e, r, q = brute_inf_search(GEOM, 2, 2)
    assert e is NEG_INF
    assert frac(mul_poly_shift(GEOM, Poly(3, list(q)), r)).is_zero()


def test_brute_inf_constant_q_reduces_to_shift_degrees(paperfolding):
    t = paperfolding.truncate(256)
    want = min(shift_frac(t, r).deg() for r in range(9))
    assert brute_inf(t, 8, 0) == want


def test_brute_inf_monotone(paperfolding):
    t = paperfolding.truncate(512)
    vals = [brute_inf(t, r, d) for r, d in [(2, 2), (4, 2), (4, 4), (8, 5)]]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_brute_inf_bounded_by_scanned_deficiency(paperfolding):
    t = paperfolding.truncate(1024)
    rep = deficiency_scan(t, 10)
    assert brute_inf(t, 10, 6) >= -(rep.D_hat + 1)


def test_brute_inf_reaches_convergent_witness():
    rng = random.Random(17)
    hits = 0
    for _ in range(40):
        p = rng.choice([2, 3])
        _, Qd, t = random_rational(rng, p, 40)
        if Qd.deg() < 30:
            continue
        cf = continued_fraction(t)
        prev = 0
        for q, d in zip(cf.quotients, cf.degrees):
            if prev > 7:
                break
            assert brute_inf(t, 0, prev) <= -q.degree
            hits += 1
            prev = d
    assert hits > 10


def test_brute_inf_needs_margin():
    with pytest.raises(HorizonError):
        brute_inf(paperfolding_theta(40), 20, 10)
