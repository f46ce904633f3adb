import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from xadic.algebra import (GF, NEG_INF, POS_INF, FpMatrix, Poly, is_prime, mat_rank,
                           poly_divmod, poly_gcd, poly_mul, solve_affine)


def P(p, *coeffs):
    return Poly(p, coeffs)


def test_prime_validation():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        GF(2 ** 16 + 1)
    assert GF(65521).inv(2) * 2 % 65521 == 1


def test_degree_sentinel_is_not_an_integer():
    z = Poly.zero(3)
    assert z.deg() is NEG_INF
    assert NEG_INF < -10 ** 9 and POS_INF > 10 ** 9
    assert NEG_INF + 5 is NEG_INF


def test_poly_mul_examples():
    assert poly_mul(P(3, 1, 1), P(3, 2, 1)) == P(3, 2, 0, 1)
    assert poly_mul(P(2, 1, 1), P(2, 1, 1)) == P(2, 1, 0, 1)
    assert poly_mul(P(5, 1, 2, 3), Poly.zero(5)).is_zero()


def test_poly_divmod_examples():
    q, r = poly_divmod(P(3, 0, 0, 1), P(3, 1, 1))
    assert (q, r) == (P(3, 2, 1), P(3, 1))
    a = P(5, 1, 2, 3)
    assert poly_divmod(a, a) == (Poly.one(5), Poly.zero(5))
    assert poly_divmod(P(3, 1, 1), P(3, 0, 0, 1)) == (Poly.zero(3), P(3, 1, 1))
    with pytest.raises(ZeroDivisionError):
        poly_divmod(a, Poly.zero(5))


def test_normalization_strips_trailing_zeros():
    assert P(3, 1, 2, 0, 0).coeffs == (1, 2)
    assert (P(3, 1, 1) + P(3, 0, 2)).deg() == 0
    assert P(3, 4, 5).coeffs == (1, 2)


poly_st = st.tuples(st.sampled_from([2, 3, 5, 7]), st.lists(st.integers(0, 50), max_size=9),
                    st.lists(st.integers(0, 50), min_size=1, max_size=6))


@given(poly_st)
def test_divmod_round_trip(data):
    p, a, b = data
    A, B = Poly(p, a), Poly(p, b)
    if B.is_zero():
        B = Poly.one(p)
    q, r = poly_divmod(A, B)
    assert q * B + r == A
    assert r.deg() < B.deg()


def test_divmod_round_trip_thousand_pairs():
    rng = random.Random(7)
    for _ in range(1000):
        p = rng.choice([2, 3, 5])
        A = Poly(p, [rng.randrange(p) for _ in range(rng.randint(0, 12))])
        B = Poly(p, [rng.randrange(p) for _ in range(rng.randint(0, 6))] + [rng.randrange(1, p)])
        q, r = poly_divmod(A, B)
        assert q * B + r == A and r.deg() < B.deg()


@given(poly_st)
def test_gcd_divides_both(data):
    p, a, b = data
    A, B = Poly(p, a), Poly(p, b)
    g = poly_gcd(A, B)
    if g.is_zero():
        assert A.is_zero() and B.is_zero()
        return
    assert g.lead() == 1
    assert (A % g).is_zero() and (B % g).is_zero()


def test_from_int_reads_base_p_digits():
    assert Poly.from_int(3, 5) == P(3, 2, 1)
    assert Poly.from_int(2, 0).is_zero()
    assert Poly.from_int(3, 5).evaluate(3) == 5


def test_rank_examples():
    assert mat_rank(FpMatrix.identity(3, 2)) == 2
    for p in (2, 3, 5):
        assert mat_rank(FpMatrix.from_rows(p, [[1, 1], [1, 1]])) == 1
    assert mat_rank(FpMatrix.zeros(3, 3, 4)) == 0


def test_solve_affine_examples():
    b = [2, 0, 1]
    sol = solve_affine(FpMatrix.identity(3, 3), b)
    assert sol.unique and sol.particular == tuple(b)
    z = FpMatrix.zeros(3, 1, 2)
    assert not solve_affine(z, [1]).consistent
    assert solve_affine(z, [1]).size == 0
    s0 = solve_affine(z, [0])
    assert s0.nullity == 2 and s0.size == 9


def _brute_count(A: FpMatrix, b):
    p = A.p
    xs = np.array(list(itertools.product(range(p), repeat=A.cols)), dtype=np.int64)
    return int(np.all((xs @ A.data.T) % p == np.asarray(b) % p, axis=1).sum())


def test_solution_counts_match_enumeration():
    rng = random.Random(11)
    for _ in range(150):
        p = rng.choice([2, 3, 5])
        cols = rng.randint(1, 8 if p == 2 else (6 if p == 3 else 5))
        rows = rng.randint(1, 8)
        rank_cap = rng.randint(1, min(rows, cols))
        # low-rank products make inconsistent and degenerate systems common
        L = np.array([[rng.randrange(p) for _ in range(rank_cap)] for _ in range(rows)])
        R = np.array([[rng.randrange(p) for _ in range(cols)] for _ in range(rank_cap)])
        A = FpMatrix(p, (L @ R) % p)
        b = [rng.randrange(p) for _ in range(rows)]
        sol = solve_affine(A, b)
        assert sol.size == _brute_count(A, b)
        if sol.consistent:
            assert np.array_equal(A.matvec(sol.particular), np.asarray(b) % p)
            assert sol.rank + sol.nullity == cols
            assert sol.rank == mat_rank(A)


@given(st.integers(1, 7), st.sampled_from([2, 3, 5]), st.randoms(use_true_random=False))
def test_rank_nullity_square(n, p, rnd):
    A = FpMatrix(p, [[rnd.randrange(p) for _ in range(n)] for _ in range(n)])
    sol = solve_affine(A, [0] * n)
    assert sol.rank + sol.nullity == n


def test_pivoting_is_deterministic():
    A = FpMatrix.from_rows(3, [[1, 1, 0], [0, 0, 0]])
    s1, s2 = solve_affine(A, [2, 0]), solve_affine(A, [2, 0])
    assert s1 == s2
    assert s1.particular == (2, 0, 0) and s1.free_columns == (1, 2)


def test_matrix_is_read_only():
    A = FpMatrix.identity(3, 2)
    with pytest.raises(ValueError):
        A.data[0, 0] = 2
