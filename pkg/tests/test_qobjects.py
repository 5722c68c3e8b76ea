"""q-binomials, Pochhammer products, and the classical partition series."""

import pytest

from qident import (
    INF,
    HalfInt,
    Monomial,
    QSeries,
    SpecError,
    binom,
    euler_series,
    partition_series,
    poch_finite,
    poch_finite_scalar,
    poch_infinite,
    qbinom,
    qbinom_poly,
    he,
    qe,
)
from qident.naive import n_poch_finite, n_poch_infinite, n_qbinom


def test_binom_values_and_edges():
    assert binom(5, 2) == 10
    assert binom(5, 0) == 1
    assert binom(5, 7) == 0
    assert binom(5, -1) == 0
    with pytest.raises(SpecError):
        binom(-1, 0)


def test_qbinom_poly_small():
    # [4, 2]_q = 1 + q + 2q^2 + q^3 + q^4
    assert qbinom_poly(4, 2) == [1, 1, 2, 1, 1]
    assert qbinom_poly(3, 0) == [1]
    assert qbinom_poly(3, 5) == []


def test_qbinom_poly_symmetry_and_sum():
    for n in range(9):
        for k in range(n + 1):
            p = qbinom_poly(n, k)
            assert p == qbinom_poly(n, n - k)
            assert sum(p) == binom(n, k)


def test_qbinom_two_routes_agree():
    for n in range(8):
        for k in range(n + 2):
            exact = qbinom_poly(n, k)
            naive = n_qbinom(n, k, 40)
            for i in range(20):
                want = exact[i] if i < len(exact) else 0
                assert naive.coeff(2 * i) == want
            trunc = qbinom(n, k, he(18))
            for i in range(9):
                want = exact[i] if i < len(exact) else 0
                assert trunc.coeff_q(i) == want


def test_poch_finite_scalar_vs_naive(rng):
    for _ in range(15):
        sign = rng.choice((1, -1))
        qnum = rng.randint(1, 5)
        n = rng.randint(0, 6)
        base = rng.choice((qe(1), qe(2)))
        mine = poch_finite_scalar(Monomial(sign, he(qnum)), n, base_exp=base, order=he(30))
        ref = n_poch_finite(sign, qnum, n, base.num, 30)
        for e in range(30):
            assert mine.coefficient(he(e)) == ref.coeff(e)


def test_poch_finite_z_substitution(rng):
    # (z q; q)_n with z set to a monomial equals the scalar product directly
    for _ in range(10):
        n = rng.randint(0, 5)
        sign = rng.choice((1, -1))
        m = HalfInt(rng.randint(-2, 3))
        lz = poch_finite(Monomial(1, qe(1), 1), n)
        got = lz.substitute(sign, m)
        want = poch_finite_scalar(Monomial(sign, qe(1) + m), n, order=INF)
        assert got.eq_upto(want).equal


def test_poch_infinite_pentagonal_fast_path():
    # (q; q)_inf must agree with the naive term-by-term product
    W = 60
    mine = poch_infinite(Monomial(1, qe(1)), qe(1), he(W))
    ref = n_poch_infinite(1, 2, 2, W)
    for e in range(W):
        assert mine.coefficient(he(e)) == ref.coeff(e)


def test_poch_infinite_general_vs_naive(rng):
    for _ in range(8):
        sign = rng.choice((1, -1))
        qnum = rng.randint(1, 6)
        basenum = rng.choice((2, 4, 6))
        W = 40
        mine = poch_infinite(Monomial(sign, he(qnum)), he(basenum), he(W))
        ref = n_poch_infinite(sign, qnum, basenum, W)
        for e in range(W):
            assert mine.coefficient(he(e)) == ref.coeff(e)


def test_partition_series_counts():
    p = partition_series(qe(30))
    known = {0: 1, 1: 1, 2: 2, 3: 3, 4: 5, 5: 7, 10: 42, 20: 627, 29: 4565}
    for n, c in known.items():
        assert p.coeff_q(n) == c


def test_euler_inverse_of_partitions():
    W = he(50)
    prod = euler_series(W) * partition_series(W)
    assert prod.eq_upto(QSeries.one()).equal


def test_monomial_helpers():
    z = Monomial(-1, he(3), 1)
    assert z.inverted().z_exp == -1
    w = Monomial(1, he(1))
    assert w.times_q(qe(1)).q_exp == he(3)


def test_poch_validation():
    with pytest.raises(SpecError):
        poch_finite_scalar(Monomial(1, qe(1)), -1)
    # a +1-signed infinite product with exponent 0 has a vanishing factor
    with pytest.raises(Exception):
        poch_infinite(Monomial(1, qe(0)), qe(1), he(10))
