from fractions import Fraction
from math import comb, factorial

import mpmath
import pytest
from hypothesis import given, strategies as st

from sardquad.numerics import (
    bernoulli,
    bernoulli_table,
    delta_power,
    delta_power_table,
    geometric_power_series,
    geometric_power_sum,
    power_sum,
    to_mpf,
)


def stirling2(n, k):
    # independent oracle: S(n, k) = k S(n-1, k) + S(n-1, k-1)
    table = [[0] * (k + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, min(i, k) + 1):
            table[i][j] = j * table[i - 1][j] + table[i - 1][j - 1]
    return table[n][k]


def direct_power_sum(k, n):
    return sum(g**k for g in range(n))


def direct_geometric_sum(q, k, n):
    return sum(q**g * g**k for g in range(n))


def test_bernoulli_first_values():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(3) == 0


def test_bernoulli_b1_pinned_by_power_sums():
    # fit sum_{g<n} g = B_0 n^2/2 + B_1 n against brute force at n = 1, 2
    # n=1: 0 = 1/2 + B1 -> B1 = -1/2 ; the k=2 sum then pins B2
    assert Fraction(direct_power_sum(1, 1)) - Fraction(1, 2) == bernoulli(1)
    # sum_{g<n} g^2 = n^3/3 + B1 n^2 + B2 n ; n=1 gives 0 = 1/3 - 1/2 + B2
    assert Fraction(1, 2) - Fraction(1, 3) == bernoulli(2)


def test_bernoulli_table_structure():
    B = bernoulli_table(30)
    assert B[0] == 1
    assert all(B[2 * l + 1] == 0 for l in range(1, 15))
    signs = [1 if B[2 * l] > 0 else -1 for l in range(1, 16)]
    assert all(a == -b for a, b in zip(signs, signs[1:]))


@pytest.mark.parametrize(
    "i,j,expected", [(2, 1, 0), (1, 1, 1), (2, 2, 2), (0, 0, 1), (0, 3, 0), (3, 4, 36)]
)
def test_delta_power_examples(i, j, expected):
    assert delta_power(i, j) == expected


def test_delta_power_matches_stirling_oracle():
    for j in range(13):
        for i in range(13):
            assert delta_power(i, j) == factorial(i) * stirling2(j, i)


def test_delta_power_diagonal_and_zero():
    for j in range(13):
        assert delta_power(j, j) == factorial(j)
        for i in range(j + 1, 14):
            assert delta_power(i, j) == 0


def test_delta_power_table_nonnegative():
    T = delta_power_table(10)
    assert all(v >= 0 for row in T for v in row)
    assert T[4][6] == delta_power(4, 6)


def test_delta_power_rejects_negative():
    with pytest.raises(ValueError):
        delta_power(-1, 2)


@pytest.mark.parametrize("k,n,expected", [(1, 4, 6), (0, 0, 0), (5, 0, 0), (3, 5, 100)])
def test_power_sum_examples(k, n, expected):
    assert power_sum(k, n) == expected


def test_power_sum_matches_direct_sums():
    for k in range(11):
        for n in range(51):
            assert power_sum(k, n) == direct_power_sum(k, n), (k, n)


@pytest.mark.parametrize(
    "q,k,n,expected",
    [(2, 1, 3, 10), (Fraction(1, 2), 2, 4, Fraction(21, 8)), (Fraction(1, 3), 0, 5, Fraction(121, 81))],
)
def test_geometric_power_sum_examples(q, k, n, expected):
    assert geometric_power_sum(q, k, n) == expected


def test_geometric_power_sum_k0_is_geometric_series():
    for q in (Fraction(-3), Fraction(2, 7), Fraction(5)):
        for n in range(1, 10):
            assert geometric_power_sum(q, 0, n) == (1 - q**n) / (1 - q)


@pytest.mark.parametrize("q", [Fraction(-3), Fraction(-1, 2), Fraction(1, 3), Fraction(2)])
def test_geometric_power_sum_matches_direct(q):
    for k in range(9):
        for n in range(1, 31):
            assert geometric_power_sum(q, k, n) == direct_geometric_sum(q, k, n)


def test_geometric_power_sum_rejects_q_one():
    with pytest.raises(ValueError):
        geometric_power_sum(1, 2, 3)
    with pytest.raises(ValueError):
        geometric_power_sum(Fraction(1), 2, 3)


def test_geometric_power_sum_bigfloat():
    with mpmath.workprec(200):
        q = mpmath.sqrt(3) - 2
        got = geometric_power_sum(q, 3, 12)
        want = mpmath.fsum(q**g * g**3 for g in range(12))
        assert abs(got - want) < mpmath.mpf(2) ** -180


def test_geometric_power_series_limit():
    q = Fraction(-1, 3)
    series = geometric_power_series(q, 4)
    # partial sums converge geometrically to the closed form
    assert abs(direct_geometric_sum(q, 4, 200) - series) < Fraction(1, 10**80)
    with pytest.raises(ValueError):
        geometric_power_series(Fraction(3, 2), 1)


@given(
    st.fractions(min_value=-5, max_value=5, max_denominator=50).filter(lambda q: q != 1),
    st.integers(0, 6),
    st.integers(1, 15),
)
def test_geometric_power_sum_property(q, k, n):
    assert geometric_power_sum(q, k, n) == direct_geometric_sum(q, k, n)


@given(st.integers(0, 12), st.integers(0, 60))
def test_power_sum_property(k, n):
    assert power_sum(k, n) == direct_power_sum(k, n)


def test_to_mpf_rounds_at_working_precision():
    with mpmath.workprec(300):
        x = to_mpf(Fraction(1, 3))
        assert abs(x * 3 - 1) < mpmath.mpf(2) ** -298
    assert comb(5, 2) == 10  # sanity of stdlib helper used across the package
