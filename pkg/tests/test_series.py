import pytest
from hypothesis import given, strategies as st

from ramanujan49.errors import InsufficientOrder, NonUnitConstantTerm
from ramanujan49.qseries import eta, eta_product
from ramanujan49.series import (
    TruncatedSeries,
    _cauchy,
    dissect,
    eq_upto,
    inverse,
    mul,
    power,
    shift,
    substitute_power,
)


def S(*coeffs, order=None):
    return TruncatedSeries(coeffs, order)


coeff = st.integers(min_value=-(10**30), max_value=10**30)


@st.composite
def series(draw, min_order=1, max_order=60, unit=False):
    n = draw(st.integers(min_order, max_order))
    c = draw(st.lists(coeff, min_size=n, max_size=n))
    if unit:
        c[0] = draw(st.sampled_from([1, -1]))
    return TruncatedSeries(c)


@st.composite
def same_order(draw, k=3, unit=False):
    n = draw(st.integers(1, 60))
    out = []
    for _ in range(k):
        c = draw(st.lists(coeff, min_size=n, max_size=n))
        if unit:
            c[0] = draw(st.sampled_from([1, -1]))
        out.append(TruncatedSeries(c))
    return out


# --- add ------------------------------------------------------------------


def test_add_cancellation():
    assert S(1, 1, order=5) + S(1, -1, order=5) == S(2, order=5)


def test_add_zero_identity():
    a = eta(1, 30)
    assert a + TruncatedSeries.zero(30) == a


def test_add_inverse_gives_zero():
    f1 = eta(1, 50)
    assert (f1 + (-f1)).is_zero()


def test_add_truncates_to_min_order():
    assert (S(1, 2, 3) + S(1, 1)).order == 2


# --- mul ------------------------------------------------------------------


def test_mul_difference_of_squares():
    assert S(1, 1, order=6) * S(1, -1, order=6) == S(1, 0, -1, order=6)


def test_mul_with_inverse_of_f1():
    f1 = eta(1, 200)
    assert f1 * inverse(f1) == TruncatedSeries.one(200)


def test_f1_cubed_leading_terms():
    # (-1)^n (2n+1) q^(n(n+1)/2): 1 - 3q + 5q^3 - 7q^6 + 9q^10
    c = power(eta(1, 11), 3).coeffs
    assert c == (1, -3, 0, 5, 0, 0, -7, 0, 0, 0, 9)


@given(same_order(2))
def test_kronecker_product_matches_schoolbook(pair):
    a, b = pair
    assert mul(a, b).coeffs == tuple(_cauchy(a.coeffs, b.coeffs, a.order))


def test_kronecker_product_long_signed():
    a = power(eta(1, 300), -29)
    b = power(eta(7, 300), 28) * -3
    assert mul(a, b).coeffs == tuple(_cauchy(a.coeffs, b.coeffs, 300))


@given(same_order(3))
def test_ring_axioms(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)


# --- inverse --------------------------------------------------------------


def test_inverse_geometric():
    assert inverse(S(1, -1, order=8)) == S(*[1] * 8)


def test_inverse_of_f1_is_partition_numbers():
    # pentagonal-recurrence oracle values p(0..10)
    assert inverse(eta(1, 11)).coeffs == (1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42)


def test_inverse_rejects_nonunit():
    with pytest.raises(NonUnitConstantTerm):
        inverse(S(2, 1, 1))


def test_inverse_with_minus_one_constant():
    a = S(-1, 3, 5, -2, order=10)
    assert a * inverse(a) == TruncatedSeries.one(10)


@given(series(min_order=1, max_order=100, unit=True))
def test_inverse_property(a):
    assert mul(a, inverse(a)) == TruncatedSeries.one(a.order)


def test_inverse_200_random_order_100():
    import random

    rng = random.Random(1234)
    for _ in range(200):
        c = [rng.choice((1, -1))] + [rng.randint(-10**6, 10**6) for _ in range(99)]
        a = TruncatedSeries(c)
        assert mul(a, inverse(a)) == TruncatedSeries.one(100)


# --- pow ------------------------------------------------------------------


def test_pow_zero_is_one():
    assert power(eta(1, 20), 0) == TruncatedSeries.one(20)


def test_pow_binomial():
    assert power(S(1, 1, order=4), 2) == S(1, 2, 1, order=4)


def test_pow_matches_repeated_mul():
    f1 = eta(1, 100)
    assert power(f1, 3) == mul(mul(f1, f1), f1)


def test_negative_pow_of_nonunit_raises():
    with pytest.raises(NonUnitConstantTerm):
        power(S(3, 1), -1)


@given(series(max_order=30, unit=True), st.integers(-6, 6), st.integers(-6, 6))
def test_pow_adds_exponents(a, m, n):
    assert power(a, m) * power(a, n) == power(a, m + n)


# --- shift ----------------------------------------------------------------


def test_shift_constant():
    assert shift(TruncatedSeries.one(5), 2) == S(0, 0, 1, order=5)


def test_shift_zero_is_identity():
    a = eta(1, 20)
    assert shift(a, 0) == a


def test_shift_keeps_order():
    a = eta(1, 20)
    assert shift(a, 7).order == 20
    assert shift(a, 25).is_zero()


# --- dissect --------------------------------------------------------------


def test_dissect_small():
    assert dissect(S(1, 2, 3, 4), 2, 1) == S(2, 4)


def test_dissect_output_order():
    a = eta(1, 100)
    for m, r in [(7, 0), (7, 2), (49, 19), (3, 2)]:
        assert dissect(a, m, r).order == -(-(100 - r) // m)


def test_dissect_cube_of_f1_vanishes_at_2_4_5():
    cube = power(eta(1, 700), 3)
    for r in (2, 4, 5):
        assert dissect(cube, 7, r).is_zero()


def test_dissect_partition_mod_49():
    p = inverse(eta(1, 49 * 30))
    assert all(c % 49 == 0 for c in dissect(p, 49, 19).coeffs)


@given(series(max_order=80), st.integers(1, 9))
def test_dissection_reconstruction(a, m):
    total = TruncatedSeries.zero(a.order)
    for r in range(min(m, a.order)):
        part = dissect(a, m, r)
        total = total + shift(substitute_power(TruncatedSeries(part.coeffs, a.order), m), r)
    assert total == a


# --- substitute_power -----------------------------------------------------


def test_substitute_power_binomial():
    assert substitute_power(S(1, 1, order=10), 7) == TruncatedSeries.from_sparse({0: 1, 7: 1}, 10)


def test_substitute_power_one_is_identity():
    a = eta(1, 40)
    assert substitute_power(a, 1) == a


def test_f49_is_f1_at_q49():
    assert substitute_power(eta_product(1, 500), 49) == eta_product(49, 500)


@given(series(max_order=80), st.integers(1, 5), st.integers(1, 5))
def test_substitute_power_composes(a, j, k):
    assert substitute_power(substitute_power(a, j), k) == substitute_power(a, j * k)


# --- eq_upto --------------------------------------------------------------


def test_eq_upto_reflexive():
    a = eta(1, 40)
    assert eq_upto(a, a, 40)


def test_eq_upto_reports_last_index():
    n = 12
    one = TruncatedSeries.one(n)
    other = one + TruncatedSeries.monomial(1, n - 1, n)
    cmp = eq_upto(one, other, n)
    assert not cmp
    assert (cmp.index, cmp.left, cmp.right) == (n - 1, 0, 1)


def test_eq_upto_needs_order():
    with pytest.raises(InsufficientOrder):
        eq_upto(TruncatedSeries.one(5), TruncatedSeries.one(10), 8)
