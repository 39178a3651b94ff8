from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistsurvey.errors import DimensionError, InvalidFormError, OverflowGuardError
from twistsurvey.qseries import (
    BinaryQuadraticForm,
    PowerSeries,
    ThetaRecipe,
    build_F,
    series_add,
    series_mul,
    series_sub,
    theta_binary,
    theta_unary,
)

from oracles import naive_recipe_series, naive_theta

RECIPE_11A1 = ThetaRecipe(
    terms=(
        (1, BinaryQuadraticForm(1, 0, 11)),
        (-1, BinaryQuadraticForm(3, 2, 4)),
    ),
    unary_t=11,
)


def series(values) -> PowerSeries:
    arr = np.asarray(values, dtype=np.int64)
    return PowerSeries(len(values) - 1, arr)


def test_form_rejects_non_positive_definite():
    with pytest.raises(InvalidFormError):
        BinaryQuadraticForm(-1, 0, 11)
    with pytest.raises(InvalidFormError):
        BinaryQuadraticForm(1, 5, 1)  # discriminant 21 > 0
    with pytest.raises(InvalidFormError):
        BinaryQuadraticForm(1, 2, 1)  # discriminant 0


def test_theta_binary_x2_11y2_low_coefficients():
    # m=0: origin; m=1: (+-1,0); m=4: (+-2,0); m=9: (+-3,0); m=11: (0,+-1);
    # m=12: (+-1,+-1).  Counts are plain representation numbers, so entries
    # at 4 and 9 are 2, not 4.
    got = theta_binary(BinaryQuadraticForm(1, 0, 11), 12)
    assert got.coeffs.tolist() == [1, 2, 0, 0, 2, 0, 0, 0, 0, 2, 0, 2, 4]
    assert got.coeffs.tolist() == naive_theta(1, 0, 11, 12)


def test_theta_binary_skew_form_minimum():
    got = theta_binary(BinaryQuadraticForm(3, 2, 4), 5)
    assert got.coeff(0) == 1
    assert got.coeff(1) == 0
    assert got.coeff(2) == 0
    assert got.coeff(3) == 2  # (+-1, 0)


def test_theta_binary_sum_of_two_squares():
    got = theta_binary(BinaryQuadraticForm(1, 0, 1), 2)
    assert got.coeff(2) == 4  # (+-1, +-1)


@pytest.mark.parametrize(
    "form",
    [
        (1, 0, 11),
        (3, 2, 4),
        (1, 0, 14),
        (2, 0, 7),
        (3, -2, 23),
        (7, 6, 11),
        (1, 0, 20),
        (4, 0, 5),
        (1, 0, 17),
        (2, 2, 9),
    ],
)
def test_theta_binary_matches_naive_oracle(form):
    a, b, c = form
    got = theta_binary(BinaryQuadraticForm(a, b, c), 500)
    assert got.coeffs.tolist() == naive_theta(a, b, c, 500)


@given(
    a=st.integers(1, 6),
    b=st.integers(-6, 6),
    c=st.integers(1, 8),
    bound=st.integers(1, 120),
)
@settings(max_examples=60, deadline=None)
def test_theta_binary_random_forms_match_oracle(a, b, c, bound):
    if b * b - 4 * a * c >= 0:
        return
    got = theta_binary(BinaryQuadraticForm(a, b, c), bound)
    assert got.coeffs.tolist() == naive_theta(a, b, c, bound)
    # central symmetry (x,y) -> (-x,-y) pairs all points off the origin
    assert all(v % 2 == 0 for v in got.coeffs.tolist()[1:])


def test_theta_unary_examples():
    got = theta_unary(11, 50)
    nonzero = {m: got.coeff(m) for m in range(51) if got.coeff(m)}
    assert nonzero == {0: 1, 11: 2, 44: 2}
    assert theta_unary(1, 5).coeffs.tolist() == [1, 2, 0, 0, 2, 0]
    t20 = theta_unary(20, 19)
    assert t20.coeff(0) == 1 and np.count_nonzero(t20.coeffs) == 1


def test_series_sub_and_add():
    s = theta_unary(1, 5)
    zero = series_sub(s, s)
    assert not zero.coeffs.any()
    doubled = series_add(s, s)
    assert doubled.coeffs.tolist() == [2, 4, 0, 0, 4, 0]


def test_series_mul_small():
    one_plus_2q = series([1, 2, 0])
    sq = series_mul(one_plus_2q, one_plus_2q)
    assert sq.coeffs.tolist() == [1, 4, 4]


def test_series_mul_unary_square_q2_coefficient():
    u = theta_unary(1, 4)
    assert series_mul(u, u).coeff(2) == 4  # 2*2 from q^1 * q^1


def test_series_bound_mismatch_raises():
    with pytest.raises(DimensionError):
        series_sub(theta_unary(1, 5), theta_unary(1, 6))
    with pytest.raises(DimensionError):
        series_mul(theta_unary(1, 5), theta_unary(1, 6))


def test_series_overflow_guard():
    big = series([2**62, 2**62, 0])
    with pytest.raises(OverflowGuardError):
        series_add(big, big)
    with pytest.raises(OverflowGuardError):
        series_mul(big, series([4, 4, 4]))


@given(
    lhs=st.lists(st.integers(-40, 40), min_size=6, max_size=6),
    rhs=st.lists(st.integers(-40, 40), min_size=6, max_size=6),
    third=st.lists(st.integers(-40, 40), min_size=6, max_size=6),
)
@settings(max_examples=40, deadline=None)
def test_series_mul_commutative_associative(lhs, rhs, third):
    p, q, r = series(lhs), series(rhs), series(third)
    assert np.array_equal(series_mul(p, q).coeffs, series_mul(q, p).coeffs)
    left = series_mul(series_mul(p, q), r)
    right = series_mul(p, series_mul(q, r))
    assert np.array_equal(left.coeffs, right.coeffs)


def test_build_F_11a1_first_coefficients():
    F = build_F(RECIPE_11A1, 12)
    assert F.coeff(0) == 0  # same-genus difference kills the constant term
    assert F.coeff(1) == 2
    assert F.coeff(2) == 0
    assert F.coeff(3) == -2


def test_build_F_11a1_matches_naive_recipe_to_1000():
    F = build_F(RECIPE_11A1, 1000)
    expected = naive_recipe_series(
        [(1, (1, 0, 11)), (-1, (3, 2, 4))], 11, 1000
    )
    assert F.coeffs.tolist() == expected


def test_recipe_validation():
    with pytest.raises(ValueError):
        ThetaRecipe(terms=(), unary_t=11)
    with pytest.raises(ValueError):
        ThetaRecipe(terms=((2, BinaryQuadraticForm(1, 0, 11)),), unary_t=11)
    with pytest.raises(ValueError):
        ThetaRecipe(terms=((1, BinaryQuadraticForm(1, 0, 11)),), unary_t=0)
