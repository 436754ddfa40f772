import math

import pytest
from hypothesis import assume, given, strategies as st

from conic_descent.pell import (
    Budget, BudgetExhausted, fundamental_unit, is_square, lmm, negative_unit, sqrt_mod,
)

nonsquare = st.integers(2, 400).filter(lambda D: not is_square(D))


@pytest.mark.parametrize("D, want", [(2, (3, 2)), (3, (2, 1)), (13, (649, 180)),
                                     (61, (1766319049, 226153980))])
def test_fundamental_unit_known(D, want):
    assert fundamental_unit(D) == want


@given(nonsquare)
def test_fundamental_unit_is_minimal(D):
    x, y = fundamental_unit(D)
    assert x * x - D * y * y == 1 and y > 0
    if y < 2000:
        assert not any(is_square(1 + D * k * k) for k in range(1, y))


@given(nonsquare)
def test_negative_unit_exists_iff_brute_force(D):
    x, y = fundamental_unit(D)
    neg = negative_unit(D)
    if neg is not None:
        assert neg[0] ** 2 - D * neg[1] ** 2 == -1
        # the square of the negative unit is the fundamental one
        assert (neg[0] ** 2 + D * neg[1] ** 2, 2 * neg[0] * neg[1]) == (x, y)
    assume(y < 20000)
    brute = next(((math.isqrt(D * k * k - 1), k) for k in range(1, y + 1)
                  if is_square(D * k * k - 1)), None)
    assert neg == brute


@given(st.integers(-200, 200), st.integers(1, 300))
def test_sqrt_mod_matches_enumeration(D, n):
    assert sorted(sqrt_mod(D, n)) == [z for z in range(n) if (z * z - D) % n == 0]


@given(nonsquare, st.integers(-60, 60).filter(bool))
def test_lmm_covers_brute_force_classes(D, N):
    """Every small solution is a fundamental one times a power of the unit."""
    fund = lmm(D, N)
    for X, Y in fund:
        assert X * X - D * Y * Y == N
    u, w = fundamental_unit(D)

    def reduce(X, Y):
        # walk down by the inverse unit until the representative stops shrinking
        while True:
            X2, Y2 = X * u - D * Y * w, Y * u - X * w
            if abs(Y2) >= abs(Y):
                return X, Y
            X, Y = X2, Y2

    classes = {(X, Y) for X, Y in fund} | {(-X, -Y) for X, Y in fund}
    reps = {reduce(X, Y) for X, Y in classes} | {reduce(X, -Y) for X, Y in classes} \
        | {reduce(-X, Y) for X, Y in classes}
    for Y in range(0, 60):
        r = N + D * Y * Y
        if is_square(r):
            X = math.isqrt(r)
            for s in (X, -X):
                assert reduce(s, Y) in reps or reduce(s, -Y) in reps


def test_budget():
    b = Budget(3)
    b.spend(3)
    with pytest.raises(BudgetExhausted):
        b.spend()
    with pytest.raises(BudgetExhausted):
        fundamental_unit(9949, Budget(5))


def test_errors():
    with pytest.raises(ValueError):
        fundamental_unit(16)
    with pytest.raises(ValueError):
        lmm(5, 0)
