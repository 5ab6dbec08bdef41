import random
from fractions import Fraction

import pytest

from regaut import InputError, MultiPoly
from regaut.forms import (
    binary_form_gcd,
    binary_gcd_many,
    binary_gcd_nonconstant_mod_p,
    is_constant_form,
    rational_linear_factors,
    solve_homogeneous_membership,
)

X = MultiPoly.variable(0, 2)
Y = MultiPoly.variable(1, 2)


def test_gcd_with_zero_and_coprime():
    y2 = Y * Y
    x2 = X * X
    assert binary_form_gcd(MultiPoly.zero(2), y2) == y2
    g = binary_form_gcd(y2, x2)
    assert is_constant_form(g)


def test_gcd_common_factor():
    a = X * (X + Y)
    b = X * (X - Y)
    g = binary_form_gcd(a, b)
    assert g == X


def test_gcd_is_a_common_divisor_property():
    rng = random.Random(3)
    lin = lambda: MultiPoly(2, {(1, 0): rng.randint(-3, 3), (0, 1): rng.randint(-3, 3)})
    for _ in range(30):
        common = lin()
        if common.is_zero:
            continue
        a = common * lin()
        b = common * lin()
        if a.is_zero or b.is_zero:
            continue
        g = binary_gcd_many([a, b])
        # common divides the gcd: solving g = u * common exactly
        deg_g = g.homogeneous_degree()
        assert deg_g >= common.homogeneous_degree()
        sol = solve_homogeneous_membership([common], g, deg_g)
        assert sol is not None


def test_non_homogeneous_rejected():
    with pytest.raises(InputError):
        binary_form_gcd(X + Y * Y, X)


def test_rational_linear_factors():
    form = (X - 2 * Y) * (X - 2 * Y) * Y
    factors, remainder = rational_linear_factors(form)
    assert is_constant_form(remainder)
    as_set = {(tuple(map(int, ab)), m) for ab, m in factors}
    # X - 2Y has (alpha, beta) = (1, -2); Y is (0, 1)
    assert ((1, -2), 2) in as_set
    assert ((0, 1), 1) in as_set
    # irreducible quadratic stays in the remainder
    factors2, rem2 = rational_linear_factors(X * X + Y * Y)
    assert factors2 == []
    assert rem2 == X * X + Y * Y


def test_gcd_mod_p():
    # (0, Y^2) vs (X^2, 0): no shared zero mod any p
    assert not binary_gcd_nonconstant_mod_p([MultiPoly.zero(2), Y * Y, X * X], 5)
    # X*Y and X*(X+Y) share X = 0
    assert binary_gcd_nonconstant_mod_p([X * Y, X * (X + Y)], 7)
    # (X - 5Y) and X become proportional mod 5
    assert binary_gcd_nonconstant_mod_p([X - 5 * Y, X], 5)
    assert not binary_gcd_nonconstant_mod_p([X - 5 * Y, X], 3)


def test_membership_solver_basic():
    # X^3 in (X^2, Y^2): X * X^2
    sol = solve_homogeneous_membership([X * X, Y * Y], MultiPoly(2, {(3, 0): 1}), 3)
    assert sol is not None
    acc = MultiPoly.zero(2)
    for u, g in zip(sol, [X * X, Y * Y]):
        acc = acc + u * g
    assert acc == MultiPoly(2, {(3, 0): 1})
    # XY is not in (X^2, Y^2) in degree 2
    assert solve_homogeneous_membership([X * X, Y * Y], X * Y, 2) is None


def test_membership_solver_three_vars():
    Z = MultiPoly.variable(2, 3)
    X3 = MultiPoly.variable(0, 3)
    gens = [X3 * X3, Z * Z * Z]
    target = MultiPoly(3, {(2, 0, 1): Fraction(5)})
    sol = solve_homogeneous_membership(gens, target, 3)
    acc = MultiPoly.zero(3)
    for u, g in zip(sol, gens):
        acc = acc + u * g
    assert acc == target
