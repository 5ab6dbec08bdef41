import random
from fractions import Fraction

import pytest

from regaut import (
    InputError,
    MultiPoly,
    NotRegularError,
    PolyMap,
    RegularAutomorphism,
    ResourceLimitError,
    algebraic_stability_degrees,
    iterate,
    regularity_check,
    verify_inverse,
)

X = MultiPoly.variable(0, 2)
Y = MultiPoly.variable(1, 2)


def test_verify_inverse():
    f = PolyMap([Y, Y * Y - X])
    g = PolyMap([X * X - Y, X])
    assert verify_inverse(f, g)
    ident = PolyMap.identity(2)
    assert verify_inverse(ident, ident)
    assert not verify_inverse(f, PolyMap([X, Y]))


def test_regularity_henon(henon):
    v = regularity_check(henon.forward, henon.inverse)
    assert v.is_regular
    assert "(1:0:0)" in v.iplus
    assert "(0:1:0)" in v.iminus


def test_regularity_elementary(elementary_map, elementary_inverse):
    assert verify_inverse(elementary_map, elementary_inverse)
    v = regularity_check(elementary_map, elementary_inverse)
    assert v.status == "not_regular"
    assert v.witness is not None
    with pytest.raises(NotRegularError):
        RegularAutomorphism.validate(elementary_map, elementary_inverse)


def test_regularity_symmetric(henon):
    v = regularity_check(henon.forward, henon.inverse)
    w = regularity_check(henon.inverse, henon.forward)
    assert w.is_regular
    assert (v.iplus, v.iminus) == (w.iminus, w.iplus)


def test_regularity_requires_inverse_pair():
    f = PolyMap([Y, Y * Y - X])
    with pytest.raises(InputError):
        regularity_check(f, f)


def test_dimension_three_undecided():
    Z3 = [MultiPoly.variable(i, 3) for i in range(3)]
    x, y, z = Z3
    f = PolyMap([x * x + z, y * y + x, y])
    g = PolyMap([y - z * z, z, x - y * y + 2 * (y * (z * z)) - (z**2) ** 2])
    assert verify_inverse(f, g)
    assert regularity_check(f, g).status == "undecided"


def test_degree_two_required():
    lin = PolyMap([Y, X])
    with pytest.raises(InputError):
        RegularAutomorphism.validate(lin, lin)


def test_iterate_examples(henon):
    assert iterate(henon, (0, 2), 3) == (14, 192)
    assert iterate(henon, (Fraction(3), Fraction(-5, 7)), 0) == (3, Fraction(-5, 7))
    assert iterate(henon, (2, 2), 5) == (2, 2)


def test_iterate_group_law(henon):
    rng = random.Random(9)
    for _ in range(10):
        x = (Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
             Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        m, n = rng.randint(-3, 3), rng.randint(-3, 3)
        lhs = iterate(henon, iterate(henon, x, m), n)
        assert lhs == iterate(henon, x, m + n)


def test_iterate_bit_budget(henon):
    with pytest.raises(ResourceLimitError) as info:
        iterate(henon, (0, 2), 40, bit_budget=10_000)
    assert info.value.last_index is not None
    assert info.value.partial is not None


def test_stability_degrees(henon, elementary_map):
    assert algebraic_stability_degrees(henon.forward, 3) == (2, 4, 8)
    assert algebraic_stability_degrees(elementary_map, 3) == (2, 2, 2)
    with pytest.raises(InputError):
        algebraic_stability_degrees(PolyMap([Y, X]), 3)


def test_stability_matches_degree_powers_for_regular(henon):
    d = henon.degree_forward
    degs = algebraic_stability_degrees(henon.forward, 4)
    assert degs == tuple(d**n for n in range(1, 5))


def test_swapped_view(henon):
    sw = henon.swapped()
    assert sw.forward is henon.inverse
    assert sw.degree_forward == henon.degree_inverse
    assert sw.swapped() is henon
