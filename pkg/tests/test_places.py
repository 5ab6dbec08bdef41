import math
from fractions import Fraction

import pytest

from regaut import (
    Certificate,
    InputError,
    MultiPoly,
    Place,
    bad_place_set,
    good_reduction_test,
    parse_place,
    point_lognorm,
)
from regaut.places import abs_p, is_prime, log_abs, prime_factors, val_fraction


def test_is_prime():
    primes = {2, 3, 5, 7, 11, 13, 97, 101, 7919}
    for n in range(2, 120):
        assert is_prime(n) == all(n % d for d in range(2, n)) or n in primes
    assert is_prime(2**61 - 1)
    assert not is_prime(2**67 - 1)
    assert not is_prime(1) and not is_prime(0) and not is_prime(-7)


def test_place_construction():
    assert Place.archimedean().p is None
    assert Place.finite(7).p == 7
    with pytest.raises(InputError):
        Place.finite(6)
    assert parse_place("inf").p is None
    assert parse_place(" 13 ").p == 13


def test_valuations():
    assert val_fraction(Fraction(12), 2) == 2
    assert val_fraction(Fraction(1, 8), 2) == -3
    assert val_fraction(Fraction(0), 5) is None
    assert abs_p(Fraction(1, 2), 2) == 2
    assert abs_p(Fraction(9, 5), 3) == Fraction(1, 9)


def test_point_lognorm_examples():
    x = (Fraction(1, 2), Fraction(3))
    ln2 = point_lognorm(x, Place.finite(2))
    assert ln2.exponent == 1 and ln2.value == pytest.approx(math.log(2))
    ln3 = point_lognorm(x, Place.finite(3))
    assert ln3.exponent == 0 and ln3.value == 0.0
    lninf = point_lognorm((Fraction(2, 3), Fraction(5)), Place.archimedean())
    assert lninf.value == pytest.approx(math.log(5))
    assert point_lognorm((0, 0), Place.archimedean()).value == 0.0


def test_product_formula():
    for a in (Fraction(12, 35), Fraction(-9, 8), Fraction(100, 7)):
        total = log_abs(a)
        for p in set(prime_factors(a.numerator)) | set(prime_factors(a.denominator)):
            total += -val_fraction(a, p) * math.log(p)
        assert total == pytest.approx(0.0, abs=1e-12)


def test_good_reduction_henon(henon, henon_cert):
    for p in (2, 3, 5, 97):
        rep = good_reduction_test(henon, henon_cert, p)
        assert rep.verdict == "good", rep
        assert rep.reduced_regular is True


def test_good_reduction_bad_prime(henon_two, henon_two_cert):
    rep = good_reduction_test(henon_two, henon_two_cert, 2)
    assert rep.verdict == "bad"
    assert not rep.integral_inverse and rep.integral_forward
    assert "inverse" in rep.reason
    rep3 = good_reduction_test(henon_two, henon_two_cert, 3)
    assert rep3.verdict == "good"


def test_degree_drop_detected(scaled, scaled_cert):
    # (y, 2y^2 - x) reduces mod 2 to a degree-1 map
    rep = good_reduction_test(scaled, scaled_cert, 2)
    assert rep.verdict == "bad"
    assert rep.integral_forward and rep.integral_inverse
    assert not rep.degree_preserved_forward


def test_bad_place_set(henon, henon_cert, henon_two, henon_two_cert):
    assert bad_place_set(henon, henon_cert).all_flagged == ()
    report = bad_place_set(henon_two, henon_two_cert)
    assert report.bad == (2,)
    assert report.undecided == ()


def test_bad_place_set_complement_spot_check(henon, henon_cert):
    flagged = set(bad_place_set(henon, henon_cert).all_flagged)
    checked = 0
    p = 2
    while checked < 20:
        if is_prime(p) and p not in flagged:
            assert good_reduction_test(henon, henon_cert, p).verdict == "good"
            checked += 1
        p += 1


def test_dimension3_undecided_with_nonintegral_certificate(triple):
    aut = triple.aut
    X, Y = MultiPoly.variable(0, 3), MultiPoly.variable(1, 3)
    cert = triple.certificate
    # alternative valid certificate with 3-denominators in the first row:
    # P_00 = X^2 + (1/3) Y^2, P_01 = -(1/3) X^2 keeps the top-form identity
    third = Fraction(1, 3)
    p00 = X * X + third * (Y * Y)
    p01 = -third * (X * X)
    r0 = MultiPoly(
        4,
        {
            (2, 0, 1, 0): -1,           # -X^2 Z
            (0, 2, 1, 0): -third,       # -(1/3) Y^2 Z
            (3, 0, 0, 0): third,        # +(1/3) X^3
        },
    )
    alt = Certificate(
        cert.m,
        ((p00, p01, MultiPoly.zero(3)),) + cert.P[1:],
        cert.Q,
        (r0,) + cert.R[1:],
    )
    from regaut import verify_certificate

    assert verify_certificate(aut, alt)
    rep = good_reduction_test(aut, alt, 3)
    assert rep.verdict == "undecided"
    assert rep.integral_forward and rep.degree_preserved_inverse
    report = bad_place_set(aut, alt)
    assert report.undecided == (3,)
    assert report.bad == ()


def test_triple_integral_certificate_good_everywhere(triple):
    assert bad_place_set(triple.aut, triple.certificate).all_flagged == ()
