import math
from fractions import Fraction

import pytest

from regaut import (
    Certificate,
    InputError,
    MultiPoly,
    Place,
    PolyMap,
    RegularAutomorphism,
    build_certificate_n2,
    place_constants,
    upper_bound_constant,
    verify_certificate,
)
from regaut.places import certificate_coefficients, prime_factors

X = MultiPoly.variable(0, 2)
Y = MultiPoly.variable(1, 2)
ZERO2 = MultiPoly.zero(2)
ZERO3 = MultiPoly.zero(3)


def hand_certificate_m3():
    """X^3 = X*G_1 + T*(XY),  Y^3 = Y*F_2 + T*(XY) for the Henon pair."""
    XY3 = MultiPoly(3, {(1, 1, 0): 1})
    return Certificate(
        3,
        ((ZERO2, ZERO2), (ZERO2, Y)),
        ((X, ZERO2), (ZERO2, ZERO2)),
        (XY3, XY3),
    )


def test_hand_certificate_verifies(henon):
    assert verify_certificate(henon, hand_certificate_m3())


def test_perturbed_certificate_fails(henon):
    cert = hand_certificate_m3()
    bad_r = MultiPoly(3, {(1, 1, 0): 2})  # coefficient off by one
    bad = Certificate(cert.m, cert.P, cert.Q, (bad_r, cert.R[1]))
    assert not verify_certificate(henon, bad)


def test_wrong_degree_is_input_error(henon):
    cert = hand_certificate_m3()
    bad_p = ((ZERO2, ZERO2), (ZERO2, Y * Y))  # degree 2, expected m - d = 1
    with pytest.raises(InputError):
        verify_certificate(henon, Certificate(cert.m, bad_p, cert.Q, cert.R))


def test_builder_henon(henon):
    cert = build_certificate_n2(henon)
    assert cert.m <= 3
    assert verify_certificate(henon, cert)
    # deterministic: same input gives the same certificate
    again = build_certificate_n2(henon)
    assert again.m == cert.m and again.P == cert.P and again.Q == cert.Q


def test_builder_rejects_dimension_3(triple):
    with pytest.raises(InputError):
        build_certificate_n2(triple.aut)


def test_builder_composed_henon(henon):
    f2 = henon.forward.compose(henon.forward)
    g2 = henon.inverse.compose(henon.inverse)
    aut2 = RegularAutomorphism.validate(f2, g2)
    assert aut2.degree_forward == 4
    cert = build_certificate_n2(aut2)
    assert verify_certificate(aut2, cert)


def test_builder_scaled(scaled, scaled_cert):
    assert verify_certificate(scaled, scaled_cert)


def test_place_constants_good_prime(henon, henon_cert):
    pc = place_constants(henon_cert, Place.finite(5), henon)
    assert pc.C == 1.0 and pc.epsilon == 1.0 and pc.delta == 1.0
    assert pc.c_plus == pc.c_minus == pc.c_f == pc.c_finv == 0.0
    assert pc.epsilon_strict == 0.5 and pc.strict_halved


def test_place_constants_coefficient_half(scaled, scaled_cert):
    # the built certificate must carry a coefficient 1/2: the leading
    # form 2Y^2 can only produce Y^m with a halved cofactor
    assert any(
        c.denominator % 2 == 0 for c in certificate_coefficients(scaled_cert)
    )
    pc = place_constants(scaled_cert, Place.finite(2), scaled)
    mn = min(scaled.degree_forward, scaled.degree_inverse)
    assert pc.C == 2.0
    assert pc.epsilon == 0.5**mn
    assert pc.delta == 0.5 ** (mn * (mn - 1))
    assert pc.epsilon_strict == pc.epsilon / 2.0 and not pc.strict_halved


def test_place_constants_inequalities(henon, henon_cert, scaled, scaled_cert):
    cases = [
        (henon, henon_cert, Place.archimedean()),
        (henon, henon_cert, Place.finite(2)),
        (scaled, scaled_cert, Place.finite(2)),
        (scaled, scaled_cert, Place.archimedean()),
    ]
    for aut, cert, place in cases:
        pc = place_constants(cert, place, aut)
        d, dm = aut.degree_forward, aut.degree_inverse
        assert pc.C >= 1.0
        assert pc.epsilon <= 1 / pc.C + 1e-15
        assert pc.delta <= 1 / pc.C + 1e-15
        assert (pc.epsilon * pc.C) ** d <= pc.delta * (1 + 1e-12)
        assert (pc.epsilon * pc.C) ** dm <= pc.delta * (1 + 1e-12)
        # strict pair satisfies the same plus the strict threshold bounds
        assert pc.epsilon_strict < pc.epsilon or pc.C == 1.0
        assert pc.epsilon_strict ** (d - 1) < pc.delta
        assert pc.epsilon_strict ** (dm - 1) < pc.delta


def test_archimedean_constant_henon(henon, henon_cert):
    pc = place_constants(henon_cert, Place.archimedean(), henon)
    n, m = 2, henon_cert.m
    d, dm = 2, 2
    mp, mq, mr = henon_cert.max_abs_coeff_parts()
    cprime = max(
        math.comb(n + m - d - 1, m - d) * mp,
        math.comb(n + m - dm - 1, m - dm) * mq,
        math.comb(n + m, m - 1) * mr,
        1,
    )
    assert pc.C == pytest.approx((2 * n + 1) * float(cprime))


def test_exceptional_constant_set_is_finite(scaled, scaled_cert):
    denoms = set()
    for c in certificate_coefficients(scaled_cert):
        denoms.update(prime_factors(c.denominator))
    # every prime outside the denominator set gets C = 1
    from regaut.places import is_prime

    checked = 0
    p = 2
    while checked < 12:
        if is_prime(p) and p not in denoms:
            pc = place_constants(scaled_cert, Place.finite(p), scaled)
            assert pc.C == 1.0
            checked += 1
        p += 1
    for p in sorted(denoms):
        pc = place_constants(scaled_cert, Place.finite(p), scaled)
        assert pc.C > 1.0


def test_upper_bound_constant_examples(henon):
    assert upper_bound_constant(henon.forward, Place.finite(3)) == 0.0
    third = PolyMap([Y, Y * Y - Fraction(1, 3) * X])
    assert upper_bound_constant(third, Place.finite(3)) == pytest.approx(math.log(3))
    # integral Henon at infinity: monomial count comb(3,2) = 3, sup coeff 1
    assert upper_bound_constant(henon.forward, Place.archimedean()) == pytest.approx(
        math.log(3)
    )
