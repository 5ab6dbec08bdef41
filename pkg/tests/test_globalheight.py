import math
import random
from fractions import Fraction

import pytest

from regaut import (
    InputError,
    Place,
    UndecidedError,
    canonical_heights,
    detect_periodic,
    functional_equation_check,
    growth_inequality_check,
    growth_ratios,
    iterate,
    orbit_counting,
    support_places,
    weil_height,
)
from tests.conftest import rational_points


def test_weil_height_examples():
    assert weil_height((0, 0)) == 0.0
    assert weil_height((Fraction(2, 3), Fraction(5))) == pytest.approx(math.log(15))
    assert weil_height((7, 7)) == pytest.approx(math.log(7))
    assert weil_height((Fraction(-2, 3),)) == pytest.approx(math.log(3))


def test_weil_height_is_sum_of_local_lognorms():
    from regaut import point_lognorm
    from regaut.globalheight import denominator_primes

    rng = random.Random(3)
    for x in rational_points(30, seed=5, bound=60):
        total = point_lognorm(x, Place.archimedean()).value
        for p in denominator_primes(x):
            total += point_lognorm(x, Place.finite(p)).value
        assert weil_height(x) == pytest.approx(total, abs=1e-10)


def test_canonical_heights_fixed_point(henon, henon_cert):
    for pt in ((2, 2), (0, 0)):
        rep = canonical_heights(henon, henon_cert, pt, 1e-9)
        assert rep.h_f.value <= rep.h_f.radius
        assert rep.h_f.radius <= 1e-9
        assert rep.h_plus.value >= 0 and rep.h_minus.value >= 0


def test_canonical_heights_support(henon, henon_cert):
    rep = canonical_heights(henon, henon_cert, (Fraction(1, 2), 0), 1e-5)
    assert {str(v) for v in rep.places_used} == {"inf", "2"}
    gf, gb = rep.per_place[Place.finite(2)]
    assert gf.value == pytest.approx(0.5 * math.log(2), abs=1e-10)
    assert gf.log_p_coefficient == Fraction(1, 2)


def test_decomposition_vs_direct_limit(henon, henon_cert):
    x = (0, 2)
    rep = canonical_heights(
        henon, henon_cert, x, 2e-5, bit_budget=8_000_000, direct_check_n=14
    )
    assert rep.direct_plus is not None
    assert rep.discrepancy_plus <= rep.h_plus.radius + 13.1 / 2**14
    assert rep.discrepancy_minus <= rep.h_minus.radius + 13.1 / 2**14
    assert rep.h_f.value == rep.h_plus.value + rep.h_minus.value


def test_functional_equation(henon, henon_cert):
    for x in ((2, 2), (0, 2), (Fraction(1, 2), 0)):
        res = functional_equation_check(
            henon, henon_cert, x, 1e-4, bit_budget=8_000_000, direct_check_n=None
        )
        assert abs(res.residual) <= res.combined_radius + 1e-12


def test_growth_inequality(henon, henon_cert):
    sample = rational_points(300, seed=11, bound=100) + [(2, 2), (0, 2)]
    out = growth_inequality_check(henon, henon_cert, sample)
    assert out.c_theoretical > 0
    assert out.max_violation <= 1e-9


def test_growth_inequality_fixed_point_only(henon, henon_cert):
    out = growth_inequality_check(henon, henon_cert, [(2, 2)])
    assert out.max_violation <= 0  # reads 0 >= -c


def test_growth_ratio_probe(henon):
    ratios = growth_ratios(henon, (0, 2), 12)
    lam = 1 + 1 / 4
    assert abs(ratios[-1] - lam) < 0.05
    assert abs(ratios[12] - lam) < 0.05


def test_detect_periodic_fixed_points(henon, henon_cert):
    for pt in ((2, 2), (0, 0)):
        rec = detect_periodic(henon, henon_cert, pt)
        assert rec.is_periodic and rec.period == 1
        assert rec.orbit_height is None


def test_detect_periodic_two_cycle(henon, henon_cert):
    # f(x, y) = (y, y^2 - x) swaps (a, b) and (b, a) when a = b^2 - b - 1...
    # direct search: f(a,b) = (b, b^2 - a) = (b, a) needs a = b^2 - a, i.e.
    # a = b^2/2; then f(b, a) = (a, a^2 - b) = (a, b) needs b = a^2 - b.
    # Solving exactly: a = b^2/2 and 2b = a^2 = b^4/4 -> b^3 = 8 -> b = 2,
    # a = 2: that is the fixed point. Use the other Henon two-cycle family:
    # points of period 2 for this signature satisfy x + y = 1 with
    # x, y roots of t^2 - t - 1... verify by brute force over small rationals
    found = None
    for num in range(-8, 9):
        for den in (1, 2):
            a = Fraction(num, den)
            for num2 in range(-8, 9):
                b = Fraction(num2, den)
                pt = (a, b)
                if iterate(henon, pt, 2) == pt and iterate(henon, pt, 1) != pt:
                    found = pt
                    break
            if found:
                break
        if found:
            break
    if found is None:
        pytest.skip("no small rational two-cycle for this map")
    rec = detect_periodic(henon, henon_cert, found)
    assert rec.is_periodic and rec.period == 2


def test_detect_periodic_escaping_point(henon, henon_cert):
    rec = detect_periodic(henon, henon_cert, (0, 2), tolerance=1e-4, bit_budget=8_000_000)
    assert not rec.is_periodic
    assert rec.report.h_f.value > 0.3
    assert rec.orbit_height is not None


def test_orbit_height_invariant_exact_padic_part(henon, henon_cert):
    # the exact finite-place coefficient doubles under one forward step
    from regaut import green

    x = (Fraction(1, 2), 0)
    g_x = green(henon, henon_cert, Place.finite(2), x, 1e-10)
    g_fx = green(henon, henon_cert, Place.finite(2), henon.forward(x), 1e-10)
    assert g_fx.log_p_coefficient == 2 * g_x.log_p_coefficient


def test_orbit_height_invariance_under_shift(henon, henon_cert):
    rec_x = detect_periodic(henon, henon_cert, (0, 2), tolerance=1e-5, bit_budget=16_000_000)
    rec_fx = detect_periodic(
        henon, henon_cert, henon.forward((0, 2)), tolerance=1e-5, bit_budget=16_000_000
    )
    # identical up to the propagated first-order radii of the logs
    def log_radius(rep):
        out = 0.0
        for h, d in ((rep.h_plus, 2), (rep.h_minus, 2)):
            out += (h.radius / (h.value - h.radius)) / math.log(d)
        return out

    bound = log_radius(rec_x.report) + log_radius(rec_fx.report)
    assert abs(rec_x.orbit_height - rec_fx.orbit_height) <= bound


def test_orbit_counting(henon, henon_cert):
    ts = [math.e**5, math.e**8]
    rows = orbit_counting(
        henon, henon_cert, (0, 2), ts, tolerance=1e-4, bit_budget=16_000_000
    )
    # independent enumeration oracle over a wide fixed window
    heights = {}
    for n in range(0, 16):
        heights[n] = weil_height(iterate(henon, (0, 2), n, bit_budget=16_000_000))
    for n in range(1, 16):
        heights[-n] = weil_height(iterate(henon, (0, 2), -n, bit_budget=16_000_000))
    for row, t in zip(rows, ts):
        brute = sum(1 for h in heights.values() if h <= t)
        assert row.exact_count == brute
        assert not row.truncated
        assert abs(row.residual) <= 2


def test_orbit_counting_low_threshold(henon, henon_cert):
    rows = orbit_counting(
        henon, henon_cert, (0, 2), [1.1], tolerance=1e-4, bit_budget=16_000_000
    )
    # below the smallest orbit height the count keeps only the low核 core
    assert rows[0].exact_count >= 0
    assert abs(rows[0].residual) < 6


def test_orbit_counting_rejects_periodic(henon, henon_cert):
    with pytest.raises(InputError):
        orbit_counting(henon, henon_cert, (2, 2), [10.0])


def test_support_places(henon, henon_cert):
    places = support_places(henon, henon_cert, (Fraction(3), Fraction(-5, 7)))
    assert {str(v) for v in places} == {"inf", "7"}
