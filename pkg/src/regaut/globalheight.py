"""Global canonical heights assembled from local Green values.

The canonical forward/backward heights of a rational point are sums of
local Green values over the finitely many contributing places: the
archimedean one, the flagged (bad or undecided) primes, and the primes
dividing a coordinate denominator.  At every other place the point is
integral, the reduction is good, and the local value is exactly zero,
which is what makes the global sum finite and cheap.

Every reported quantity carries an error radius; identities are asserted
up to summed radii, never by bare float comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .certificate import Certificate, PlaceConstants, place_constants
from .errors import InputError, ResourceLimitError, UndecidedError
from .localgreen import GreenValue, green, green_inverse
from .maps import DEFAULT_BIT_BUDGET, RegularAutomorphism, iterate, point_bits
from .places import Place, bad_place_set, prime_factors


class Certified(NamedTuple):
    """A value together with a radius certifying |true - value| <= radius."""

    value: float
    radius: float


def weil_height(x: Sequence) -> float:
    """Logarithmic height of a rational point, computed exactly.

    Clearing denominators turns the sum of local log+ norms into the log
    of a single integer: with common denominator b and numerators a_i,
    all divided by their overall gcd, h = log max(|a_1|, ..., |a_N|, b).
    """
    coords = [Fraction(c) for c in x]
    b = 1
    for c in coords:
        b = b * c.denominator // math.gcd(b, c.denominator)
    nums = [int(c * b) for c in coords]
    g = b
    for a in nums:
        g = math.gcd(g, a)
    m = max([abs(a) for a in nums] + [b]) // g
    return math.log(m)


def denominator_primes(x: Sequence) -> list:
    out: set = set()
    for c in x:
        out.update(prime_factors(Fraction(c).denominator))
    return sorted(out)


def support_places(aut: RegularAutomorphism, cert: Certificate, x: Sequence) -> tuple:
    """Places that can contribute to the height of x: all others give 0."""
    flagged = bad_place_set(aut, cert).all_flagged
    primes = sorted(set(flagged) | set(denominator_primes(x)))
    return (Place.archimedean(),) + tuple(Place.finite(p) for p in primes)


def flagged_constants(aut: RegularAutomorphism, cert: Certificate) -> dict:
    """PlaceConstants on the finite exceptional set S (arch + flagged primes)."""
    places = (Place.archimedean(),) + tuple(
        Place.finite(p) for p in bad_place_set(aut, cert).all_flagged
    )
    return {v: place_constants(cert, v, aut) for v in places}


@dataclass(frozen=True)
class HeightReport:
    h_plus: Certified
    h_minus: Certified
    h_f: Certified
    h_tilde: Certified
    per_place: dict  # Place -> (GreenValue forward, GreenValue backward)
    places_used: tuple
    direct_plus: float | None = None
    direct_minus: float | None = None
    direct_n: int | None = None

    @property
    def discrepancy_plus(self):
        return None if self.direct_plus is None else abs(self.direct_plus - self.h_plus.value)

    @property
    def discrepancy_minus(self):
        return None if self.direct_minus is None else abs(self.direct_minus - self.h_minus.value)

    def to_dict(self):
        return {
            "h_plus": {"value": self.h_plus.value, "radius": self.h_plus.radius},
            "h_minus": {"value": self.h_minus.value, "radius": self.h_minus.radius},
            "h_f": {"value": self.h_f.value, "radius": self.h_f.radius},
            "h_tilde": {"value": self.h_tilde.value, "radius": self.h_tilde.radius},
            "per_place": {
                str(v): {"forward": gf.to_dict(), "backward": gb.to_dict()}
                for v, (gf, gb) in self.per_place.items()
            },
            "places_used": [str(v) for v in self.places_used],
            "direct_plus": self.direct_plus,
            "direct_minus": self.direct_minus,
            "direct_n": self.direct_n,
        }


def canonical_heights(
    aut: RegularAutomorphism,
    cert: Certificate,
    x: Sequence,
    tolerance: float = 1e-6,
    *,
    iter_budget: int | None = None,
    bit_budget: int = DEFAULT_BIT_BUDGET,
    direct_check_n: int | None = 10,
) -> HeightReport:
    """Forward/backward/total canonical heights with per-place breakdown.

    The ``tolerance`` bounds the radius of the combined height h_f; each
    local Green evaluation gets an equal share.  ``direct_check_n``
    additionally evaluates the plain height of the n-th iterates scaled
    by the degrees, a brute-force cross-check of the local sums (skipped
    when the bit budget does not allow it, or when None).
    """
    if tolerance <= 0:
        raise InputError("tolerance must be positive")
    x = tuple(Fraction(c) for c in x)
    places = support_places(aut, cert, x)
    per_tol = tolerance / (2 * len(places))
    per_place = {}
    for v in places:
        consts = place_constants(cert, v, aut)
        gf = green(aut, consts, v, x, per_tol, iter_budget=iter_budget, bit_budget=bit_budget)
        gb = green_inverse(
            aut, consts, v, x, per_tol, iter_budget=iter_budget, bit_budget=bit_budget
        )
        per_place[v] = (gf, gb)
    h_plus = Certified(
        sum(gf.value for gf, _ in per_place.values()),
        sum(gf.error_radius for gf, _ in per_place.values()),
    )
    h_minus = Certified(
        sum(gb.value for _, gb in per_place.values()),
        sum(gb.error_radius for _, gb in per_place.values()),
    )
    h_f = Certified(h_plus.value + h_minus.value, h_plus.radius + h_minus.radius)
    h_tilde = Certified(
        sum(max(gf.value, gb.value) for gf, gb in per_place.values()),
        sum(max(gf.error_radius, gb.error_radius) for gf, gb in per_place.values()),
    )
    direct_plus = direct_minus = None
    n = direct_check_n
    if n:
        try:
            fward = iterate(aut, x, n, bit_budget=bit_budget)
            bward = iterate(aut, x, -n, bit_budget=bit_budget)
            direct_plus = weil_height(fward) / aut.degree_forward**n
            direct_minus = weil_height(bward) / aut.degree_inverse**n
        except ResourceLimitError:
            n = None
    else:
        n = None
    return HeightReport(
        h_plus, h_minus, h_f, h_tilde, per_place, places,
        direct_plus, direct_minus, n,
    )


@dataclass(frozen=True)
class FunctionalEquationResult:
    residual: float
    combined_radius: float
    at_x: HeightReport
    at_fx: HeightReport
    at_finvx: HeightReport

    def to_dict(self):
        return {"residual": self.residual, "combined_radius": self.combined_radius}


def functional_equation_check(
    aut: RegularAutomorphism,
    cert: Certificate,
    x: Sequence,
    tolerance: float = 1e-6,
    **green_opts,
) -> FunctionalEquationResult:
    """Residual of  h_f(f(x))/d + h_f(f^-1(x))/d_inv = (1 + 1/(d d_inv)) h_f(x)."""
    d, dm = aut.degree_forward, aut.degree_inverse
    x = tuple(Fraction(c) for c in x)
    r_x = canonical_heights(aut, cert, x, tolerance, **green_opts)
    r_fx = canonical_heights(aut, cert, aut.forward(x), tolerance, **green_opts)
    r_gx = canonical_heights(aut, cert, aut.inverse(x), tolerance, **green_opts)
    lam = 1 + 1 / (d * dm)
    residual = r_fx.h_f.value / d + r_gx.h_f.value / dm - lam * r_x.h_f.value
    combined = r_fx.h_f.radius / d + r_gx.h_f.radius / dm + lam * r_x.h_f.radius
    return FunctionalEquationResult(residual, combined, r_x, r_fx, r_gx)


@dataclass(frozen=True)
class GrowthCheckResult:
    c_theoretical: float
    max_violation: float
    worst_point: tuple | None

    def to_dict(self):
        return {
            "c_theoretical": self.c_theoretical,
            "max_violation": self.max_violation,
        }


def growth_inequality_check(
    aut: RegularAutomorphism, cert: Certificate, sample: Sequence
) -> GrowthCheckResult:
    """Check  h(f(x))/d + h(f^-1(x))/d_inv >= (1 + 1/(d d_inv)) h(x) - c.

    The constant c is assembled from the module constants on the
    exceptional set S: c = (1 + 1/(d d_inv)) * sum_S (max(c_f, c_finv) -
    min(c_plus, c_minus)).  Returns the largest violation (<= 0 means the
    inequality held everywhere, up to float slack).
    """
    if not sample:
        raise InputError("sample must be nonempty")
    d, dm = aut.degree_forward, aut.degree_inverse
    lam = 1 + 1 / (d * dm)
    c = lam * sum(
        max(pc.c_f, pc.c_finv) - min(pc.c_plus, pc.c_minus)
        for pc in flagged_constants(aut, cert).values()
    )
    worst = -math.inf
    worst_point = None
    for pt in sample:
        pt = tuple(Fraction(c0) for c0 in pt)
        lhs = weil_height(aut.forward(pt)) / d + weil_height(aut.inverse(pt)) / dm
        violation = lam * weil_height(pt) - c - lhs
        if violation > worst:
            worst, worst_point = violation, pt
    return GrowthCheckResult(c, worst, worst_point)


def growth_ratios(
    aut: RegularAutomorphism, x: Sequence, count: int, *, bit_budget: int = DEFAULT_BIT_BUDGET
) -> list:
    """(h(f(y))/d + h(f^-1(y))/d_inv) / h(y) along the forward orbit of x.

    Entry n is the ratio at y = f^n(x); entries with h(y) = 0 are None.
    """
    d, dm = aut.degree_forward, aut.degree_inverse
    pts = [iterate(aut, x, -1, bit_budget=bit_budget)]
    y = tuple(Fraction(c) for c in x)
    pts.append(y)
    for _ in range(count + 1):
        y = aut.forward(y)
        if point_bits(y) > bit_budget:
            raise ResourceLimitError("bit budget exceeded along the ratio probe")
        pts.append(y)
    heights = [weil_height(p) for p in pts]
    out = []
    for n in range(count + 1):
        h_prev, h_here, h_next = heights[n], heights[n + 1], heights[n + 2]
        if h_here == 0:
            out.append(None)
        else:
            out.append((h_next / d + h_prev / dm) / h_here)
    return out


@dataclass(frozen=True)
class OrbitRecord:
    representative: tuple
    is_periodic: bool
    period: int | None
    orbit_height: float | None
    report: HeightReport | None = None

    def to_dict(self):
        return {
            "representative": [str(c) for c in self.representative],
            "is_periodic": self.is_periodic,
            "period": self.period,
            "orbit_height": self.orbit_height,
        }


def periodic_height_bound(aut: RegularAutomorphism, cert: Certificate) -> float:
    """Explicit bound: every periodic rational point has height <= this."""
    return -sum(
        min(pc.c_plus, pc.c_minus) for pc in flagged_constants(aut, cert).values()
    )


def detect_periodic(
    aut: RegularAutomorphism,
    cert: Certificate,
    x: Sequence,
    *,
    tolerance: float = 1e-5,
    max_steps: int = 256,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> OrbitRecord:
    """Exact periodicity detection with a certified negative direction.

    Forward iterates are collected until either the orbit revisits a point
    (periodic, exact) or its height exceeds the explicit bound valid for
    all periodic points (certainly not periodic).  Non-periodic points are
    then certified by h_f > 3 * radius; anything less raises
    UndecidedError (tighten the tolerance and retry).
    """
    x = tuple(Fraction(c) for c in x)
    bound = periodic_height_bound(aut, cert) + 1e-9
    seen = {x: 0}
    y = x
    for n in range(1, max_steps + 1):
        y = aut.forward(y)
        if y in seen:
            if y != x:
                raise InputError("orbit revisited a non-initial point; map is not injective")
            return OrbitRecord(x, True, n - seen[y], None)
        if weil_height(y) > bound:
            break
        if point_bits(y) > bit_budget:
            raise ResourceLimitError("bit budget exceeded before a periodicity decision")
        seen[y] = n
    else:
        raise UndecidedError("no cycle found and heights stayed under the periodic bound")

    report = canonical_heights(aut, cert, x, tolerance, bit_budget=bit_budget)
    if report.h_f.value <= 3 * report.h_f.radius:
        raise UndecidedError(
            "height too close to zero to certify non-periodicity; tighten tolerance"
        )
    orbit_height = None
    hp, hm = report.h_plus, report.h_minus
    if hp.value > 3 * hp.radius and hm.value > 3 * hm.radius:
        d, dm = aut.degree_forward, aut.degree_inverse
        orbit_height = math.log(hp.value) / math.log(d) + math.log(hm.value) / math.log(dm)
    return OrbitRecord(x, False, None, orbit_height, report)


@dataclass(frozen=True)
class OrbitCountRow:
    T: float
    exact_count: int
    predicted: float
    residual: float
    truncated: bool

    def to_dict(self):
        return {
            "T": self.T,
            "exact_count": self.exact_count,
            "predicted": self.predicted,
            "residual": self.residual,
            "truncated": self.truncated,
        }


def orbit_counting(
    aut: RegularAutomorphism,
    cert: Certificate,
    x: Sequence,
    T_values: Sequence,
    *,
    tolerance: float = 1e-5,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> list:
    """Exact #{n in Z : h(f^n(x)) <= T} against the logarithmic prediction.

    Enumeration in each direction stops once the certified lower envelope
    d^n * (h_hat - radius) - sum_S c_f guarantees every later height
    exceeds max(T); rows whose T the envelope could not cover are flagged
    truncated.
    """
    rec = detect_periodic(
        aut, cert, x, tolerance=tolerance, bit_budget=bit_budget
    )
    if rec.is_periodic:
        raise InputError("orbit counting needs a non-periodic point")
    if rec.orbit_height is None:
        raise UndecidedError("forward or backward height not certified positive")
    report = rec.report
    d, dm = aut.degree_forward, aut.degree_inverse
    consts = flagged_constants(aut, cert)
    carry_f = sum(pc.c_f for pc in consts.values())
    carry_b = sum(pc.c_finv for pc in consts.values())
    t_max = max(T_values)

    def enumerate_dir(step: int, hhat: Certified, deg: int, carry: float):
        # h(f^n(x)) >= deg^n * (h_hat - radius) - carry for every n, so once
        # that envelope clears t_max no later height can contribute.
        lower = hhat.value - hhat.radius
        heights = []
        y = tuple(Fraction(c) for c in x)
        n = 0
        while True:
            envelope = deg**n * lower - carry
            if envelope > t_max:
                return heights, math.inf
            if step > 0 or n > 0:  # skip n=0 on the backward pass (counted forward)
                heights.append(weil_height(y))
            nxt = (aut.forward if step > 0 else aut.inverse)(y)
            if point_bits(nxt) > bit_budget:
                return heights, envelope
            y = nxt
            n += 1

    fwd_heights, fwd_cover = enumerate_dir(+1, report.h_plus, d, carry_f)
    bwd_heights, bwd_cover = enumerate_dir(-1, report.h_minus, dm, carry_b)
    log_d, log_dm = math.log(d), math.log(dm)
    rows = []
    for T in T_values:
        if T <= 0:
            raise InputError("T values must be positive")
        count = sum(1 for h in fwd_heights if h <= T) + sum(
            1 for h in bwd_heights if h <= T
        )
        predicted = (1 / log_d + 1 / log_dm) * math.log(T) - rec.orbit_height
        truncated = T >= min(fwd_cover, bwd_cover)
        rows.append(OrbitCountRow(float(T), count, predicted, count - predicted, truncated))
    return rows
