"""Places of Q: the archimedean absolute value and the p-adic ones.

Finite-place magnitudes are powers of p and are handled through exact
integer valuations; logarithms of big integers are computed directly (the
math module handles arbitrary precision ints), so archimedean log norms
never overflow.  The good-reduction test follows a two-tier strategy:
an integral membership certificate settles condition (iii) at once, and
for dimension 2 a leading-form gcd over F_p decides the remaining cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .forms import binary_gcd_nonconstant_mod_p
from .maps import PolyMap, RegularAutomorphism

# -- primality and factoring ---------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for all 64-bit-and-beyond desk inputs)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list:
    """Distinct prime factors of |n| (trial division, then Pollard rho)."""
    n = abs(n)
    if n == 0:
        return []
    out = set()
    for p in (2, 3, 5):
        while n % p == 0:
            out.add(p)
            n //= p
    d = 7
    while d * d <= n and d < 100_000:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 2
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                out.add(m)
                continue
            stack.extend(_pollard_split(m))
    return sorted(out)


def _pollard_split(n: int) -> tuple:
    if n % 2 == 0:
        return 2, n // 2
    c = 1
    while True:
        x, y, d = 2, 2, 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d, n // d
        c += 1


# -- places ---------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """The archimedean place (p is None) or the p-adic place of a prime p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")

    @classmethod
    def archimedean(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(int(p))

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    def __str__(self):
        return "inf" if self.p is None else str(self.p)


def parse_place(text: str) -> Place:
    text = text.strip().lower()
    if text in ("inf", "infinity", "oo", "arch"):
        return Place.archimedean()
    try:
        return Place.finite(int(text))
    except ValueError as exc:
        raise InputError(f"cannot parse place {text!r}") from exc


# -- valuations and norms --------------------------------------------------------


def val_int(n: int, p: int):
    """p-adic valuation of an integer; None encodes +infinity (n = 0)."""
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def val_fraction(q, p: int):
    q = Fraction(q)
    if q == 0:
        return None
    return val_int(q.numerator, p) - val_int(q.denominator, p)


def abs_p(q, p: int) -> Fraction:
    """Exact p-adic absolute value as a Fraction."""
    v = val_fraction(q, p)
    if v is None:
        return Fraction(0)
    return Fraction(p) ** -v


def log_abs(q) -> float:
    """Natural log of |q| at the archimedean place; -inf for zero."""
    q = Fraction(q)
    if q == 0:
        return -math.inf
    return math.log(abs(q.numerator)) - math.log(q.denominator)


def sup_norm_exponent(x: Sequence, p: int):
    """k with ||x||_p = p^k, or None for the zero vector."""
    best = None
    for c in x:
        v = val_fraction(c, p)
        if v is None:
            continue
        k = -v
        if best is None or k > best:
            best = k
    return best


def log_sup_norm(x: Sequence, place: Place) -> float:
    """log ||x||_v (can be -inf for the zero vector)."""
    if place.is_finite:
        k = sup_norm_exponent(x, place.p)
        return -math.inf if k is None else k * math.log(place.p)
    return max((log_abs(c) for c in x), default=-math.inf)


@dataclass(frozen=True)
class LogNorm:
    """A log+ norm value; exact integer multiple of log p at finite places."""

    value: float
    p: int | None = None
    exponent: int | None = None  # value == exponent * log(p) when finite


def point_lognorm(x: Sequence, place: Place) -> LogNorm:
    """log+ ||x||_v = log max(||x||_v, 1)."""
    if place.is_finite:
        k = sup_norm_exponent(x, place.p)
        e = max(k, 0) if k is not None else 0
        return LogNorm(e * math.log(place.p), place.p, e)
    return LogNorm(max(0.0, log_sup_norm(x, place)))


# -- good reduction ---------------------------------------------------------------


def _map_integral_at(f: PolyMap, p: int) -> bool:
    return all(
        c.denominator % p != 0 for q in f.components for c in q.terms.values()
    )


def _degree_preserved(f: PolyMap, p: int) -> bool:
    """Some leading-form coefficient is a p-adic unit (given integrality)."""
    for form in f.top_forms():
        for c in form.terms.values():
            if c.numerator % p != 0 and c.denominator % p != 0:
                return True
    return False


def _certificate_integral_at(cert, p: int) -> bool:
    return all(c.denominator % p != 0 for c in certificate_coefficients(cert))


def certificate_coefficients(cert):
    for row in cert.P:
        for poly in row:
            yield from poly.terms.values()
    for row in cert.Q:
        for poly in row:
            yield from poly.terms.values()
    for poly in cert.R:
        yield from poly.terms.values()


@dataclass(frozen=True)
class ReductionReport:
    prime: int
    integral_forward: bool
    integral_inverse: bool
    degree_preserved_forward: bool
    degree_preserved_inverse: bool
    reduced_regular: bool | None  # None = undecided
    verdict: str  # "good" | "bad" | "undecided"
    reason: str = ""

    def to_dict(self):
        return {
            "prime": self.prime,
            "integral_forward": self.integral_forward,
            "integral_inverse": self.integral_inverse,
            "degree_preserved_forward": self.degree_preserved_forward,
            "degree_preserved_inverse": self.degree_preserved_inverse,
            "reduced_regular": self.reduced_regular,
            "verdict": self.verdict,
            "reason": self.reason,
        }


def good_reduction_test(aut: RegularAutomorphism, cert, p: int) -> ReductionReport:
    """Decide good reduction of the automorphism at the prime p.

    Conditions: (i) map and inverse p-integral, (ii) their reductions keep
    degrees d and d_inv, (iii) the reduced pair is regular.  Condition
    (iii) is granted outright when the membership certificate is
    p-integral; otherwise, in dimension 2, it is decided by a leading-form
    gcd over F_p; higher dimensions stay undecided.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    int_f = _map_integral_at(aut.forward, p)
    int_g = _map_integral_at(aut.inverse, p)
    if not (int_f and int_g):
        which = [] if int_f else ["forward"]
        if not int_g:
            which.append("inverse")
        return ReductionReport(
            p, int_f, int_g, False, False, None, "bad",
            f"non-integral coefficients in {' and '.join(which)} map",
        )
    deg_f = _degree_preserved(aut.forward, p)
    deg_g = _degree_preserved(aut.inverse, p)
    if not (deg_f and deg_g):
        return ReductionReport(
            p, True, True, deg_f, deg_g, None, "bad",
            "degree drops under reduction",
        )
    if _certificate_integral_at(cert, p):
        return ReductionReport(
            p, True, True, True, True, True, "good",
            "integral membership certificate",
        )
    if aut.dimension == 2:
        regular = not _reduced_pair_shares_zero(aut, p)
        verdict = "good" if regular else "bad"
        reason = "reduced pair regular (F_p gcd)" if regular else "reduction not regular"
        return ReductionReport(p, True, True, True, True, regular, verdict, reason)
    return ReductionReport(
        p, True, True, True, True, None, "undecided",
        "certificate not integral at p and no gcd route above dimension 2",
    )


def _reduced_pair_shares_zero(aut: RegularAutomorphism, p: int) -> bool:
    all_forms = list(aut.top_forms_forward) + list(aut.top_forms_inverse)
    return binary_gcd_nonconstant_mod_p(all_forms, p)


@dataclass(frozen=True)
class BadPlaces:
    bad: tuple
    undecided: tuple
    reports: dict  # prime -> ReductionReport for every candidate examined

    @property
    def all_flagged(self) -> tuple:
        return tuple(sorted(set(self.bad) | set(self.undecided)))


def bad_place_set(aut: RegularAutomorphism, cert) -> BadPlaces:
    """Exhaustive finite set of primes of bad or undecided reduction.

    Candidates: primes dividing any coefficient denominator of the map,
    its inverse, or the certificate, or dividing a leading-form
    coefficient numerator.  Every other prime passes the good-reduction
    test by construction.
    """
    cands: set = set()
    for q in aut.forward.components + aut.inverse.components:
        for c in q.terms.values():
            cands.update(prime_factors(c.denominator))
    for c in certificate_coefficients(cert):
        cands.update(prime_factors(c.denominator))
    for form in aut.top_forms_forward + aut.top_forms_inverse:
        for c in form.terms.values():
            cands.update(prime_factors(c.numerator))
            cands.update(prime_factors(c.denominator))
    reports = {p: good_reduction_test(aut, cert, p) for p in sorted(cands)}
    bad = tuple(p for p, r in reports.items() if r.verdict == "bad")
    und = tuple(p for p, r in reports.items() if r.verdict == "undecided")
    return BadPlaces(bad, und, reports)
