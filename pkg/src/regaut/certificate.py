"""Membership certificates and the quantitative constants they induce.

A certificate for an automorphism pair (f, f^{-1}) of degrees (d, d_inv)
consists of an exponent m and homogeneous polynomial matrices P (degree
m-d), Q (degree m-d_inv) and a vector R (degree m-1, in one extra
variable T) satisfying, for each coordinate i,

    sum_j P_ij * F_j  +  sum_j Q_ij * G_j  +  T * R_i  =  X_i^m,

where F_j, G_j are the homogenized components of the map and its
inverse.  Such data exists exactly when the pair is regular, and the
sizes of its coefficients drive every local estimate: the constant C at
a place is the largest absolute value of a certificate coefficient
(binomially weighted at the archimedean place), and the thresholds
(epsilon, delta) and growth constants below are fixed functions of C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .forms import solve_homogeneous_membership
from .maps import PolyMap, RegularAutomorphism
from .places import (
    Place,
    certificate_coefficients,
    good_reduction_test,
    val_fraction,
)
from .poly import MultiPoly, divide_by_last_var

MAX_BUILD_EXPONENT_SLACK = 2  # builder scans m up to d + d_inv - 1 (+ slack)


@dataclass(frozen=True)
class Certificate:
    """Exponent m plus the (P, Q, R) polynomial data described above."""

    m: int
    P: tuple  # N x N, MultiPoly in N variables
    Q: tuple  # N x N, MultiPoly in N variables
    R: tuple  # N, MultiPoly in N+1 variables

    @property
    def dimension(self) -> int:
        return len(self.R)

    def max_abs_coeff_parts(self):
        """(max |P| coeff, max |Q| coeff, max |R| coeff) as Fractions."""
        mp = max((q.max_abs_coeff() for row in self.P for q in row), default=Fraction(0))
        mq = max((q.max_abs_coeff() for row in self.Q for q in row), default=Fraction(0))
        mr = max((q.max_abs_coeff() for q in self.R), default=Fraction(0))
        return mp, mq, mr


def _shape_check(n: int, d: int, dm: int, cert: Certificate):
    if len(cert.P) != n or len(cert.Q) != n or len(cert.R) != n:
        raise InputError("certificate shape does not match the dimension")
    for row in cert.P:
        if len(row) != n:
            raise InputError("certificate P matrix must be N x N")
    for row in cert.Q:
        if len(row) != n:
            raise InputError("certificate Q matrix must be N x N")
    m = cert.m
    if m < max(d, dm):
        raise InputError(f"certificate exponent m={m} below map degrees")
    for row in cert.P:
        for q in row:
            if q.nvars != n:
                raise InputError("P entries must live in N variables")
            deg = q.homogeneous_degree()
            if deg is not None and deg != m - d:
                raise InputError(
                    f"P entry has degree {deg}, expected homogeneous of degree {m - d}"
                )
    for row in cert.Q:
        for q in row:
            if q.nvars != n:
                raise InputError("Q entries must live in N variables")
            deg = q.homogeneous_degree()
            if deg is not None and deg != m - dm:
                raise InputError(
                    f"Q entry has degree {deg}, expected homogeneous of degree {m - dm}"
                )
    for q in cert.R:
        if q.nvars != n + 1:
            raise InputError("R entries must live in N+1 variables")
        deg = q.homogeneous_degree()
        if deg is not None and deg != m - 1:
            raise InputError(
                f"R entry has degree {deg}, expected homogeneous of degree {m - 1}"
            )


def verify_certificate_for_maps(f: PolyMap, g: PolyMap, cert: Certificate) -> bool:
    """Certificate check against a raw inverse pair (pre-validation form)."""
    n = f.dimension
    if g.dimension != n:
        raise InputError("map pair dimension mismatch")
    _shape_check(n, f.degree, g.degree, cert)
    m = cert.m
    homog_f, homog_g = f.homogenized(), g.homogenized()
    t_var = MultiPoly.variable(n, n + 1)
    for i in range(n):
        total = MultiPoly(n + 1)
        for j in range(n):
            if cert.P[i][j]:
                total = total + cert.P[i][j].inject(n + 1) * homog_f[j]
            if cert.Q[i][j]:
                total = total + cert.Q[i][j].inject(n + 1) * homog_g[j]
        total = total + t_var * cert.R[i]
        target = MultiPoly(n + 1, {_unit_exponent(i, n + 1, m): 1})
        if total != target:
            return False
    return True


def verify_certificate(aut: RegularAutomorphism, cert: Certificate) -> bool:
    """Exact check of the N certificate identities.

    Degree or shape violations raise InputError; a well-formed certificate
    whose identities fail returns False.
    """
    return verify_certificate_for_maps(aut.forward, aut.inverse, cert)


def _unit_exponent(i: int, nvars: int, m: int):
    return tuple(m if j == i else 0 for j in range(nvars))


def build_certificate_n2(aut: RegularAutomorphism) -> Certificate:
    """Construct a certificate for a regular pair in dimension 2.

    The leading forms of the map and of its inverse are binary forms with
    no common projective zero, so each X_i^m lies in the ideal they
    generate once m is large enough (m = d + d_inv - 1 always suffices);
    the T=0 combination is found by exact linear algebra and lifted by
    exact division of the residual by T.
    """
    if aut.dimension != 2:
        raise InputError("built-in certificate construction is limited to dimension 2")
    n = 2
    d, dm = aut.degree_forward, aut.degree_inverse
    generators = list(aut.top_forms_forward) + list(aut.top_forms_inverse)
    for m in range(max(d, dm), d + dm + MAX_BUILD_EXPONENT_SLACK):
        rows = []
        for i in range(n):
            target = MultiPoly(n, {_unit_exponent(i, n, m): 1})
            sol = solve_homogeneous_membership(generators, target, m)
            if sol is None:
                rows = None
                break
            rows.append(sol)
        if rows is None:
            continue
        P = tuple(tuple(rows[i][j] for j in range(n)) for i in range(n))
        Q = tuple(tuple(rows[i][n + j] for j in range(n)) for i in range(n))
        R = []
        for i in range(n):
            residual = MultiPoly(n + 1, {_unit_exponent(i, n + 1, m): 1})
            for j in range(n):
                if P[i][j]:
                    residual = residual - P[i][j].inject(n + 1) * aut.homog_forward[j]
                if Q[i][j]:
                    residual = residual - Q[i][j].inject(n + 1) * aut.homog_inverse[j]
            R.append(divide_by_last_var(residual))
        cert = Certificate(m, P, Q, tuple(R))
        _shape_check(n, d, dm, cert)
        return cert
    raise RuntimeError(
        "internal: no certificate found below the theoretical exponent bound"
    )


# -- per-place constants --------------------------------------------------------


@dataclass(frozen=True)
class PlaceConstants:
    """Quantitative constants of the certificate at one place.

    C >= 1 bounds the certificate coefficients; (epsilon, delta) is the
    canonical threshold pair, epsilon_strict the shrunken variant used by
    the escape classification; c_plus/c_minus are the growth lower-bound
    constants and c_f/c_finv the upper-bound ones.  At finite places
    everything is an exact power of p: exponent fields are authoritative
    and the float fields are their log-scale images.
    """

    place: Place
    C: float
    epsilon: float
    delta: float
    epsilon_strict: float
    c_plus: float
    c_minus: float
    c_f: float
    c_finv: float
    # exact data, finite places only
    C_exp: int | None = None  # C = p^C_exp
    eps_exp: int | None = None  # epsilon = p^eps_exp
    delta_exp: int | None = None  # delta = p^delta_exp
    strict_eps_exp: int | None = None  # epsilon_strict = p^strict_eps_exp / 2^strict_halved
    strict_halved: bool = False
    scale_exp_f: int | None = None  # per-step upper increment = scale_exp * log p
    scale_exp_finv: int | None = None
    cplus_exp: Fraction | None = None  # c_plus = cplus_exp * log p (<= 0)
    cminus_exp: Fraction | None = None


def coeff_scale_exponent(f: PolyMap, p: int) -> int:
    """Smallest e >= 0 with p^e clearing all component coefficients."""
    worst = 0
    for q in f.components:
        for c in q.terms.values():
            v = val_fraction(c, p)
            if v is not None and -v > worst:
                worst = -v
    return worst


def coeff_scale_log(f: PolyMap, place: Place) -> float:
    """log of the one-step norm-growth constant of f at the place.

    Finite places: log max(max |coefficient|_p, 1).  Archimedean place:
    log max(monomial_count(d) * max |coefficient|, 1) where the count is
    C(N+d-1, d) for an N-variable degree-d map.
    """
    if place.is_finite:
        return coeff_scale_exponent(f, place.p) * math.log(place.p)
    n, d = f.dimension, f.degree
    bound = Fraction(math.comb(n + d - 1, d)) * f.max_abs_coeff()
    return math.log(max(bound, 1))


def upper_bound_constant(f: PolyMap, place: Place) -> float:
    """Constant c with G <= log+ norm + c for the map at the place."""
    if f.degree < 2:
        raise InputError("upper bound constant needs degree >= 2")
    return coeff_scale_log(f, place) / (f.degree - 1)


def place_constants(
    cert: Certificate, place: Place, aut: RegularAutomorphism
) -> PlaceConstants:
    """Canonical constants of the certificate at the place.

    The thresholds follow the fixed rule epsilon = C^(-mn),
    delta = C^(-mn*(mn-1)) with mn = min(d, d_inv); the strict epsilon is
    shrunk by a further 1/C (or by 1/2 when C = 1) so the escape
    thresholds hold strictly.  A finite place where the automorphism has
    good reduction gets C = 1 outright, whatever the supplied
    certificate's coefficients look like there.
    """
    d, dm = aut.degree_forward, aut.degree_inverse
    mn = min(d, dm)
    if place.is_finite:
        p = place.p
        if good_reduction_test(aut, cert, p).verdict == "good":
            c_exp = 0
        else:
            worst = 0
            for c in certificate_coefficients(cert):
                v = val_fraction(c, p)
                if v is not None and -v > worst:
                    worst = -v
            c_exp = worst
        logp = math.log(p)
        eps_exp = -c_exp * mn
        delta_exp = -c_exp * mn * (mn - 1)
        if c_exp > 0:
            strict_exp, halved = eps_exp - c_exp, False
        else:
            strict_exp, halved = 0, True
        cplus_exp = Fraction(min(delta_exp, d * eps_exp), d - 1)
        cminus_exp = Fraction(min(delta_exp, dm * eps_exp), dm - 1)
        ef = coeff_scale_exponent(aut.forward, p)
        eg = coeff_scale_exponent(aut.inverse, p)
        return PlaceConstants(
            place=place,
            C=float(p) ** c_exp,
            epsilon=float(p) ** eps_exp,
            delta=float(p) ** delta_exp,
            epsilon_strict=(float(p) ** strict_exp) * (0.5 if halved else 1.0),
            c_plus=float(cplus_exp) * logp,
            c_minus=float(cminus_exp) * logp,
            c_f=ef * logp / (d - 1),
            c_finv=eg * logp / (dm - 1),
            C_exp=c_exp,
            eps_exp=eps_exp,
            delta_exp=delta_exp,
            strict_eps_exp=strict_exp,
            strict_halved=halved,
            scale_exp_f=ef,
            scale_exp_finv=eg,
            cplus_exp=cplus_exp,
            cminus_exp=cminus_exp,
        )

    n, m = aut.dimension, cert.m
    mp, mq, mr = cert.max_abs_coeff_parts()
    c_prime = max(
        Fraction(math.comb(n + (m - d) - 1, m - d)) * mp,
        Fraction(math.comb(n + (m - dm) - 1, m - dm)) * mq,
        Fraction(math.comb(n + m, m - 1)) * mr,
        Fraction(1),
    )
    C = (2 * n + 1) * c_prime
    eps = float(C) ** -mn
    delta = float(C) ** (-mn * (mn - 1))
    eps_strict = eps / float(C)
    c_plus = math.log(min(delta, eps**d)) / (d - 1)
    c_minus = math.log(min(delta, eps**dm)) / (dm - 1)
    return PlaceConstants(
        place=place,
        C=float(C),
        epsilon=eps,
        delta=delta,
        epsilon_strict=eps_strict,
        c_plus=c_plus,
        c_minus=c_minus,
        c_f=upper_bound_constant(aut.forward, place),
        c_finv=upper_bound_constant(aut.inverse, place),
    )
