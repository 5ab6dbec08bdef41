"""Local Green functions with certified error control, and orbit classification.

The Green value of a point x under a degree-d map g at a place v is the
limit of log+ ||g^n(x)||_v / d^n.  Each step can raise log+ by at most
log rho (a fixed coefficient-size constant), giving a one-sided tail
bound; once an iterate enters the region where the certificate's growth
lower bound applies (or its epsilon/2 variant, which every orbit
eventually enters), the value is pinched from both sides and the
returned radius is a genuine two-sided certificate.

Finite places iterate in fixed-precision p-adic arithmetic (restarting
at doubled precision on cancellation), so only valuations are carried
and the sole approximation is the final multiplication by log p.  The
archimedean place iterates exact rationals under a bit-size budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .certificate import (
    Certificate,
    PlaceConstants,
    coeff_scale_exponent,
    coeff_scale_log,
    place_constants,
)
from .errors import InputError, ResourceLimitError, UndecidedError
from .maps import DEFAULT_BIT_BUDGET, PolyMap, RegularAutomorphism, point_bits
from .padic import (
    PAdic,
    PrecisionLossError,
    apply_map_padic,
    point_from_fractions,
    sup_norm_exp_padic,
)
from .places import Place, log_sup_norm, sup_norm_exponent

FLOAT_SLACK = 2.0**-40
DEFAULT_ITER_BUDGET = 64
_PADIC_START_PREC = 64
_PADIC_MAX_PREC = 1 << 15
LOG2 = math.log(2)


# -- result types ---------------------------------------------------------------


@dataclass(frozen=True)
class GreenValue:
    """A certified numeric limit.

    ``certified`` means the true value lies within ``error_radius`` of
    ``value`` (two-sided); otherwise only [0, value + error_radius] is
    guaranteed.  At finite places ``log_p_coefficient`` carries the exact
    coefficient c with value = c * log p.
    """

    value: float
    error_radius: float
    iterations_used: int
    certified: bool
    place: Place | None = None
    log_p_coefficient: Fraction | None = None

    def to_dict(self):
        return {
            "place": str(self.place) if self.place else None,
            "value": self.value,
            "error_radius": self.error_radius,
            "iterations_used": self.iterations_used,
            "certified": self.certified,
            "exact_log_p_multiple": (
                str(self.log_p_coefficient)
                if self.log_p_coefficient is not None
                else None
            ),
        }


@dataclass(frozen=True)
class FiltrationClass:
    in_B: bool
    in_Uplus: bool
    in_Uminus: bool

    def label(self) -> str:
        return "B" if self.in_B else ("U+" if self.in_Uplus else "U-")

    def to_dict(self):
        return {"in_B": self.in_B, "in_Uplus": self.in_Uplus, "in_Uminus": self.in_Uminus}


@dataclass(frozen=True)
class EscapeClass:
    forward: str  # "Wplus" | "Kplus"
    backward: str  # "Wminus" | "Kminus"
    decided_at_iteration: int

    def to_dict(self):
        return {
            "forward": self.forward,
            "backward": self.backward,
            "decided_at_iteration": self.decided_at_iteration,
        }


# -- directional view of the constants -------------------------------------------


@dataclass(frozen=True)
class _DirView:
    place: Place
    comps: tuple  # components of the driving map
    D: int
    c_up: float  # upper tail at n=0: G <= a_n + c_up / D^n
    c_up_coeff: Fraction | None  # exact multiple of log p (finite)
    low_plain_mag: float  # |c^+| for the (eps, delta) region
    low_plain_coeff: Fraction | None
    low_half_mag: float  # |c^+| for the (eps/2, delta) region
    eps_log: float
    delta_log: float


def _direction_view(
    aut: RegularAutomorphism, consts: PlaceConstants, place: Place, backward: bool
) -> _DirView:
    g = aut.inverse if backward else aut.forward
    D = aut.degree_inverse if backward else aut.degree_forward
    if place.is_finite:
        logp = math.log(place.p)
        scale_exp = consts.scale_exp_finv if backward else consts.scale_exp_f
        c_up_coeff = Fraction(scale_exp, D - 1)
        low_coeff = -(consts.cminus_exp if backward else consts.cplus_exp)
        low_mag = float(low_coeff) * logp
        half_logmin = min(
            consts.delta_exp * logp, D * (consts.eps_exp * logp - LOG2)
        )
        low_half = -half_logmin / (D - 1)
        return _DirView(
            place, g.components, D,
            float(c_up_coeff) * logp, c_up_coeff,
            low_mag, low_coeff, low_half,
            consts.eps_exp * logp, consts.delta_exp * logp,
        )
    c_up = coeff_scale_log(g, place) / (D - 1)
    low_plain = -(consts.c_minus if backward else consts.c_plus)
    eps_log = math.log(consts.epsilon)
    delta_log = math.log(consts.delta)
    low_half = -min(delta_log, D * (eps_log - LOG2)) / (D - 1)
    return _DirView(
        place, g.components, D, c_up, None, low_plain, None, low_half,
        eps_log, delta_log,
    )


# -- membership predicates --------------------------------------------------------

# Finite-place norms travel as (k, exact) pairs: ||y|| = p^k when exact,
# otherwise ||y|| <= p^k with k <= 0; (None, True) is the zero vector.


def _fin_cond1(p: int, k, exact: bool, eps_exp: int, halved: bool) -> bool:
    """||y|| * eps > 1 (eps = p^eps_exp, halved it by 2 when flagged)."""
    if k is None or (not exact and k <= 0):
        return False
    e = k + eps_exp
    if halved:
        return e >= 2 or (e == 1 and p > 2)
    return e >= 1


def _fin_in_drop(p, ky, ky_exact, kfy, kfy_exact, eps_exp, delta_exp, D, halved):
    """Membership in the norm-collapse set (large point whose image drops)."""
    if not _fin_cond1(p, ky, ky_exact, eps_exp, halved):
        return False
    lhs = 0 if kfy is None or (not kfy_exact and kfy <= 0) else max(kfy, 0)
    return lhs < delta_exp + D * ky


def _fin_u_hit(p, ky, ky_exact, kfy, kfy_exact, eps_exp, halved, delta_exp, D):
    """||y|| beyond the strict threshold and ||g(y)|| >= delta * ||y||^D."""
    if not _fin_cond1(p, ky, ky_exact, eps_exp, halved):
        return None  # not in either funnel (core region)
    rhs = delta_exp + D * ky
    if kfy is None:
        return False
    if not kfy_exact:
        if kfy < rhs:
            return False
        raise PrecisionLossError("image norm precision too low for funnel test")
    return kfy >= rhs


def _arch_cond1(logy: float, eps_log: float, halve_by: float) -> bool:
    return logy + eps_log - halve_by > 0


def _arch_in_drop(logy, logfy, eps_log, delta_log, D, halve_by):
    if not _arch_cond1(logy, eps_log, halve_by):
        return False
    return max(logfy, 0.0) < delta_log + D * max(logy, 0.0)


def _arch_u_hit(logy, logfy, eps_log, halve_by, delta_log, D):
    if not _arch_cond1(logy, eps_log, halve_by):
        return None
    return logfy >= delta_log + D * logy


# -- the green engine ---------------------------------------------------------------


def _certified(value, radius, n, place, coeff=None) -> GreenValue:
    return GreenValue(value, radius, n, True, place, coeff)


def _run_arch(view: _DirView, x, tol, iter_budget, bit_budget) -> GreenValue:
    y = tuple(Fraction(c) for c in x)
    log_y = log_sup_norm(y, view.place)
    fy = None  # next iterate, computed lazily: it is only needed for the
    log_fy = None  # membership tests and to advance, not to stop
    n = 0
    entered = 0  # 0: none, 1: eps/2 region, 2: eps region
    while True:
        scale = float(view.D) ** -n
        a_n = max(log_y, 0.0) * scale
        if entered < 2:
            if fy is None:
                fy = tuple(q.evaluate(y) for q in view.comps)
                log_fy = log_sup_norm(fy, view.place)
            if not _arch_in_drop(
                log_y, log_fy, view.eps_log, view.delta_log, view.D, 0.0
            ):
                entered = 2
            elif entered == 0 and not _arch_in_drop(
                log_y, log_fy, view.eps_log, view.delta_log, view.D, LOG2
            ):
                entered = 1
        up = view.c_up * scale
        low = None
        if entered:
            low = (view.low_plain_mag if entered == 2 else view.low_half_mag) * scale
        if low is not None and max(up, low) <= tol:
            return _certified(a_n, max(up, low) + FLOAT_SLACK, n, view.place)
        if a_n + up <= tol:
            radius = a_n + up
            return _certified(a_n, radius + (FLOAT_SLACK if radius else 0.0), n, view.place)
        if iter_budget is not None and n >= iter_budget:
            out_of_budget = True
        else:
            if fy is None:
                fy = tuple(q.evaluate(y) for q in view.comps)
                log_fy = log_sup_norm(fy, view.place)
            out_of_budget = point_bits(fy) > bit_budget
        if out_of_budget:
            if not entered and up <= tol:
                return GreenValue(a_n, up + FLOAT_SLACK, n, False, view.place)
            raise ResourceLimitError(
                f"green budget exhausted at place {view.place} after {n} iterations",
                partial=GreenValue(a_n, max(up, low or up), n, False, view.place),
                last_index=n,
            )
        y, log_y = fy, log_fy
        fy = log_fy = None
        n += 1


def _run_finite(view: _DirView, consts, x, tol, iter_budget) -> GreenValue:
    p = view.place.p
    logp = math.log(p)

    def attempt(prec: int) -> GreenValue:
        y = point_from_fractions(x, p, prec)
        ky, ky_ex = sup_norm_exp_padic(y)
        fy = apply_map_padic(view.comps, y, p, prec)
        kfy, kfy_ex = sup_norm_exp_padic(fy)
        n = 0
        entered = 0
        while True:
            kplus = 0 if ky is None or (not ky_ex) else max(ky, 0)
            a_coeff = Fraction(kplus, view.D**n)
            if entered < 2 and not _fin_in_drop(
                p, ky, ky_ex, kfy, kfy_ex,
                consts.eps_exp, consts.delta_exp, view.D, False,
            ):
                entered = 2
            if entered == 0 and not _fin_in_drop(
                p, ky, ky_ex, kfy, kfy_ex,
                consts.eps_exp, consts.delta_exp, view.D, True,
            ):
                entered = 1
            up_coeff = view.c_up_coeff / view.D**n
            value = float(a_coeff) * logp
            up = float(up_coeff) * logp
            if entered == 2:
                low_coeff = view.low_plain_coeff / view.D**n
                if up_coeff == 0 and low_coeff == 0:
                    radius = 0.0 if a_coeff == 0 else FLOAT_SLACK
                    return _certified(value, radius, n, view.place, a_coeff)
                low = float(low_coeff) * logp
            elif entered == 1:
                low = view.low_half_mag * float(view.D) ** -n
            else:
                low = None
            if low is not None and max(up, low) <= tol:
                return _certified(value, max(up, low) + FLOAT_SLACK, n, view.place, a_coeff)
            if a_coeff == 0 and up_coeff == 0:
                return _certified(0.0, 0.0, n, view.place, a_coeff)
            if value + up <= tol:
                return _certified(value, value + up + FLOAT_SLACK, n, view.place, a_coeff)
            if n >= iter_budget:
                if not entered and up <= tol:
                    return GreenValue(value, up + FLOAT_SLACK, n, False, view.place, a_coeff)
                raise ResourceLimitError(
                    f"green budget exhausted at place {view.place} after {n} iterations",
                    partial=GreenValue(value, max(up, low or up), n, False, view.place),
                    last_index=n,
                )
            y, ky, ky_ex = fy, kfy, kfy_ex
            fy = apply_map_padic(view.comps, y, p, prec)
            kfy, kfy_ex = sup_norm_exp_padic(fy)
            n += 1

    return _with_padic_retry(attempt)


def _with_padic_retry(attempt):
    prec = _PADIC_START_PREC
    while True:
        try:
            return attempt(prec)
        except PrecisionLossError:
            prec *= 2
            if prec > _PADIC_MAX_PREC:
                raise ResourceLimitError(
                    "p-adic precision cap reached without a certified valuation"
                )


def _green_direction(
    aut, cert, place, x, tolerance, backward, iter_budget, bit_budget
) -> GreenValue:
    if tolerance <= 0:
        raise InputError("tolerance must be positive")
    consts = place_constants(cert, place, aut) if not isinstance(cert, PlaceConstants) else cert
    view = _direction_view(aut, consts, place, backward)
    if len(x) != aut.dimension:
        raise InputError("point dimension mismatch")
    if place.is_finite:
        budget = iter_budget if iter_budget is not None else DEFAULT_ITER_BUDGET
        return _run_finite(view, consts, x, tolerance, budget)
    return _run_arch(view, x, tolerance, iter_budget, bit_budget)


def green(
    aut: RegularAutomorphism,
    cert: Certificate,
    place: Place,
    x: Sequence,
    tolerance: float = 1e-8,
    *,
    iter_budget: int | None = None,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> GreenValue:
    """Certified forward Green value of x at the place.

    ``cert`` may also be a precomputed PlaceConstants for the same place.
    """
    return _green_direction(aut, cert, place, x, tolerance, False, iter_budget, bit_budget)


def green_inverse(
    aut: RegularAutomorphism,
    cert: Certificate,
    place: Place,
    x: Sequence,
    tolerance: float = 1e-8,
    *,
    iter_budget: int | None = None,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> GreenValue:
    """Certified Green value of the inverse map (backward orbit growth)."""
    return _green_direction(aut, cert, place, x, tolerance, True, iter_budget, bit_budget)


def green_poly_map(
    f: PolyMap,
    place: Place,
    x: Sequence,
    tolerance: float = 1e-8,
    *,
    iter_budget: int | None = None,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> GreenValue:
    """Upper-bound-only Green evaluation for a plain polynomial map.

    No certificate, hence no growth lower bound: the result is certified
    only when the bracket [0, value + radius] already collapses below the
    tolerance; otherwise certified=False with that one-sided bracket.
    """
    if tolerance <= 0:
        raise InputError("tolerance must be positive")
    if f.degree < 2:
        raise InputError("degree >= 2 required")
    D = f.degree
    if place.is_finite:
        logp = math.log(place.p)
        c_up_coeff = Fraction(coeff_scale_exponent(f, place.p), D - 1)
        view = _DirView(
            place, f.components, D, float(c_up_coeff) * logp, c_up_coeff,
            math.inf, None, math.inf, 0.0, 0.0,
        )
        budget = iter_budget if iter_budget is not None else DEFAULT_ITER_BUDGET

        def attempt(prec):
            return _run_finite_upper_only(view, x, tolerance, budget, prec)

        return _with_padic_retry(attempt)
    c_up = coeff_scale_log(f, place) / (D - 1)
    view = _DirView(place, f.components, D, c_up, None, math.inf, None, math.inf, 0.0, 0.0)
    return _run_arch_upper_only(view, x, tolerance, iter_budget, bit_budget)


def _run_arch_upper_only(view, x, tol, iter_budget, bit_budget):
    y = tuple(Fraction(c) for c in x)
    n = 0
    while True:
        a_n = max(log_sup_norm(y, view.place), 0.0) * float(view.D) ** -n
        up = view.c_up * float(view.D) ** -n
        if a_n + up <= tol:
            radius = a_n + up
            return _certified(a_n, radius + (FLOAT_SLACK if radius else 0.0), n, view.place)
        if (iter_budget is not None and n >= iter_budget) or point_bits(y) > bit_budget:
            if up <= tol:
                # value converged on the upper side; only [0, value + up]
                # is known without a growth lower bound
                return GreenValue(a_n, up + FLOAT_SLACK, n, False, view.place)
            raise ResourceLimitError(
                "plain-map green budget exhausted",
                partial=GreenValue(a_n, up, n, False, view.place),
                last_index=n,
            )
        y = tuple(q.evaluate(y) for q in view.comps)
        n += 1


def _run_finite_upper_only(view, x, tol, iter_budget, prec):
    p = view.place.p
    logp = math.log(p)
    y = point_from_fractions(x, p, prec)
    n = 0
    while True:
        ky, ky_ex = sup_norm_exp_padic(y)
        kplus = 0 if ky is None or not ky_ex else max(ky, 0)
        a_coeff = Fraction(kplus, view.D**n)
        up_coeff = view.c_up_coeff / view.D**n
        value, up = float(a_coeff) * logp, float(up_coeff) * logp
        if a_coeff == 0 and up_coeff == 0:
            return _certified(0.0, 0.0, n, view.place, a_coeff)
        if value + up <= tol:
            return _certified(value, value + up + FLOAT_SLACK, n, view.place, a_coeff)
        if n >= iter_budget:
            if up <= tol:
                return GreenValue(value, up + FLOAT_SLACK, n, False, view.place, a_coeff)
            raise ResourceLimitError(
                "plain-map green budget exhausted",
                partial=GreenValue(value, up, n, False, view.place),
                last_index=n,
            )
        y = apply_map_padic(view.comps, y, p, prec)
        n += 1


# -- drop-set membership on exact rational points (for property checks) ------------


def drop_set_membership(
    aut: RegularAutomorphism,
    consts: PlaceConstants,
    x: Sequence,
    *,
    backward: bool = False,
    halve_eps: bool = False,
) -> bool:
    """Exact membership of x in the forward (or backward) norm-collapse set."""
    g = aut.inverse if backward else aut.forward
    D = aut.degree_inverse if backward else aut.degree_forward
    fx = g(tuple(Fraction(c) for c in x))
    place = consts.place
    if place.is_finite:
        ky = sup_norm_exponent(x, place.p)
        kfy = sup_norm_exponent(fx, place.p)
        return _fin_in_drop(
            place.p, ky, True, kfy, True,
            consts.eps_exp, consts.delta_exp, D, halve_eps,
        )
    logy = log_sup_norm(x, place)
    logfy = log_sup_norm(fx, place)
    return _arch_in_drop(
        logy, logfy, math.log(consts.epsilon), math.log(consts.delta), D,
        LOG2 if halve_eps else 0.0,
    )


def lower_bound_set_membership(aut, consts, x, *, backward=False, halve_eps=False) -> bool:
    """Complement of the drop set: where the growth lower bound holds."""
    return not drop_set_membership(aut, consts, x, backward=backward, halve_eps=halve_eps)


# -- filtration and escape ----------------------------------------------------------


def _filtration_label(aut, consts, ky_or_logy, kfy_or_logfy, finite: bool, exactness=None):
    """Classify one point from its norm data under the strict thresholds."""
    D = aut.degree_forward
    if finite:
        p = consts.place.p
        ky, ky_ex = ky_or_logy
        kfy, kfy_ex = kfy_or_logfy
        hit = _fin_u_hit(
            p, ky, ky_ex, kfy, kfy_ex,
            consts.strict_eps_exp, consts.strict_halved, consts.delta_exp, D,
        )
    else:
        eps_s_log = math.log(consts.epsilon_strict)
        hit = _arch_u_hit(
            ky_or_logy, kfy_or_logfy, eps_s_log, 0.0, math.log(consts.delta), D
        )
    if hit is None:
        return "B"
    return "U+" if hit else "U-"


def classify_filtration(
    aut: RegularAutomorphism, cert: Certificate, place: Place, x: Sequence
) -> FiltrationClass:
    """Exact membership in the three-piece norm filtration (strict thresholds)."""
    consts = cert if isinstance(cert, PlaceConstants) else place_constants(cert, place, aut)
    fx = aut.forward(tuple(Fraction(c) for c in x))
    if place.is_finite:
        ky = (sup_norm_exponent(x, place.p), True)
        kfy = (sup_norm_exponent(fx, place.p), True)
        label = _filtration_label(aut, consts, ky, kfy, True)
    else:
        label = _filtration_label(
            aut, consts, log_sup_norm(x, place), log_sup_norm(fx, place), False
        )
    return FiltrationClass(label == "B", label == "U+", label == "U-")


def classify_escape(
    aut: RegularAutomorphism,
    cert: Certificate,
    place: Place,
    x: Sequence,
    budget: int = DEFAULT_ITER_BUDGET,
    *,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> EscapeClass:
    """Forward/backward escaping-vs-bounded classification.

    Forward escape is witnessed by an iterate in the forward funnel (with
    strict thresholds); boundedness by an exact cycle, by the integral
    trap at a finite place, or by the trapped patterns (tail in the core,
    or tail in the annulus just outside it).  Budget exhaustion without a
    decision raises UndecidedError.
    """
    consts = cert if isinstance(cert, PlaceConstants) else place_constants(cert, place, aut)
    fwd, k1 = _escape_direction(aut, consts, place, x, budget, bit_budget, False)
    bwd, k2 = _escape_direction(aut, consts, place, x, budget, bit_budget, True)
    return EscapeClass(fwd, bwd, max(k1, k2))


def _escape_direction(aut, consts, place, x, budget, bit_budget, backward):
    escape_label = "Wminus" if backward else "Wplus"
    bounded_label = "Kminus" if backward else "Kplus"
    hit_class = "U-" if backward else "U+"
    driving = aut.inverse if backward else aut.forward
    x = tuple(Fraction(c) for c in x)

    if place.is_finite:
        p = place.p
        if coeff_scale_exponent(driving, p) == 0:
            k0 = sup_norm_exponent(x, p)
            if k0 is None or k0 <= 0:
                return bounded_label, 0  # integral trap: the unit ball is invariant

        def attempt(prec):
            return _escape_run_finite(
                aut, consts, p, x, budget, backward, hit_class,
                escape_label, bounded_label, prec,
            )

        return _with_padic_retry(attempt)
    return _escape_run_arch(
        aut, consts, place, x, budget, bit_budget, backward, hit_class,
        escape_label, bounded_label,
    )


def _escape_run_arch(
    aut, consts, place, x, budget, bit_budget, backward, hit_class,
    escape_label, bounded_label,
):
    # The funnel tests at y always compare ||y|| with ||f(y)|| for the
    # forward map f.  Going forward the neighbor f(y_n) is the next
    # iterate; going backward it is the previous one.
    driving = aut.inverse if backward else aut.forward
    eps_log = math.log(consts.epsilon)
    seen = set()
    states = []
    annulus = []
    y = x
    neighbor = aut.forward(x) if backward else driving(x)
    n = 0
    while True:
        if y in seen:
            return bounded_label, n  # exact cycle
        seen.add(y)
        logy = log_sup_norm(y, place)
        logn = log_sup_norm(neighbor, place)
        label = _filtration_label(aut, consts, logy, logn, False)
        if label == hit_class:
            return escape_label, n
        states.append(label)
        annulus.append(logy + eps_log <= LOG2)
        if n == budget:
            break
        if backward:
            y, neighbor = driving(y), y
        else:
            y = neighbor
            neighbor = driving(y)
        n += 1
        if point_bits(y) + point_bits(neighbor) > bit_budget:
            break  # decide from the pattern observed so far
    return _decide_bounded_pattern(states, annulus, hit_class, bounded_label, n)


def _escape_run_finite(
    aut, consts, p, x, budget, backward, hit_class, escape_label, bounded_label, prec
):
    driving_comps = (aut.inverse if backward else aut.forward).components
    states = []
    annulus = []
    if backward:
        neighbor = apply_map_padic(aut.forward.components, point_from_fractions(x, p, prec), p, prec)
        y = point_from_fractions(x, p, prec)
    else:
        y = point_from_fractions(x, p, prec)
        neighbor = apply_map_padic(driving_comps, y, p, prec)
    for n in range(budget + 1):
        ky = sup_norm_exp_padic(y)
        kn = sup_norm_exp_padic(neighbor)
        label = _filtration_label(aut, consts, ky, kn, True)
        if label == hit_class:
            return escape_label, n
        states.append(label)
        k, k_ex = ky
        in_ann = k is None or (not k_ex and k <= 0) or not _gt2(p, k + consts.eps_exp)
        annulus.append(in_ann)
        if backward:
            neighbor = y
            y = apply_map_padic(driving_comps, y, p, prec)
        else:
            y = neighbor
            neighbor = apply_map_padic(driving_comps, y, p, prec)
    return _decide_bounded_pattern(states, annulus, hit_class, bounded_label, budget)


def _gt2(p: int, e: int) -> bool:
    """p^e > 2, exactly."""
    return e >= 2 or (e == 1 and p > 2)


def _decide_bounded_pattern(states, annulus, hit_class, bounded_label, decided_at):
    other_funnel = "U-" if hit_class == "U+" else "U+"
    if "B" in states:
        last_b = len(states) - 1 - states[::-1].index("B")
        if all(s == "B" for s in states[last_b:]):
            return bounded_label, decided_at
    tail = max(4, len(states) // 4)
    if all(s == other_funnel for s in states) and all(annulus[-tail:]):
        return bounded_label, decided_at
    raise UndecidedError(
        "escape classification undecided within the iteration budget"
    )
