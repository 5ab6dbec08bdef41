"""Fixed-precision p-adic arithmetic with sound precision tracking.

Orbit norms at a finite place depend only on p-adic valuations, so the
Green evaluator iterates points in this compact representation instead
of exact rationals (whose bit size doubles every step).  A value is

  * exact zero,
  * an inexact zero  O(p^k): only |x| <= p^-k is known, or
  * normal: unit * p^val + O(p^(val+prec)) with p not dividing unit.

Additions can cancel leading digits; when a needed valuation can no
longer be certified, PrecisionLossError is raised and the caller restarts
the whole computation at doubled precision.  Valuations themselves are
plain integers and stay exact no matter how large they grow.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import RegautError
from .poly import MultiPoly


class PrecisionLossError(RegautError):
    """Internal: p-adic precision exhausted; retry with more digits."""


class PAdic:
    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val, unit: int, prec: int):
        self.p = p
        self.val = val  # exact valuation (normal), bound exponent (inexact zero), None (exact zero)
        self.unit = unit
        self.prec = prec

    # -- constructors ----------------------------------------------------

    @classmethod
    def exact_zero(cls, p: int) -> "PAdic":
        return cls(p, None, 0, 0)

    @classmethod
    def inexact_zero(cls, p: int, bound: int) -> "PAdic":
        """A value known only to satisfy |x| <= p^-bound."""
        return cls(p, bound, 0, 0)

    @classmethod
    def from_fraction(cls, q, p: int, prec: int) -> "PAdic":
        q = Fraction(q)
        if q == 0:
            return cls.exact_zero(p)
        num, den = q.numerator, q.denominator
        vn = 0
        while num % p == 0:
            num //= p
            vn += 1
        vd = 0
        while den % p == 0:
            den //= p
            vd += 1
        mod = p**prec
        unit = num % mod
        if den != 1:
            unit = unit * pow(den, -1, mod) % mod
        return cls(p, vn - vd, unit, prec)

    # -- queries -----------------------------------------------------------

    @property
    def is_exact_zero(self) -> bool:
        return self.unit == 0 and self.val is None

    @property
    def is_inexact_zero(self) -> bool:
        return self.unit == 0 and self.val is not None

    def norm_exponent(self):
        """(k, exact): ||x|| = p^k when exact, else ||x|| <= p^k.

        Exact zero reports (None, True), i.e. norm 0.
        """
        if self.is_exact_zero:
            return None, True
        if self.is_inexact_zero:
            return -self.val, False
        return -self.val, True

    def __repr__(self):
        if self.is_exact_zero:
            return f"PAdic({self.p}, 0)"
        if self.is_inexact_zero:
            return f"PAdic({self.p}, O({self.p}^{self.val}))"
        return f"PAdic({self.p}, {self.unit}*{self.p}^{self.val} + O(^{self.val + self.prec}))"

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self):
        if self.unit == 0:
            return self
        mod = self.p**self.prec
        return PAdic(self.p, self.val, (-self.unit) % mod, self.prec)

    def __add__(self, other: "PAdic") -> "PAdic":
        p = self.p
        a, b = self, other
        if a.is_exact_zero:
            return b
        if b.is_exact_zero:
            return a
        if a.is_inexact_zero and b.is_inexact_zero:
            return PAdic.inexact_zero(p, min(a.val, b.val))
        if a.is_inexact_zero or b.is_inexact_zero:
            if b.is_inexact_zero:
                a, b = b, a
            # a is the fuzz O(p^bound), b normal
            abs_out = min(a.val, b.val + b.prec)
            rel = abs_out - b.val
            if rel <= 0:
                return PAdic.inexact_zero(p, abs_out)
            return PAdic(p, b.val, b.unit % p**rel, rel)
        if a.val > b.val:
            a, b = b, a
        abs_out = min(a.val + a.prec, b.val + b.prec)
        rel = abs_out - a.val
        if a.val < b.val:
            unit = (a.unit + b.unit * p ** (b.val - a.val)) % p**rel
            return PAdic(p, a.val, unit, rel)
        s = (a.unit + b.unit) % p**rel
        if s == 0:
            return PAdic.inexact_zero(p, abs_out)
        t = 0
        while s % p == 0:
            s //= p
            t += 1
        if rel - t <= 0:
            return PAdic.inexact_zero(p, abs_out)
        return PAdic(p, a.val + t, s % p ** (rel - t), rel - t)

    def __sub__(self, other: "PAdic") -> "PAdic":
        return self + (-other)

    def __mul__(self, other: "PAdic") -> "PAdic":
        p = self.p
        a, b = self, other
        if a.is_exact_zero or b.is_exact_zero:
            return PAdic.exact_zero(p)
        if a.is_inexact_zero or b.is_inexact_zero:
            if a.is_inexact_zero and b.is_inexact_zero:
                return PAdic.inexact_zero(p, a.val + b.val)
            if b.is_inexact_zero:
                a, b = b, a
            return PAdic.inexact_zero(p, a.val + b.val)
        prec = min(a.prec, b.prec)
        return PAdic(p, a.val + b.val, a.unit * b.unit % p**prec, prec)


def point_from_fractions(x: Sequence, p: int, prec: int) -> tuple:
    return tuple(PAdic.from_fraction(c, p, prec) for c in x)


def sup_norm_exp_padic(coords: Sequence[PAdic]):
    """(k, exact) with ||x|| = p^k (exact) or ||x|| <= p^k; (None, True) = zero.

    Raises PrecisionLossError when a fuzzy coordinate could dominate the
    certain ones and the bound sits above 1 (log+ would then be unknown).
    """
    best = None
    fuzz = None
    for c in coords:
        k, exact = c.norm_exponent()
        if k is None:
            continue
        if exact:
            if best is None or k > best:
                best = k
        else:
            if fuzz is None or k > fuzz:
                fuzz = k
    if fuzz is None:
        return best, True  # best may be None: exact zero vector
    if best is not None and fuzz <= best:
        return best, True
    if fuzz <= 0 and (best is None or best <= 0):
        # everything is inside the unit ball; enough for log+ purposes
        return max(fuzz, best if best is not None else fuzz), False
    raise PrecisionLossError("norm dominated by a coordinate of exhausted precision")


def eval_poly_padic(poly: MultiPoly, coords: Sequence[PAdic], p: int, prec: int) -> PAdic:
    max_e = [0] * poly.nvars
    for expt in poly.terms:
        for i, e in enumerate(expt):
            if e > max_e[i]:
                max_e[i] = e
    pows = []
    one = PAdic.from_fraction(1, p, prec)
    for i, m in enumerate(max_e):
        row = [one]
        for _ in range(m):
            row.append(row[-1] * coords[i])
        pows.append(row)
    total = PAdic.exact_zero(p)
    for expt, c in poly.terms.items():
        v = PAdic.from_fraction(c, p, prec)
        for i, e in enumerate(expt):
            if e:
                v = v * pows[i][e]
        total = total + v
    return total


def apply_map_padic(components: Sequence[MultiPoly], coords, p: int, prec: int) -> tuple:
    return tuple(eval_poly_padic(q, coords, p, prec) for q in components)
