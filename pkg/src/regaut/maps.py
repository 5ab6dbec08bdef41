"""Polynomial self-maps of affine N-space and validated invertible pairs.

A PolyMap is a tuple of exact polynomials, one per coordinate.  A
RegularAutomorphism bundles a map with its polynomial inverse after
verifying, by exact composition, that the pair really is inverse, that
both degrees are at least 2, and that the leading forms of map and
inverse share no projective zero at infinity (for N = 2 this is decided
by a binary-form gcd; higher dimensions need an external membership
certificate and are otherwise reported as undecided).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError, NotRegularError, ResourceLimitError, UndecidedError
from .forms import binary_gcd_many, binary_form_gcd, is_constant_form, rational_linear_factors
from .poly import MultiPoly, homogenize, poly_to_text

DEFAULT_BIT_BUDGET = 4_000_000
DEFAULT_TERM_BUDGET = 500_000


class PolyMap:
    """Immutable polynomial map A^N -> A^N given by N component polynomials."""

    __slots__ = ("components", "dimension", "degree")

    def __init__(self, components: Sequence[MultiPoly]):
        components = tuple(components)
        if not components:
            raise InputError("a polynomial map needs at least one component")
        n = len(components)
        for q in components:
            if not isinstance(q, MultiPoly):
                raise InputError("components must be MultiPoly values")
            if q.nvars != n:
                raise InputError(
                    f"component in {q.nvars} variables inside a dimension-{n} map"
                )
        degs = [q.degree for q in components if q.degree is not None]
        if not degs or max(degs) < 1:
            raise InputError("map degree must be >= 1")
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "dimension", n)
        object.__setattr__(self, "degree", max(degs))

    def __setattr__(self, *a):
        raise AttributeError("PolyMap is immutable")

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls([MultiPoly.variable(i, n) for i in range(n)])

    def is_identity(self) -> bool:
        return all(
            q == MultiPoly.variable(i, self.dimension)
            for i, q in enumerate(self.components)
        )

    def __call__(self, point: Sequence) -> tuple:
        return tuple(q.evaluate(point) for q in self.components)

    def compose(self, inner: "PolyMap") -> "PolyMap":
        if self.dimension != inner.dimension:
            raise InputError("composition dimension mismatch")
        return PolyMap([q.compose(inner.components) for q in self.components])

    def top_forms(self) -> tuple:
        """Leading forms at the map degree (some may be zero)."""
        d = self.degree
        return tuple(q.homogeneous_part(d) for q in self.components)

    def homogenized(self) -> tuple:
        """N+1 homogeneous polynomials in N+1 variables: lifts plus T^degree."""
        d = self.degree
        lift = [homogenize(q, d) for q in self.components]
        t_pow = MultiPoly(
            self.dimension + 1, {(0,) * self.dimension + (d,): Fraction(1)}
        )
        lift.append(t_pow)
        return tuple(lift)

    def term_count(self) -> int:
        return sum(len(q.terms) for q in self.components)

    def max_abs_coeff(self) -> Fraction:
        return max(q.max_abs_coeff() for q in self.components)

    def __eq__(self, other):
        return isinstance(other, PolyMap) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        body = ", ".join(poly_to_text(q) for q in self.components)
        return f"PolyMap({body})"


def verify_inverse(f: PolyMap, g: PolyMap) -> bool:
    """Exact check that f∘g and g∘f are both the identity."""
    if f.dimension != g.dimension:
        raise InputError("inverse check dimension mismatch")
    return f.compose(g).is_identity() and g.compose(f).is_identity()


def _describe_locus(form: MultiPoly) -> str:
    """Human description of the projective vanishing locus of a binary form.

    Points are written with a trailing :0 coordinate, i.e. on the
    hyperplane at infinity of P^2.
    """
    if is_constant_form(form):
        return "empty"
    factors, remainder = rational_linear_factors(form)
    pts = []
    for (alpha, beta), mult in factors:
        sx, sy = beta, -alpha
        if sx < 0 or (sx == 0 and sy < 0):
            sx, sy = -sx, -sy
        pts.append(f"({sx}:{sy}:0)" + (f" x{mult}" if mult > 1 else ""))
    desc = ", ".join(pts)
    if not is_constant_form(remainder):
        extra = f"zeros of {poly_to_text(remainder)}"
        desc = f"{desc}, {extra}" if desc else extra
    return "{" + desc + "}"


@dataclass(frozen=True)
class RegularityVerdict:
    status: str  # "regular" | "not_regular" | "undecided"
    iplus: str = ""
    iminus: str = ""
    witness: MultiPoly | None = None
    detail: str = ""

    @property
    def is_regular(self) -> bool:
        return self.status == "regular"


def regularity_check(f: PolyMap, g: PolyMap) -> RegularityVerdict:
    """Decide whether the inverse pair (f, g) is regular.

    For N = 2 the leading forms are binary forms, so the decision reduces
    to a gcd computation over Q.  For N >= 3 there is no built-in decision
    procedure and the verdict is undecided (supply a membership
    certificate to settle it).
    """
    if not verify_inverse(f, g):
        raise InputError("regularity check requires an exact inverse pair")
    if f.dimension != 2:
        return RegularityVerdict(
            "undecided",
            detail=f"dimension {f.dimension} needs a supplied certificate",
        )
    g_plus = binary_gcd_many(f.top_forms())
    g_minus = binary_gcd_many(g.top_forms())
    common = binary_form_gcd(g_plus, g_minus)
    if is_constant_form(common):
        return RegularityVerdict(
            "regular",
            iplus=_describe_locus(g_plus),
            iminus=_describe_locus(g_minus),
        )
    factors, _ = rational_linear_factors(common)
    if factors:
        (alpha, beta), _mult = factors[0]
        witness = MultiPoly(2, {(1, 0): alpha, (0, 1): beta})
    else:
        witness = common
    return RegularityVerdict(
        "not_regular",
        witness=witness,
        detail=f"common top-form factor {poly_to_text(witness)}",
    )


class RegularAutomorphism:
    """Validated pair (f, f^{-1}) with cached homogeneous data.

    Construct through :meth:`validate` (N = 2) or
    :meth:`from_certified_regularity` (used once an external certificate
    has proved regularity).
    """

    __slots__ = (
        "forward",
        "inverse",
        "degree_forward",
        "degree_inverse",
        "homog_forward",
        "homog_inverse",
        "top_forms_forward",
        "top_forms_inverse",
        "verdict",
        "_swapped",
    )

    def __init__(self, forward: PolyMap, inverse: PolyMap, verdict: RegularityVerdict,
                 *, _checked: bool = False):
        if not _checked:
            raise InputError(
                "use RegularAutomorphism.validate or from_certified_regularity"
            )
        object.__setattr__(self, "forward", forward)
        object.__setattr__(self, "inverse", inverse)
        object.__setattr__(self, "degree_forward", forward.degree)
        object.__setattr__(self, "degree_inverse", inverse.degree)
        object.__setattr__(self, "homog_forward", forward.homogenized())
        object.__setattr__(self, "homog_inverse", inverse.homogenized())
        object.__setattr__(self, "top_forms_forward", forward.top_forms())
        object.__setattr__(self, "top_forms_inverse", inverse.top_forms())
        object.__setattr__(self, "verdict", verdict)
        object.__setattr__(self, "_swapped", None)

    def __setattr__(self, *a):
        raise AttributeError("RegularAutomorphism is immutable")

    @staticmethod
    def _check_degrees(f: PolyMap, g: PolyMap):
        if f.degree < 2 or g.degree < 2:
            raise InputError(
                "both the map and its inverse must have degree >= 2 "
                f"(got {f.degree} and {g.degree})"
            )

    @classmethod
    def validate(cls, forward: PolyMap, inverse: PolyMap) -> "RegularAutomorphism":
        if not verify_inverse(forward, inverse):
            raise InputError("supplied maps are not an inverse pair")
        cls._check_degrees(forward, inverse)
        verdict = regularity_check(forward, inverse)
        if verdict.status == "not_regular":
            raise NotRegularError(
                f"map is not regular: {verdict.detail}", witness=verdict.witness
            )
        if verdict.status == "undecided":
            raise UndecidedError(
                "regularity is undecided: " + verdict.detail
            )
        return cls(forward, inverse, verdict, _checked=True)

    @classmethod
    def from_certified_regularity(
        cls, forward: PolyMap, inverse: PolyMap, detail: str = "certificate supplied"
    ) -> "RegularAutomorphism":
        """Trusted constructor for pairs whose regularity was proved elsewhere."""
        if not verify_inverse(forward, inverse):
            raise InputError("supplied maps are not an inverse pair")
        cls._check_degrees(forward, inverse)
        verdict = RegularityVerdict("regular", detail=detail)
        return cls(forward, inverse, verdict, _checked=True)

    @property
    def dimension(self) -> int:
        return self.forward.dimension

    def swapped(self) -> "RegularAutomorphism":
        """The inverse automorphism (forward and inverse exchanged)."""
        cached = self._swapped
        if cached is None:
            v = self.verdict
            sv = RegularityVerdict(v.status, v.iminus, v.iplus, v.witness, v.detail)
            cached = RegularAutomorphism(self.inverse, self.forward, sv, _checked=True)
            object.__setattr__(cached, "_swapped", self)
            object.__setattr__(self, "_swapped", cached)
        return cached

    def __repr__(self):
        return (
            f"RegularAutomorphism(N={self.dimension}, d={self.degree_forward}, "
            f"d_inv={self.degree_inverse})"
        )


# -- iteration -----------------------------------------------------------------


def point_bits(x: Sequence) -> int:
    total = 0
    for c in x:
        c = Fraction(c)
        total += c.numerator.bit_length() + c.denominator.bit_length()
    return total


def apply_map(f: PolyMap, x: Sequence) -> tuple:
    return f(x)


def iterate(
    aut: RegularAutomorphism | PolyMap,
    x: Sequence,
    n: int,
    *,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> tuple:
    """Exact n-th iterate; negative n uses the inverse map.

    Raises ResourceLimitError (carrying the last completed index and
    point) when the coordinates exceed ``bit_budget`` total bits.
    """
    if isinstance(aut, PolyMap):
        if n < 0:
            raise InputError("negative iterates need a RegularAutomorphism")
        step = aut
    else:
        step = aut.forward if n >= 0 else aut.inverse
    point = tuple(Fraction(c) for c in x)
    if len(point) != step.dimension:
        raise InputError("point dimension mismatch")
    for k in range(abs(n)):
        point = step(point)
        if point_bits(point) > bit_budget:
            signed = (k + 1) if n >= 0 else -(k + 1)
            raise ResourceLimitError(
                f"bit budget {bit_budget} exceeded at iterate {signed}",
                partial=point,
                last_index=signed,
            )
    return point


def orbit_points(
    aut: RegularAutomorphism,
    x: Sequence,
    n_from: int,
    n_to: int,
    *,
    bit_budget: int = DEFAULT_BIT_BUDGET,
):
    """List of (n, f^n(x)) for n_from <= n <= n_to, computed incrementally."""
    if n_from > n_to:
        raise InputError("empty orbit range")
    base = tuple(Fraction(c) for c in x)
    out = []
    point = iterate(aut, base, n_from, bit_budget=bit_budget)
    out.append((n_from, point))
    for n in range(n_from + 1, n_to + 1):
        point = aut.forward(point)
        if point_bits(point) > bit_budget:
            raise ResourceLimitError(
                f"bit budget exceeded at iterate {n}", partial=point, last_index=n - 1
            )
        out.append((n, point))
    return out


def algebraic_stability_degrees(
    f: PolyMap, n_max: int, *, term_budget: int = DEFAULT_TERM_BUDGET
) -> tuple:
    """Exact degrees of f^n for n = 1..n_max via symbolic composition."""
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    if f.degree < 2:
        raise InputError("degree >= 2 required")
    degrees = [f.degree]
    power = f
    for n in range(2, n_max + 1):
        power = power.compose(f)
        if power.term_count() > term_budget:
            raise ResourceLimitError(
                f"term budget {term_budget} exceeded at composite {n}",
                partial=tuple(degrees),
                last_index=n - 1,
            )
        degrees.append(power.degree)
    return tuple(degrees)
