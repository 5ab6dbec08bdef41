"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero Fraction
coefficients.  Exponent tuple element i is the power of variable i in
that monomial; the zero polynomial stores no terms.  All arithmetic is
exact; there is no floating point anywhere in this module.

Text format (round-trips exactly):

    3/2 * X1^2 * X2 - X2 + 5

i.e. a sum of terms, each an optional rational coefficient ``p/q``
joined by ``*`` to variable powers ``NAME^k``.  Variable names are
supplied by the caller (defaults ``X1 .. XN``).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .errors import InputError, PolyParseError

Exponent = tuple  # tuple[int, ...], one entry per variable


def _coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise InputError(f"coefficient must be exact (int/Fraction/str), got {type(c).__name__}")


def term_key(expt: Exponent):
    """Graded-lex sort key, descending (use with reverse=True)."""
    return (sum(expt), expt)


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables over Q."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | Iterable = ()):
        if nvars < 0:
            raise InputError("variable count must be >= 0")
        clean: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for expt, c in items:
            expt = tuple(int(e) for e in expt)
            if len(expt) != nvars or any(e < 0 for e in expt):
                raise InputError(f"bad exponent {expt} for {nvars} variables")
            c = _coeff(c)
            if c:
                c0 = clean.get(expt)
                c = c if c0 is None else c0 + c
                if c:
                    clean[expt] = c
                elif expt in clean:
                    del clean[expt]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: _coeff(c)})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise InputError(f"variable index {i} out of range for {nvars} variables")
        expt = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, {expt: 1})

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        """Total degree; None is the sentinel for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def coeff(self, expt: Exponent) -> Fraction:
        return self.terms.get(tuple(expt), Fraction(0))

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self):
        """Shared total degree of all terms, or None (zero poly counts as any)."""
        degs = {sum(e) for e in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise InputError("polynomial is not homogeneous")
        return degs.pop()

    def max_abs_coeff(self) -> Fraction:
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.nvars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {poly_to_text(self)!r})"

    # -- ring operations ---------------------------------------------------

    def _check_same_ring(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise InputError(
                f"variable count mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.nvars, other)
        self._check_same_ring(other)
        out = dict(self.terms)
        for expt, c in other.terms.items():
            s = out.get(expt, 0) + c
            if s:
                out[expt] = s
            elif expt in out:
                del out[expt]
        res = MultiPoly(self.nvars)
        object.__setattr__(res, "terms", out)
        return res

    __radd__ = __add__

    def __neg__(self):
        res = MultiPoly(self.nvars)
        object.__setattr__(res, "terms", {e: -c for e, c in self.terms.items()})
        return res

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = _coeff(other)
            if not c:
                return MultiPoly(self.nvars)
            res = MultiPoly(self.nvars)
            object.__setattr__(res, "terms", {e: v * c for e, v in self.terms.items()})
            return res
        self._check_same_ring(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expt = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(expt, 0) + c1 * c2
                if s:
                    out[expt] = s
                elif expt in out:
                    del out[expt]
        res = MultiPoly(self.nvars)
        object.__setattr__(res, "terms", out)
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise InputError("polynomial power must be a non-negative integer")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            n >>= 1
            if base_needed:
                base = base * base
        return result

    # -- evaluation and composition ----------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.nvars:
            raise InputError(
                f"point has {len(point)} coordinates, polynomial has {self.nvars} variables"
            )
        pt = [_coeff(c) for c in point]
        max_e = [0] * self.nvars
        for expt in self.terms:
            for i, e in enumerate(expt):
                if e > max_e[i]:
                    max_e[i] = e
        pows = []
        for i, m in enumerate(max_e):
            row = [Fraction(1)]
            for _ in range(m):
                row.append(row[-1] * pt[i])
            pows.append(row)
        total = Fraction(0)
        for expt, c in self.terms.items():
            v = c
            for i, e in enumerate(expt):
                if e:
                    v = v * pows[i][e]
            total += v
        return total

    def evaluate_generic(self, point: Sequence, one, add, mul):
        """Evaluate over any commutative ring given its 1, +, * callables."""
        if len(point) != self.nvars:
            raise InputError("dimension mismatch in evaluation")
        total = None
        for expt, c in self.terms.items():
            v = mul(one, c)
            for i, e in enumerate(expt):
                for _ in range(e):
                    v = mul(v, point[i])
            total = v if total is None else add(total, v)
        return total

    def compose(self, inner: Sequence["MultiPoly"]) -> "MultiPoly":
        """Exact substitution of ``inner[i]`` for variable i."""
        if len(inner) != self.nvars:
            raise InputError(
                f"composition needs {self.nvars} inner polynomials, got {len(inner)}"
            )
        if inner:
            n_inner = inner[0].nvars
            for q in inner:
                if q.nvars != n_inner:
                    raise InputError("inner polynomials must share a variable count")
        else:
            n_inner = 0
        max_e = [0] * self.nvars
        for expt in self.terms:
            for i, e in enumerate(expt):
                if e > max_e[i]:
                    max_e[i] = e
        pows = []
        for i, m in enumerate(max_e):
            row = [MultiPoly.constant(n_inner, 1)]
            for _ in range(m):
                row.append(row[-1] * inner[i])
            pows.append(row)
        total = MultiPoly(n_inner)
        for expt, c in self.terms.items():
            v = MultiPoly.constant(n_inner, c)
            for i, e in enumerate(expt):
                if e:
                    v = v * pows[i][e]
            total = total + v
        return total

    # -- homogeneous structure ----------------------------------------------

    def homogeneous_part(self, k: int) -> "MultiPoly":
        """Sum of the terms of total degree exactly k (same variables)."""
        return MultiPoly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == k})

    def top_form(self, degree: int | None = None) -> "MultiPoly":
        """Homogeneous part at ``degree`` (default: the polynomial's own degree).

        The top form of the zero polynomial is zero; a ``degree`` above the
        polynomial's degree gives zero as well.
        """
        if degree is None:
            degree = self.degree
            if degree is None:
                return MultiPoly(self.nvars)
        return self.homogeneous_part(degree)

    def inject(self, nvars_new: int) -> "MultiPoly":
        """Reinterpret in a larger ring; new trailing variables get exponent 0."""
        if nvars_new < self.nvars:
            raise InputError("cannot inject into fewer variables")
        pad = (0,) * (nvars_new - self.nvars)
        res = MultiPoly(nvars_new)
        object.__setattr__(res, "terms", {e + pad: c for e, c in self.terms.items()})
        return res


# -- module-level operations (spec surface) ---------------------------------


def poly_eval(p: MultiPoly, point: Sequence) -> Fraction:
    return p.evaluate(point)


def poly_compose(outer: MultiPoly, inner: Sequence[MultiPoly]) -> MultiPoly:
    return outer.compose(inner)


def top_form(p: MultiPoly, degree: int | None = None) -> MultiPoly:
    return p.top_form(degree)


def homogenize(p: MultiPoly, target_degree: int) -> MultiPoly:
    """Homogenize into nvars+1 variables, the last one the homogenizing one.

    Every term of the result has total degree ``target_degree``; setting the
    last variable to 1 recovers ``p``.
    """
    d = p.degree
    if d is not None and target_degree < d:
        raise InputError(
            f"target degree {target_degree} below polynomial degree {d}"
        )
    if target_degree < 0:
        raise InputError("target degree must be >= 0")
    out = {}
    for expt, c in p.terms.items():
        out[expt + (target_degree - sum(expt),)] = c
    res = MultiPoly(p.nvars + 1)
    object.__setattr__(res, "terms", out)
    return res


def dehomogenize(p: MultiPoly) -> MultiPoly:
    """Set the last variable to 1 and drop it."""
    if p.nvars == 0:
        raise InputError("no variable to dehomogenize")
    out: dict = {}
    for expt, c in p.terms.items():
        key = expt[:-1]
        s = out.get(key, 0) + c
        if s:
            out[key] = s
        elif key in out:
            del out[key]
    res = MultiPoly(p.nvars - 1)
    object.__setattr__(res, "terms", out)
    return res


def set_last_var_zero(p: MultiPoly) -> MultiPoly:
    """Set the last variable to 0 and drop it (e.g. a homogenized poly at T=0)."""
    if p.nvars == 0:
        raise InputError("no variable to specialize")
    res = MultiPoly(p.nvars - 1)
    object.__setattr__(
        res, "terms", {e[:-1]: c for e, c in p.terms.items() if e[-1] == 0}
    )
    return res


def divide_by_last_var(p: MultiPoly) -> MultiPoly:
    """Exact division by the last variable; errors if any term lacks it."""
    out = {}
    for expt, c in p.terms.items():
        if expt[-1] == 0:
            raise InputError("polynomial is not divisible by the last variable")
        out[expt[:-1] + (expt[-1] - 1,)] = c
    res = MultiPoly(p.nvars)
    object.__setattr__(res, "terms", out)
    return res


def monomials(nvars: int, degree: int):
    """All exponent tuples of total degree ``degree``, graded-lex descending."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=term_key, reverse=True)
    return out


# -- text format --------------------------------------------------------------


def default_names(nvars: int) -> tuple:
    return tuple(f"X{i + 1}" for i in range(nvars))


def poly_to_text(p: MultiPoly, names: Sequence[str] | None = None) -> str:
    """Canonical text form: graded-lex descending, exact rational coefficients."""
    if names is None:
        names = default_names(p.nvars)
    if len(names) != p.nvars:
        raise InputError("variable name list length mismatch")
    if not p.terms:
        return "0"
    pieces = []
    for expt in sorted(p.terms, key=term_key, reverse=True):
        c = p.terms[expt]
        factors = []
        for name, e in zip(names, expt):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors or mag != 1:
            factors.insert(0, str(mag))
        body = " * ".join(factors)
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(("+ " if c > 0 else "- ") + body)
    return " ".join(pieces)


def _parse_rational(tok: str) -> Fraction | None:
    tok = tok.strip()
    if not tok:
        return None
    body = tok[1:] if tok[0] in "+-" else tok
    if "/" in body:
        num, _, den = body.partition("/")
        if num.isdigit() and den.isdigit():
            return Fraction(tok.replace(" ", ""))
        return None
    return Fraction(tok) if body.isdigit() else None


def parse_poly(text: str, names: Sequence[str] | int) -> MultiPoly:
    """Parse the term-sum text format; exact inverse of poly_to_text."""
    if isinstance(names, int):
        names = default_names(names)
    index = {name: i for i, name in enumerate(names)}
    nvars = len(names)
    src = text.strip()
    if not src:
        raise PolyParseError("empty polynomial text")

    # split into signed terms at top-level + and - (no parentheses in format)
    terms_txt: list[tuple[int, str]] = []
    sign, buf = 1, []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch in "+-":
            chunk = "".join(buf).strip()
            if chunk:
                terms_txt.append((sign, chunk))
                sign = 1
            sign *= -1 if ch == "-" else 1
            buf = []
        else:
            buf.append(ch)
        i += 1
    chunk = "".join(buf).strip()
    if chunk:
        terms_txt.append((sign, chunk))
    elif not terms_txt:
        raise PolyParseError(f"cannot parse polynomial: {text!r}")

    poly = MultiPoly(nvars)
    for sgn, term in terms_txt:
        if not term:
            raise PolyParseError(f"dangling sign in {text!r}")
        coeff = Fraction(sgn)
        expt = [0] * nvars
        for factor in term.split("*"):
            factor = factor.strip()
            if not factor:
                raise PolyParseError(f"empty factor in term {term!r}")
            r = _parse_rational(factor)
            if r is not None:
                coeff *= r
                continue
            name, caret, power = factor.partition("^")
            name = name.strip()
            if name not in index:
                raise PolyParseError(f"unknown variable {name!r} in term {term!r}")
            if caret:
                power = power.strip()
                if not power.isdigit():
                    raise PolyParseError(f"bad exponent in factor {factor!r}")
                expt[index[name]] += int(power)
            else:
                expt[index[name]] += 1
        poly = poly + MultiPoly(nvars, {tuple(expt): coeff})
    return poly
