"""Homogeneous-form utilities: binary-form gcds and exact ideal membership.

A binary form (homogeneous polynomial in two variables) factors over the
algebraic closure into linear forms, so a family of binary forms has a
common projective zero exactly when its gcd is nonconstant.  The gcd is
computed through the standard dictionary with univariate polynomials:
split off the common power of the first variable, dehomogenize the rest.

The ideal-membership solver answers "is this degree-m form an explicit
combination of the given forms with homogeneous cofactors?" by exact
Gaussian elimination over Q, one column per cofactor coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .poly import MultiPoly, monomials, term_key

# -- univariate helpers over Q (dense coefficient lists, index = degree) -----


def _uni_trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _uni_rem(a: list, b: list) -> list:
    a = a[:]
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        q = a[-1] / lb
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] -= q * bc
        _uni_trim(a)
    return a


def _uni_gcd(a: list, b: list) -> list:
    a, b = _uni_trim(a[:]), _uni_trim(b[:])
    while b:
        a, b = b, _uni_rem(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


# -- binary forms over Q -------------------------------------------------------


def _check_binary_form(f: MultiPoly):
    if f.nvars != 2:
        raise InputError("binary-form operation needs a 2-variable polynomial")
    if not f.is_homogeneous():
        raise InputError("binary-form operation needs a homogeneous polynomial")


def _split_x_power(f: MultiPoly) -> tuple[int, list]:
    """f = X^a * g with X not dividing g; return (a, g as univariate in t=Y/X)."""
    a = min(e[0] for e in f.terms)
    deg = f.homogeneous_degree()
    uni = [Fraction(0)] * (deg - a + 1)
    for (ex, ey), c in f.terms.items():
        uni[ey] = c
    return a, _uni_trim(uni)


def _binary_from_uni(uni: list, x_power: int) -> MultiPoly:
    d = len(uni) - 1
    terms = {}
    for j, c in enumerate(uni):
        if c:
            terms[(x_power + d - j, j)] = c
    return MultiPoly(2, terms)


def binary_form_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Monic gcd of two binary forms; gcd with zero is the other form."""
    if f.is_zero and g.is_zero:
        return MultiPoly(2)
    if f.is_zero or g.is_zero:
        h = g if f.is_zero else f
        _check_binary_form(h)
        lead = h.terms[max(h.terms, key=term_key)]
        return h * (1 / lead)
    _check_binary_form(f)
    _check_binary_form(g)
    af, uf = _split_x_power(f)
    ag, ug = _split_x_power(g)
    return _binary_from_uni(_uni_gcd(uf, ug), min(af, ag))


def binary_gcd_many(forms: Sequence[MultiPoly]) -> MultiPoly:
    acc = MultiPoly(2)
    for f in forms:
        acc = binary_form_gcd(acc, f)
    return acc


def is_constant_form(f: MultiPoly) -> bool:
    d = f.degree
    return d is None or d == 0


def rational_linear_factors(form: MultiPoly):
    """Split a binary form into rational linear factors and a remainder.

    Returns (factors, remainder) where factors is a list of
    ((alpha, beta), multiplicity) with alpha*X + beta*Y dividing the form,
    normalized to coprime integers with positive leading entry, and
    remainder is the (possibly constant) cofactor with no rational roots.
    """
    _check_binary_form(form)
    if form.is_zero:
        return [], form
    a, uni = _split_x_power(form)
    factors = []
    if a:
        factors.append(((Fraction(1), Fraction(0)), a))  # X^a divides: factor X

    # rational roots t0 of the dehomogenized univariate give factors Y - t0*X,
    # i.e. alpha = -t0, beta = 1 scaled to integers
    den_lcm = 1
    for c in uni:
        den_lcm = den_lcm * c.denominator // _gcd_int(den_lcm, c.denominator)
    z = [int(c * den_lcm) for c in uni]
    roots = _rational_roots(z)
    for t0 in roots:
        mult = 0
        while True:
            quo, rem = _uni_divmod_linear(uni, t0)
            if rem != 0:
                break
            uni = quo
            mult += 1
        if mult:
            alpha, beta = -t0.numerator, t0.denominator
            if alpha < 0 or (alpha == 0 and beta < 0):
                alpha, beta = -alpha, -beta
            factors.append(((Fraction(alpha), Fraction(beta)), mult))
    remainder = _binary_from_uni(uni, 0)
    return factors, remainder


def _gcd_int(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _rational_roots(z: list) -> list:
    """Rational roots of an integer-coefficient polynomial (list, index=degree)."""
    z = _uni_trim([Fraction(c) for c in z])
    if len(z) <= 1:
        return []
    k = 0
    while not z[k]:
        k += 1
    roots = [Fraction(0)] if k else []
    z = z[k:]
    a0, an = int(z[0]), int(z[-1])
    cands = set()
    for p in _divisors(abs(a0)):
        for q in _divisors(abs(an)):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    for r in sorted(cands):
        v = Fraction(0)
        for c in reversed(z):
            v = v * r + c
        if v == 0:
            roots.append(r)
    return roots


def _divisors(n: int) -> list:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def _uni_divmod_linear(uni: list, t0: Fraction):
    """Divide by (t - t0) synthetically; return (quotient, remainder value)."""
    n = len(uni) - 1
    quo = [Fraction(0)] * n
    acc = uni[n]
    for j in range(n - 1, -1, -1):
        quo[j] = acc
        acc = uni[j] + acc * t0
    return quo, acc


# -- binary forms over F_p -----------------------------------------------------


def reduce_form_mod_p(f: MultiPoly, p: int) -> dict:
    """Binary form with p-integral coefficients -> {exponent: residue != 0}."""
    out = {}
    for expt, c in f.terms.items():
        if c.denominator % p == 0:
            raise InputError("coefficient is not integral at p")
        r = c.numerator * pow(c.denominator, -1, p) % p
        if r:
            out[expt] = r
    return out


def _split_x_power_mod(terms: dict, p: int):
    if not terms:
        return None
    a = min(e[0] for e in terms)
    deg = max(e[0] + e[1] for e in terms)
    uni = [0] * (deg - a + 1)
    for (ex, ey), c in terms.items():
        uni[ey] = c % p
    while uni and uni[-1] == 0:
        uni.pop()
    return a, uni


def _uni_gcd_mod(a: list, b: list, p: int) -> list:
    def rem(u, v):
        u = u[:]
        dv, inv = len(v) - 1, pow(v[-1], -1, p)
        while u and len(u) - 1 >= dv:
            q = u[-1] * inv % p
            shift = len(u) - 1 - dv
            for i, vc in enumerate(v):
                u[shift + i] = (u[shift + i] - q * vc) % p
            while u and u[-1] == 0:
                u.pop()
        return u

    a, b = a[:], b[:]
    while b:
        a, b = b, rem(a, b)
    return a


def binary_gcd_nonconstant_mod_p(forms: Sequence[MultiPoly], p: int) -> bool:
    """True iff the reductions mod p of the forms share a projective zero.

    Forms reducing to zero mod p are skipped; if all reduce to zero the
    answer is True (everything vanishes).
    """
    acc = None  # (x_power, uni) accumulated gcd
    for f in forms:
        split = _split_x_power_mod(reduce_form_mod_p(f, p), p)
        if split is None:
            continue
        if acc is None:
            acc = split
            continue
        ax, ux = acc
        bx, ub = split
        acc = (min(ax, bx), _uni_gcd_mod(ux, ub, p))
    if acc is None:
        return True
    a, uni = acc
    return a > 0 or len(uni) - 1 > 0


# -- exact homogeneous ideal membership ---------------------------------------


def solve_homogeneous_membership(
    generators: Sequence[MultiPoly], target: MultiPoly, m: int
):
    """Express ``target`` (homogeneous, degree m) as sum u_j * generators[j].

    Each cofactor u_j is homogeneous of degree m - deg(g_j); generators of
    degree > m or identically zero get the zero cofactor.  Returns the list
    of cofactors, or None when no combination exists.  Deterministic: free
    variables are set to zero under first-nonzero pivoting.
    """
    if not generators:
        raise InputError("need at least one generator")
    nvars = generators[0].nvars
    for g in generators:
        if g.nvars != nvars:
            raise InputError("generators must share a variable count")
        if not g.is_homogeneous():
            raise InputError("generators must be homogeneous")
    if target.nvars != nvars or not target.is_homogeneous():
        raise InputError("target must be homogeneous in the same variables")
    tdeg = target.homogeneous_degree()
    if tdeg is not None and tdeg != m:
        raise InputError(f"target degree {tdeg} does not match m={m}")

    rows_monos = monomials(nvars, m)
    row_index = {e: i for i, e in enumerate(rows_monos)}
    columns = []  # (generator index, cofactor monomial)
    col_vectors = []
    for j, g in enumerate(generators):
        d = g.homogeneous_degree()
        if d is None or d > m:
            continue
        for mono in monomials(nvars, m - d):
            vec = {}
            for e, c in g.terms.items():
                expt = tuple(a + b for a, b in zip(e, mono))
                vec[row_index[expt]] = vec.get(row_index[expt], Fraction(0)) + c
            columns.append((j, mono))
            col_vectors.append(vec)

    nrows, ncols = len(rows_monos), len(columns)
    aug = [[Fraction(0)] * (ncols + 1) for _ in range(nrows)]
    for cidx, vec in enumerate(col_vectors):
        for ridx, c in vec.items():
            aug[ridx][cidx] = c
    for e, c in target.terms.items():
        aug[row_index[e]][ncols] = c

    # Gaussian elimination, first-nonzero pivot per column
    pivot_of_col = [-1] * ncols
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if aug[i][c]), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivot_of_col[c] = r
        r += 1
        if r == nrows:
            break
    for i in range(nrows):
        if aug[i][ncols] and all(not v for v in aug[i][:ncols]):
            return None

    solution = [Fraction(0)] * ncols
    for c in range(ncols):
        if pivot_of_col[c] >= 0:
            solution[c] = aug[pivot_of_col[c]][ncols]

    cofactors = [MultiPoly(nvars) for _ in generators]
    for (j, mono), v in zip(columns, solution):
        if v:
            cofactors[j] = cofactors[j] + MultiPoly(nvars, {mono: v})
    return cofactors
