"""Exact dense polynomials over the integers.

A polynomial is an ``IntPoly`` wrapping a tuple of arbitrary-precision
integer coefficients, constant term first, with no trailing zeros; the
zero polynomial is the empty tuple.  All arithmetic is exact.  Rational
operations (divisibility tests, gcds) stay in integer arithmetic via
primitive parts and pseudo-remainders.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ConstantInputError

__all__ = [
    "IntPoly",
    "T",
    "eval_mod",
    "ord_ell",
    "is_squarefull",
    "poly_gcd",
    "exact_div",
    "divides",
    "radical",
    "squarefree_decomposition",
    "resultant",
    "discriminant",
    "coprime_basis",
    "CoprimeBasisDecomposition",
]


class IntPoly:
    """Dense integer polynomial; immutable and hashable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(int(c) for c in cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    # -- basic structure ------------------------------------------------

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> int:
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def content(self) -> int:
        """Nonnegative gcd of the coefficients (0 for the zero polynomial)."""
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> "IntPoly":
        """Primitive part with positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.leading() < 0:
            c = -c
        return IntPoly(x // c for x in self.coeffs)

    # -- ring operations -------------------------------------------------

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPoly":
        if n < 0:
            raise ValueError("negative power")
        result = IntPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "IntPoly":
        """Multiply by T**k."""
        if not self.coeffs:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def deriv(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def compose(self, other: "IntPoly") -> "IntPoly":
        """self(other(T)), by Horner."""
        acc = IntPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + IntPoly([c])
        return acc

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- dunder plumbing ---------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("IntPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mon = "T" if i == 1 else f"T^{i}"
                if c == 1:
                    parts.append(mon)
                elif c == -1:
                    parts.append(f"-{mon}")
                else:
                    parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


#: The monomial T, for building polynomials in code and tests.
T = IntPoly([0, 1])


def eval_mod(p: IntPoly, x: int, m: int) -> int:
    """p(x) mod m by Horner; exact for arbitrary magnitudes."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    acc = 0
    x = x % m
    for c in reversed(p.coeffs):
        acc = (acc * x + c) % m
    return acc


def ord_ell(p: IntPoly, ell: int):
    """Largest e with ell**e dividing every coefficient; math.inf for 0."""
    if p.is_zero():
        return math.inf
    e = 0
    coeffs = [abs(c) for c in p.coeffs if c]
    while all(c % ell == 0 for c in coeffs):
        coeffs = [c // ell for c in coeffs]
        e += 1
    return e


# -- division and gcd over Q, kept in integer arithmetic -------------------


def _pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, in Z[T]."""
    da, db = a.degree(), b.degree()
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero polynomial")
    if da < db:
        return a
    lb = b.leading()
    r = list(a.coeffs)
    for k in range(da - db, -1, -1):
        lead = r[db + k]
        for i in range(len(r)):
            r[i] *= lb
        if lead:
            for i, c in enumerate(b.coeffs):
                r[i + k] -= lead * c
        r[db + k] = 0
    return IntPoly(r[:db])


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Gcd over Q as a primitive positive-lc polynomial in Z[T].

    Primitive pseudo-remainder sequence; entries stay integral.
    """
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    a, b = a.primitive(), b.primitive()
    if a.degree() < b.degree():
        a, b = b, a
    while not b.is_zero():
        r = _pseudo_rem(a, b)
        a, b = b, r.primitive()
    return a


def _divmod_q(a: Sequence[Fraction], b: Sequence[Fraction]):
    """Long division over Q on coefficient lists (constant first)."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - db)
    for k in range(len(a) - db - 1, -1, -1):
        coef = a[db + k] / lb
        q[k] = coef
        if coef:
            for i, c in enumerate(b):
                a[i + k] -= coef * c
    while a and a[-1] == 0:
        a.pop()
    return q, a


def divides(b: IntPoly, a: IntPoly) -> bool:
    """True iff b | a in Q[T] (b nonzero)."""
    if b.is_zero():
        return a.is_zero()
    if a.is_zero():
        return True
    _, r = _divmod_q([Fraction(c) for c in a.coeffs], [Fraction(c) for c in b.coeffs])
    return not r


def exact_div(a: IntPoly, b: IntPoly) -> IntPoly:
    """a / b in Q[T]; raises if the division is not exact.

    The result is returned in Z[T]: exact quotients of the primitive
    polynomials appearing throughout this module are integral (Gauss).
    """
    q, r = _divmod_q([Fraction(c) for c in a.coeffs], [Fraction(c) for c in b.coeffs])
    if r:
        raise ValueError(f"{b} does not divide {a}")
    out = []
    for c in q:
        if c.denominator != 1:
            raise ValueError(f"quotient of {a} by {b} is not integral")
        out.append(c.numerator)
    return IntPoly(out)


def radical(p: IntPoly) -> IntPoly:
    """Squarefree part over Q: product of distinct irreducible factors.

    Primitive with positive leading coefficient.
    """
    if p.is_constant():
        raise ConstantInputError("radical of a constant polynomial")
    pp = p.primitive()
    g = poly_gcd(pp, pp.deriv())
    return exact_div(pp, g).primitive()


def squarefree_decomposition(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Musser's algorithm over Q: pp(p) = prod S_e^e with the S_e
    squarefree, pairwise coprime, primitive, positive leading coeff."""
    if p.is_constant():
        raise ConstantInputError("squarefree decomposition of a constant")
    pp = p.primitive()
    a = poly_gcd(pp, pp.deriv())
    b = exact_div(pp, a)
    out = []
    e = 1
    while b.degree() > 0:
        c = poly_gcd(b, a)
        s = exact_div(b, c)
        if s.degree() > 0:
            out.append((s.primitive(), e))
        b = c
        a = exact_div(a, c)
        e += 1
    return out


def is_squarefull(p: IntPoly) -> bool:
    """True iff every complex root of p has multiplicity >= 2.

    Equivalent to radical(p)^2 | p; repeated gcds only, no factorization.
    """
    if p.is_constant():
        raise ConstantInputError("is_squarefull needs a nonconstant polynomial")
    rad = radical(p)
    return divides(rad * rad, p.primitive())


# -- resultants ---------------------------------------------------------


def resultant(a: IntPoly, b: IntPoly) -> int:
    """Res(a, b) over Z, by fraction-free elimination of the Sylvester matrix."""
    da, db = a.degree(), b.degree()
    if da < 0 or db < 0:
        return 0
    if da == 0:
        return a.coeffs[0] ** db
    if db == 0:
        return b.coeffs[0] ** da
    n = da + db
    rows = []
    for i in range(db):
        row = [0] * n
        for j, c in enumerate(reversed(a.coeffs)):
            row[i + j] = c
        rows.append(row)
    for i in range(da):
        row = [0] * n
        for j, c in enumerate(reversed(b.coeffs)):
            row[i + j] = c
        rows.append(row)
    # Bareiss fraction-free determinant
    sign = 1
    prev = 1
    m = rows
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def discriminant(p: IntPoly) -> Fraction:
    """disc(p) = (-1)^(d(d-1)/2) Res(p, p') / lc(p)."""
    d = p.degree()
    if d < 1:
        raise ConstantInputError("discriminant of a constant polynomial")
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return Fraction(sign * resultant(p, p.deriv()), p.leading())


# -- coprime basis -------------------------------------------------------


class CoprimeBasisDecomposition:
    """F_i = contents[i] * prod_j basis[j]**exponents[j][i], exactly.

    basis: pairwise coprime squarefree primitive polynomials, positive
    leading coefficients, sorted by (degree, coefficients) so that the
    row order of the exponent matrix is deterministic.
    """

    def __init__(self, basis, exponents, contents):
        self.basis = tuple(basis)
        self.exponents = tuple(tuple(row) for row in exponents)
        self.contents = tuple(contents)

    def reconstruct(self, i: int) -> IntPoly:
        acc = IntPoly([self.contents[i]])
        for j, g in enumerate(self.basis):
            acc = acc * g ** self.exponents[j][i]
        return acc

    def __repr__(self):
        return (
            f"CoprimeBasisDecomposition(basis={list(self.basis)}, "
            f"exponents={[list(r) for r in self.exponents]}, contents={list(self.contents)})"
        )


def _pairwise_coprime_refine(polys: Iterable[IntPoly]) -> list[IntPoly]:
    """Refine squarefree primitives into a pairwise coprime family.

    Whenever f shares a factor g with a basis element b, both dissolve
    into g, b/g, f/g; total degree strictly drops, so this terminates.
    """
    basis: list[IntPoly] = []
    work = [p for p in polys if p.degree() > 0]
    while work:
        f = work.pop().primitive()
        if f.degree() == 0:
            continue
        for i, b in enumerate(basis):
            g = poly_gcd(f, b)
            if g.degree() == 0:
                continue
            basis.pop(i)
            for part in (g, exact_div(b, g), exact_div(f, g)):
                if part.degree() > 0:
                    work.append(part)
            break
        else:
            basis.append(f)
    return basis


def coprime_basis(fs: Sequence[IntPoly]) -> CoprimeBasisDecomposition:
    """Gcd-free squarefree basis of a family of nonconstant polynomials.

    Stand-in for factorization into irreducibles: splitting a basis
    element further would only duplicate exponent-matrix rows, which
    changes neither column rank nor invariant factors.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("empty family")
    for f in fs:
        if f.is_constant():
            raise ConstantInputError(f"constant polynomial in family: {f!r}")
    # split each input by multiplicity first, so that every refined basis
    # element occurs in each input with a single well-defined exponent
    parts = []
    for f in fs:
        parts.extend(s for s, _ in squarefree_decomposition(f))
    basis = _pairwise_coprime_refine(parts)
    basis.sort(key=lambda g: (g.degree(), g.coeffs))
    exponents = [[0] * len(fs) for _ in basis]
    contents = []
    for i, f in enumerate(fs):
        rem = f.primitive()
        for j, g in enumerate(basis):
            e = 0
            while divides(g, rem):
                rem = exact_div(rem, g)
                e += 1
            exponents[j][i] = e
        if rem.degree() != 0:
            raise AssertionError(f"basis does not exhaust {f!r}")
        c = f.content() * (1 if f.leading() > 0 else -1)
        contents.append(c * rem.coeffs[0])
    return CoprimeBasisDecomposition(basis, exponents, contents)
