"""Dirichlet characters, conductors, exact cyclotomic sums, and the
annihilator tuples driving the membership criterion.

Character values are carried exactly: a value is either 0 (non-unit
argument) or a root of unity e(num/den).  Sums of such values live in
``CycloSum``, the group ring Q[Z_m] reduced against the m-th cyclotomic
polynomial for zero tests.  Floating point appears only when rendering.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import mpmath

from .errors import BudgetExceededError, EmptyRkError
from .intpoly import IntPoly, eval_mod
from .intmat import IntMatrix, smith_normal_form
from .resring import MultFnSpec, UnitGroup, r_v_set, unit_group

__all__ = [
    "RootOfUnity",
    "CycloSum",
    "DirichletChar",
    "characters_mod",
    "conductor",
    "z_sum",
    "annihilator_tuples",
    "generates_full",
    "cyclotomic_poly",
    "sqrt_prime_cyclosum",
]


@dataclass(frozen=True)
class RootOfUnity:
    """Exactly e(num/den) = exp(2*pi*i*num/den), reduced."""

    num: int
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise ValueError("den must be positive")
        n = self.num % self.den
        g = math.gcd(n, self.den)
        object.__setattr__(self, "num", n // g)
        object.__setattr__(self, "den", self.den // g)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        den = math.lcm(self.den, other.den)
        return RootOfUnity(self.num * (den // self.den) + other.num * (den // other.den), den)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity(-self.num, self.den)

    def is_one(self) -> bool:
        return self.num == 0

    def exponent_for_order(self, m: int) -> int:
        if m % self.den:
            raise ValueError(f"order {m} incompatible with den {self.den}")
        return self.num * (m // self.den) % m


# -- cyclotomic polynomials, cached ----------------------------------------

_cyclo_cache: dict[int, tuple[int, ...]] = {}
_cyclo_lock = threading.RLock()  # reentrant: the computation recurses on divisors


def _poly_divmod_int(a: list[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer coefficient lists (used for x^m-1 products)."""
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for k in range(len(a) - db - 1, -1, -1):
        c = a[db + k] // b[-1]
        q[k] = c
        if c:
            for i, bc in enumerate(b):
                a[i + k] -= c * bc
    while a and a[-1] == 0:
        a.pop()
    return q, a


def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, constant term first."""
    if m in _cyclo_cache:
        return _cyclo_cache[m]
    with _cyclo_lock:
        if m in _cyclo_cache:
            return _cyclo_cache[m]
        poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
        for d in range(1, m):
            if m % d == 0:
                poly, rem = _poly_divmod_int(poly, cyclotomic_poly(d))
                assert not rem
        result = tuple(poly)
        _cyclo_cache[m] = result
        return result


class CycloSum:
    """Element of Q(zeta_m) as a rational combination of m-th roots of unity."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Optional[dict] = None):
        self.order = order
        cs: dict[int, Fraction] = {}
        if coeffs:
            for e, c in coeffs.items():
                c = Fraction(c)
                if c:
                    e %= order
                    cs[e] = cs.get(e, Fraction(0)) + c
        self.coeffs = {e: c for e, c in cs.items() if c}

    @classmethod
    def zero(cls, order: int) -> "CycloSum":
        return cls(order)

    @classmethod
    def from_rational(cls, x, order: int = 1) -> "CycloSum":
        return cls(order, {0: Fraction(x)})

    @classmethod
    def from_root(cls, root: RootOfUnity, order: Optional[int] = None) -> "CycloSum":
        m = order if order is not None else root.den
        return cls(m, {root.exponent_for_order(m): Fraction(1)})

    def lift(self, order: int) -> "CycloSum":
        """Re-express in Q(zeta_order); order must be a multiple."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError("can only lift to a multiple order")
        k = order // self.order
        return CycloSum(order, {e * k: c for e, c in self.coeffs.items()})

    def __add__(self, other: "CycloSum") -> "CycloSum":
        m = math.lcm(self.order, other.order)
        a, b = self.lift(m), other.lift(m)
        out = dict(a.coeffs)
        for e, c in b.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return CycloSum(m, out)

    def __neg__(self) -> "CycloSum":
        return CycloSum(self.order, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "CycloSum") -> "CycloSum":
        return self + (-other)

    def __mul__(self, other) -> "CycloSum":
        if isinstance(other, (int, Fraction)):
            return CycloSum(self.order, {e: c * other for e, c in self.coeffs.items()})
        m = math.lcm(self.order, other.order)
        a, b = self.lift(m), other.lift(m)
        out: dict[int, Fraction] = {}
        for e1, c1 in a.coeffs.items():
            for e2, c2 in b.coeffs.items():
                e = (e1 + e2) % m
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return CycloSum(m, out)

    __rmul__ = __mul__

    def conjugate(self) -> "CycloSum":
        return CycloSum(self.order, {-e % self.order: c for e, c in self.coeffs.items()})

    def reduced(self) -> list[Fraction]:
        """Canonical coordinates in the power basis 1, z, ..., z^(phi(m)-1),
        i.e. the remainder mod Phi_m.  Unique, so equality and rationality
        tests read off it directly."""
        m = self.order
        phi = cyclotomic_poly(m)
        deg = len(phi) - 1
        poly = [Fraction(0)] * m
        for e, c in self.coeffs.items():
            poly[e] += c
        for k in range(m - 1, deg - 1, -1):
            c = poly[k]
            if c:
                poly[k] = Fraction(0)
                for i in range(deg):
                    poly[k - deg + i] -= c * phi[i]
        return poly[:deg]

    def is_zero(self) -> bool:
        """Exact: reduce mod Phi_m and test for the zero remainder."""
        if not self.coeffs:
            return True
        return all(c == 0 for c in self.reduced())

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycloSum.from_rational(other, self.order)
        if not isinstance(other, CycloSum):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("CycloSum is unhashable (equality is algebraic)")

    def as_rational(self) -> Optional[Fraction]:
        """The exact rational value, or None if not rational."""
        if not self.coeffs:
            return Fraction(0)
        if set(self.coeffs) == {0}:
            return self.coeffs[0]
        red = self.reduced()
        if any(c for c in red[1:]):
            return None
        return red[0]

    def to_mpc(self, dps: int = 60) -> "mpmath.mpc":
        with mpmath.workdps(dps):
            acc = mpmath.mpc(0)
            for e, c in self.coeffs.items():
                acc += mpmath.mpf(c.numerator) / c.denominator * mpmath.e ** (
                    2j * mpmath.pi * e / self.order
                )
            return acc

    def abs_value(self, dps: int = 60) -> "mpmath.mpf":
        with mpmath.workdps(dps):
            return abs(self.to_mpc(dps))

    def __repr__(self):
        terms = ", ".join(f"{e}: {c}" for e, c in sorted(self.coeffs.items()))
        return f"CycloSum(order={self.order}, {{{terms}}})"


def sqrt_prime_cyclosum(p: int) -> CycloSum:
    """sqrt(p) exactly, as a quadratic Gauss sum in a cyclotomic field.

    Lives in Q(zeta_p) for p = 1 mod 4, Q(zeta_4p) for p = 3 mod 4,
    and Q(zeta_8) for p = 2.
    """
    if p == 2:
        return CycloSum(8, {1: Fraction(1), 7: Fraction(1)})
    if p % 4 == 1:
        coeffs = {}
        for a in range(1, p):
            coeffs[a] = Fraction(1) if pow(a, (p - 1) // 2, p) == 1 else Fraction(-1)
        return CycloSum(p, coeffs)
    # p = 3 mod 4: Gauss sum g = i*sqrt(p); multiply by zeta_4^{-1}
    m = 4 * p
    coeffs = {}
    for a in range(1, p):
        sign = Fraction(1) if pow(a, (p - 1) // 2, p) == 1 else Fraction(-1)
        e = (3 * p + 4 * a) % m  # zeta_4^3 * zeta_p^a
        coeffs[e] = coeffs.get(e, Fraction(0)) + sign
    return CycloSum(m, coeffs)


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirichletChar:
    """Character mod q as an exponent vector against the UnitGroup basis."""

    q: int
    exponents: tuple[int, ...]

    def group(self) -> UnitGroup:
        return unit_group(self.q)

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def order(self) -> int:
        grp = self.group()
        o = 1
        for a, d in zip(self.exponents, grp.orders):
            if a:
                o = math.lcm(o, d // math.gcd(a, d))
        return o

    def value(self, x: int) -> Optional[RootOfUnity]:
        """Value at x: None encodes 0 (x not a unit)."""
        grp = self.group()
        if not grp.is_unit(x):
            return None
        vec = grp.dlog(x)
        num, den = 0, 1
        for a, e, d in zip(self.exponents, vec, grp.orders):
            if a and e:
                den_ = d
                num = num * den_ + a * e * den
                den = den * den_
                g = math.gcd(num, den)
                num, den = num // g, den // g
        return RootOfUnity(num, den)

    def conjugate(self) -> "DirichletChar":
        grp = self.group()
        return DirichletChar(
            self.q, tuple((-a) % d for a, d in zip(self.exponents, grp.orders))
        )

    def __mul__(self, other: "DirichletChar") -> "DirichletChar":
        if self.q != other.q:
            raise ValueError("character moduli differ")
        grp = self.group()
        return DirichletChar(
            self.q,
            tuple((a + b) % d for a, b, d in zip(self.exponents, other.exponents, grp.orders)),
        )


def characters_mod(q: int) -> Iterator[DirichletChar]:
    """All phi(q) characters mod q, lexicographic in exponents, trivial first."""
    grp = unit_group(q)
    for vec in itertools.product(*(range(d) for d in grp.orders)):
        yield DirichletChar(q, vec)


def trivial_char(q: int) -> DirichletChar:
    grp = unit_group(q)
    return DirichletChar(q, (0,) * len(grp.orders))


def conductor(chi: DirichletChar) -> int:
    """Smallest d | q such that chi is induced by a character mod d.

    Per prime-power component: smallest p^j such that chi is trivial on
    the kernel of U_{p^e} -> U_{p^j}; the conductor multiplies over
    components.
    """
    grp = chi.group()
    cond = 1
    pos = 0
    for comp in grp.components:
        n = len(comp.orders)
        sub_exps = chi.exponents[pos : pos + n]
        pos += n
        if all(a == 0 for a in sub_exps):
            continue
        sub_chi = DirichletChar(comp.modulus, sub_exps)
        pe = comp.modulus
        for j in range(1, comp.e + 1):
            d = comp.p**j
            # trivial on {u = 1 mod d}?
            ok = True
            for u in range(1, pe, d):
                if math.gcd(u, comp.p) == 1:
                    val = sub_chi.value(u)
                    if val is not None and not val.is_one():
                        ok = False
                        break
            if ok:
                cond *= d
                break
        else:
            cond *= pe
    return cond


# ---------------------------------------------------------------------------
# Z sums
# ---------------------------------------------------------------------------


def char_value_table(chi: DirichletChar, m: int) -> list[int]:
    """Exponent of chi(x) as an m-th root of unity, per residue x; -1 for 0."""
    grp = chi.group()
    q = chi.q
    out = [-1] * max(q, 1)
    if q == 1:
        out[0] = 0
        return out
    for u in grp.units():
        out[u] = chi.value(u).exponent_for_order(m)
    return out


def z_sum(Q: int, chis: Sequence[DirichletChar], fs: Sequence[IntPoly]) -> CycloSum:
    """Z_{Q; chi_1..chi_K}(F_1..F_K) = sum over units v of prod chi_i(F_i(v))."""
    if len(chis) != len(fs):
        raise ValueError("need one polynomial per character")
    grp = unit_group(Q)
    m = max(grp.exponent, 1)
    tables = [char_value_table(chi, m) for chi in chis]
    counts = [0] * m
    for v in grp.units():
        e_total = 0
        dead = False
        for chi_tab, f in zip(tables, fs):
            e = chi_tab[eval_mod(f, v, Q)] if Q > 1 else 0
            if e < 0:
                dead = True
                break
            e_total += e
        if not dead:
            counts[e_total % m] += 1
    return CycloSum(m, {e: Fraction(c) for e, c in enumerate(counts) if c})


# ---------------------------------------------------------------------------
# annihilator tuples
# ---------------------------------------------------------------------------

_ANNIHILATOR_BUDGET = 1 << 22


def _annihilator_group(grp: UnitGroup, vectors: list[tuple[int, ...]], K: int):
    """All K-tuples of exponent vectors trivial on the subgroup of U_q^K
    generated by ``vectors`` (each a concatenated dlog vector of length
    K * len(grp.orders)).

    Works in the exponent lattice: the subgroup lifts to the lattice
    spanned by the generators together with diag(orders); the annihilator
    is read off the SNF row transform.
    """
    orders = list(grp.orders) * K
    n = len(orders)
    if n == 0:
        return [tuple()]
    cols = [tuple(orders[i] if i == j else 0 for i in range(n)) for j in range(n)]
    cols.extend(vectors)
    A = IntMatrix(n, len(cols), [col[i] for i in range(n) for col in cols])
    snf = smith_normal_form(A)
    diag = snf.invariant_factors
    U = snf.U
    size = 1
    for e in diag:
        size *= e
        if size > _ANNIHILATOR_BUDGET:
            raise BudgetExceededError("annihilator group too large to enumerate")
    # dual basis: w_i = (row i of U) / diag[i], taken mod Z^n
    rows = [U.row(i) for i in range(n)]
    out = []
    for ts in itertools.product(*(range(e) for e in diag)):
        a = []
        for j in range(n):
            # a_j = orders[j] * sum_i ts_i * U[i][j] / diag[i]  (mod orders[j])
            num = Fraction(0)
            for i, t in enumerate(ts):
                if t:
                    num += Fraction(t * rows[i][j], diag[i])
            val = num * orders[j]
            assert val.denominator == 1, "annihilator exponent not integral"
            a.append(val.numerator % orders[j])
        out.append(tuple(a))
    return sorted(set(out))


def annihilator_tuples(spec: MultFnSpec, q: int, k: int) -> list[tuple[DirichletChar, ...]]:
    """Character K-tuples (including the trivial one) that are trivial on
    T_k(q) = {(W_{1,k}(u), ..., W_{K,k}(u)) : u in R_k(q)}."""
    R = r_v_set(spec, q, k)
    if not R:
        raise EmptyRkError(f"R_{k}({q}) is empty")
    grp = unit_group(q)
    K = spec.K
    vectors = set()
    for u in R:
        vec = []
        for i in range(K):
            w = eval_mod(spec.poly(i, k), u, q) if q > 1 else 0
            vec.extend(grp.dlog(w) if q > 1 else ())
        vectors.add(tuple(vec))
    exps = _annihilator_group(grp, sorted(vectors), K)
    g = len(grp.orders)
    out = []
    for a in exps:
        out.append(tuple(DirichletChar(q, tuple(a[i * g : (i + 1) * g])) for i in range(K)))
    return out


def generates_full(spec: MultFnSpec, q: int, k: int) -> bool:
    """True iff T_k(q) generates U_q^K, i.e. only the trivial tuple annihilates."""
    return len(annihilator_tuples(spec, q, k)) == 1
