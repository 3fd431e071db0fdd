"""Structure of (Z/qZ)^*, the unit sets R_v(q) and densities alpha_v(q),
k-admissibility, lift counting, and multiplicative function evaluation.

Unit groups are cached per modulus with table-backed discrete logs; the
hard ceiling is q <= 10**7.  Counting always works per prime-power
component and multiplies out (CRT), never over U_q directly.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    BeyondVUndefinedError,
    BudgetExceededError,
    ModulusTooLargeError,
    ZeroDensityError,
)
from .intpoly import IntPoly, eval_mod

__all__ = [
    "MODULUS_LIMIT",
    "factorize",
    "euler_phi",
    "MultFnSpec",
    "BEYOND_UNDEFINED",
    "BEYOND_CONSTANT_ONE",
    "Periodic",
    "UnitGroup",
    "unit_group",
    "r_v_set",
    "alpha_v",
    "alpha_poly",
    "admissible_k",
    "lift_count",
    "mult_fn_value",
]

MODULUS_LIMIT = 10**7

_SET_BUDGET = 2**22  # largest R_v(q) we will materialize as a Python set


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division; fine for n <= 10**14."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
        d += 6
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    return reduce(lambda a, pe: a * (pe[0] - 1) * pe[0] ** (pe[1] - 1), factorize(n), 1) if n > 1 else 1


# ---------------------------------------------------------------------------
# multiplicative function families
# ---------------------------------------------------------------------------

BEYOND_UNDEFINED = "undefined"
BEYOND_CONSTANT_ONE = "constant_one"


@dataclass(frozen=True)
class Periodic:
    """f_i(p^v) for v > V reuses W_{i, v-pi}; residues mod q only."""

    period: int


@dataclass(frozen=True)
class MultFnSpec:
    """A family of K multiplicative functions defined by polynomials.

    ``polys[i][v-1]`` is W_{i,v}, controlling f_i(p^v) for v <= V.
    ``beyond_v`` extends past V; ``prime_power_fn(i, p, v)`` (when set)
    supplies exact integer values at every prime power and must agree
    with the polynomials on v <= V.
    """

    names: tuple[str, ...]
    polys: tuple[tuple[IntPoly, ...], ...]
    beyond_v: object = BEYOND_UNDEFINED
    prime_power_fn: Optional[Callable[[int, int, int], int]] = None
    preset: Optional[str] = None

    @property
    def K(self) -> int:
        return len(self.polys)

    @property
    def V(self) -> int:
        return len(self.polys[0])

    def poly(self, i: int, v: int) -> IntPoly:
        return self.polys[i][v - 1]

    def product_poly(self, v: int) -> IntPoly:
        """W_v = prod_i W_{i,v}."""
        acc = IntPoly([1])
        for i in range(self.K):
            acc = acc * self.poly(i, v)
        return acc

    def value_at_prime_power(self, i: int, p: int, v: int, mod: Optional[int] = None) -> int:
        """f_i(p^v), exactly, or mod ``mod`` when given."""
        if v == 0:
            return 1 % mod if mod else 1
        if v <= self.V:
            if self.prime_power_fn is not None:
                val = self.prime_power_fn(i, p, v)
                return val % mod if mod else val
            w = self.poly(i, v)
            return eval_mod(w, p, mod) if mod else w(p)
        if self.prime_power_fn is not None:
            val = self.prime_power_fn(i, p, v)
            return val % mod if mod else val
        if self.beyond_v == BEYOND_CONSTANT_ONE:
            return 1 % mod if mod else 1
        if isinstance(self.beyond_v, Periodic):
            if mod is None:
                raise BeyondVUndefinedError(
                    "periodic extension defines residues only; pass a modulus"
                )
            pi = self.beyond_v.period
            if not 1 <= pi <= self.V:
                raise BeyondVUndefinedError("periodic rule needs 1 <= period <= V")
            vv = v
            while vv > self.V:
                vv -= pi
            return eval_mod(self.poly(i, vv), p, mod)
        raise BeyondVUndefinedError(f"f_{i}(p^{v}) undefined: v > V = {self.V}")


def mult_fn_value(
    spec: MultFnSpec,
    i: int,
    n_factored: Sequence[tuple[int, int]],
    mod: Optional[int] = None,
) -> int:
    """f_i(n) from the factorization of n."""
    acc = 1 % mod if mod else 1
    for p, v in n_factored:
        acc *= spec.value_at_prime_power(i, p, v, mod)
        if mod:
            acc %= mod
    return acc


# ---------------------------------------------------------------------------
# unit group structure
# ---------------------------------------------------------------------------


def _primitive_root_mod_pe(p: int, e: int) -> int:
    """Generator of the cyclic group U_{p^e}, odd p."""
    fac = factorize(p - 1)
    g = 2
    while True:
        if all(pow(g, (p - 1) // f, p) != 1 for f, _ in fac):
            break
        g += 1
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass
class _Component:
    """One CRT factor U_{p^e} with a fixed generator basis."""

    p: int
    e: int
    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    _dlog: Optional[dict] = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def dlog_table(self) -> dict:
        # lazy; lock guards the single insert, reads are GIL-safe
        if self._dlog is None:
            with self._lock:
                if self._dlog is None:
                    self._dlog = self._build_dlog()
        return self._dlog

    def _build_dlog(self) -> dict:
        pe = self.modulus
        if not self.generators:
            return {1 % pe: ()}
        if self.p == 2 and self.e >= 3:
            table = {}
            x = 1
            for b in range(self.orders[1]):
                table[x] = b
                x = (x * 5) % pe
            out = {}
            for u, b in table.items():
                out[u] = (0, b)
                out[(-u) % pe] = (1, b)
            return out
        g = self.generators[0]
        out = {}
        x = 1
        for k in range(self.orders[0]):
            out[x] = (k,)
            x = (x * g) % pe
        return out


class UnitGroup:
    """(Z/qZ)^* split into prime-power components with generator bases."""

    def __init__(self, q: int):
        if q < 1:
            raise ValueError("modulus must be positive")
        if q > MODULUS_LIMIT:
            raise ModulusTooLargeError(f"q = {q} exceeds {MODULUS_LIMIT}")
        self.q = q
        self.prime_powers = tuple((p, e) for p, e in factorize(q)) if q > 1 else ()
        comps = []
        for p, e in self.prime_powers:
            pe = p**e
            if p == 2:
                if e == 1:
                    comps.append(_Component(p, e, pe, (), ()))
                elif e == 2:
                    comps.append(_Component(p, e, pe, (3,), (2,)))
                else:
                    comps.append(_Component(p, e, pe, (pe - 1, 5), (2, pe // 4)))
            else:
                g = _primitive_root_mod_pe(p, e)
                comps.append(_Component(p, e, pe, (g,), ((p - 1) * p ** (e - 1),)))
        self.components = tuple(comps)
        self.orders = tuple(o for c in comps for o in c.orders)
        self.phi = 1
        for o in self.orders:
            self.phi *= o
        self.exponent = 1  # lcm of generator orders (group exponent)
        for o in self.orders:
            self.exponent = math.lcm(self.exponent, o)
        # CRT idempotents: crt_units[j] is 1 mod component j, 0 mod others
        self._crt = []
        for c in comps:
            rest = q // c.modulus
            inv = pow(rest, -1, c.modulus)
            self._crt.append(rest * inv % q)

    def is_unit(self, x: int) -> bool:
        return math.gcd(x, self.q) == 1

    def crt(self, residues: Sequence[int]) -> int:
        acc = 0
        for r, idem in zip(residues, self._crt):
            acc = (acc + r * idem) % self.q
        return acc if self.q > 1 else 0

    def dlog(self, u: int) -> tuple[int, ...]:
        """Exponent vector of a unit against the generator basis."""
        if not self.is_unit(u):
            raise ValueError(f"{u} is not a unit mod {self.q}")
        out = []
        for c in self.components:
            out.extend(c.dlog_table()[u % c.modulus])
        return tuple(out)

    def exp(self, vector: Sequence[int]) -> int:
        """Inverse of dlog."""
        it = iter(vector)
        residues = []
        for c in self.components:
            r = 1
            for g, o in zip(c.generators, c.orders):
                r = (r * pow(g, next(it) % o, c.modulus)) % c.modulus
            residues.append(r)
        return self.crt(residues) if self.components else (0 if self.q == 1 else 1)

    def units(self):
        """All units mod q, ascending."""
        if self.q == 1:
            yield 0
            return
        for x in range(1, self.q):
            if math.gcd(x, self.q) == 1:
                yield x


_unit_group_cache: dict[int, UnitGroup] = {}
_unit_group_lock = threading.Lock()


def unit_group(q: int) -> UnitGroup:
    """Cached UnitGroup; many readers, exclusive insert."""
    grp = _unit_group_cache.get(q)
    if grp is None:
        with _unit_group_lock:
            grp = _unit_group_cache.get(q)
            if grp is None:
                grp = UnitGroup(q)
                _unit_group_cache[q] = grp
    return grp


# ---------------------------------------------------------------------------
# R_v(q), alpha_v(q), admissibility
# ---------------------------------------------------------------------------


def _count_unit_values_mod_prime(w: IntPoly, ell: int) -> int:
    """#{u in 1..ell-1 : w(u) != 0 mod ell}, vectorized for large ell."""
    if ell <= 1024:
        return sum(1 for u in range(1, ell) if eval_mod(w, u, ell) != 0)
    coeffs = [c % ell for c in w.coeffs]
    count = 0
    chunk = 1 << 20
    for start in range(1, ell, chunk):
        u = np.arange(start, min(start + chunk, ell), dtype=np.int64)
        acc = np.zeros_like(u)
        for c in reversed(coeffs):
            acc = (acc * u + c) % ell
        count += int(np.count_nonzero(acc))
    return count


def _unit_value_residues_mod_pe(w: IntPoly, p: int, e: int) -> list[int]:
    """Units u mod p^e with w(u) a unit mod p^e.

    Both conditions only depend on u mod p, so the survivors are full
    fibers over the good classes mod p.
    """
    pe = p**e
    good_mod_p = [u for u in range(1, p) if eval_mod(w, u, p) != 0]
    out = []
    for base in good_mod_p:
        out.extend(range(base, pe, p))
    return out


def r_v_set(spec: MultFnSpec, q: int, v: int) -> set[int]:
    """R_v(q): units u with prod_i W_{i,v}(u) a unit mod q."""
    if not 1 <= v <= spec.V:
        raise ValueError(f"v must be in 1..{spec.V}")
    grp = unit_group(q)
    if q == 1:
        return {0}
    w = spec.product_poly(v)
    comp_sets = []
    total = 1
    for p, e in grp.prime_powers:
        s = _unit_value_residues_mod_pe(w, p, e)
        if not s:
            return set()
        comp_sets.append((p**e, s))
        total *= len(s)
        if total > _SET_BUDGET:
            raise BudgetExceededError(f"R_v(q) has {total}+ elements; too large to materialize")
    acc = [0]
    for pe, s in comp_sets:
        rest = q // pe
        idem = rest * pow(rest, -1, pe) % q
        acc = [(a + r * idem) % q for a in acc for r in s]
    return set(acc)


def alpha_v(spec: MultFnSpec, q: int, v: int) -> Fraction:
    """#R_v(q) / phi(q), exact; multiplicative over prime powers."""
    if not 1 <= v <= spec.V:
        raise ValueError(f"v must be in 1..{spec.V}")
    if q == 1:
        return Fraction(1)
    w = spec.product_poly(v)
    acc = Fraction(1)
    for p, _ in factorize(q):
        acc *= Fraction(_count_unit_values_mod_prime(w, p), p - 1)
        if acc == 0:
            return acc
    return acc


def alpha_poly(F: IntPoly, q: int) -> Fraction:
    """alpha_F(q) = #{u in U_q : F(u) in U_q} / phi(q)."""
    if q == 1:
        return Fraction(1)
    acc = Fraction(1)
    for p, _ in factorize(q):
        acc *= Fraction(_count_unit_values_mod_prime(F, p), p - 1)
        if acc == 0:
            return acc
    return acc


def r_v_size(spec: MultFnSpec, q: int, v: int) -> int:
    """#R_v(q) without materializing the set."""
    a = alpha_v(spec, q, v)
    n = a * euler_phi(q)
    assert n.denominator == 1
    return n.numerator


def admissible_k(spec: MultFnSpec, q: int):
    """Smallest k <= V with R_k(q) nonempty and all earlier R_v empty.

    Returns (k, alpha_k(q)) or None when every R_v(q) with v <= V is
    empty (reported upstream as NONE_UP_TO_V: the tool cannot see past V).
    """
    for v in range(1, spec.V + 1):
        a = alpha_v(spec, q, v)
        if a > 0:
            return v, a
    return None


def lift_count(F: IntPoly, Q: int, d: int, u: int) -> int:
    """#{U in U_Q : U = u mod d, F(U) in U_Q}, asserted against the
    CRT lifting formula alpha_F(Q) phi(Q) / (alpha_F(d) phi(d))."""
    if Q % d:
        raise ValueError("d must divide Q")
    if Q > 10**6:
        raise BudgetExceededError("lift_count enumerates U_Q; Q too large")
    a_d = alpha_poly(F, d)
    if a_d == 0:
        raise ZeroDensityError(f"alpha_F({d}) = 0")
    if math.gcd(u, d) != 1 or (d > 1 and math.gcd(F(u), d) != 1):
        raise ValueError("u must be a unit mod d with F(u) a unit mod d")
    count = 0
    start = u % d if d > 1 else 0
    for U in (range(start, Q, d) if Q > 1 else [0]):
        if math.gcd(U, Q) == 1 and math.gcd(F(U), Q) == 1:
            count += 1
    expected = alpha_poly(F, Q) * euler_phi(Q) / (a_d * euler_phi(d))
    assert expected.denominator == 1 and count == expected.numerator, (
        f"lift formula mismatch: counted {count}, formula {expected}"
    )
    return count
