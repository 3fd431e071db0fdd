"""Exact counting of solution tuples to simultaneous polynomial
congruences, two independent ways: exhaustive enumeration over the
product space (tallied slot by slot) and Dirichlet-character
orthogonality with exact cyclotomic arithmetic.

The character route is the scalable one; enumeration is the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .dirichlet import CycloSum, char_value_table, characters_mod, z_sum
from .errors import BudgetExceededError, RegimeMismatchError
from .intpoly import IntPoly, eval_mod
from .resring import alpha_poly, euler_phi, factorize, unit_group

__all__ = [
    "VCountQuery",
    "VCountReport",
    "v_count_brute",
    "v_count_charsum",
    "estimate_check",
]

BRUTE_BUDGET = 10**9
CHARSUM_BUDGET = 10**7


@dataclass(frozen=True)
class VCountQuery:
    """Count (v_1..v_N) in U_q^N with prod_j F_{i,j}(v_j) = w_i mod q.

    slot_polys[j][i] is F_{i,j}: slot j contributes F_{i,j}(v_j) to the
    i-th congruence.
    """

    q: int
    K: int
    N: int
    slot_polys: tuple[tuple[IntPoly, ...], ...]  # N slots, K polys each
    targets: tuple[int, ...]

    def __post_init__(self):
        if len(self.slot_polys) != self.N or any(len(s) != self.K for s in self.slot_polys):
            raise ValueError("slot_polys must be N x K")
        if len(self.targets) != self.K:
            raise ValueError("need K targets")
        for w in self.targets:
            if math.gcd(w, self.q) != 1:
                raise ValueError("targets must be coprime to q")

    @classmethod
    def uniform(cls, q: int, polys: Sequence[IntPoly], N: int, targets: Sequence[int]):
        """All N slots use the same column (F_1..F_K) = polys."""
        col = tuple(polys)
        return cls(q, len(col), N, tuple(col for _ in range(N)), tuple(targets))


@dataclass(frozen=True)
class VCountReport:
    exact_count: int
    charsum_count: Fraction
    predicted_main: Optional[Fraction]
    ratio: Optional[float]
    regime: str
    envelope: Optional[float] = None
    envelope_constant: Optional[float] = None


def _slot_value_tuples(query: VCountQuery, j: int) -> dict[tuple[int, ...], int]:
    """Multiplicity map: value tuple (F_{1,j}(v), .., F_{K,j}(v)) -> #v,
    over units v with every value a unit."""
    q = query.q
    grp = unit_group(q)
    out: dict[tuple[int, ...], int] = {}
    for v in grp.units():
        vals = []
        ok = True
        for F in query.slot_polys[j]:
            x = eval_mod(F, v, q) if q > 1 else 0
            if q > 1 and math.gcd(x, q) != 1:
                ok = False
                break
            vals.append(x)
        if ok:
            t = tuple(vals)
            out[t] = out.get(t, 0) + 1
    return out


def v_count_brute(query: VCountQuery) -> int:
    """Exhaustive enumeration of the full product space, tallied slot by
    slot: after slot j the dict holds, for every partial-product tuple,
    how many (v_1..v_j) realize it.  No character theory involved."""
    q = query.q
    phi = euler_phi(q)
    if phi**query.N > BRUTE_BUDGET:
        raise BudgetExceededError(f"phi(q)^N = {phi**query.N} exceeds {BRUTE_BUDGET}")
    if q == 1:
        return 1
    acc: dict[tuple[int, ...], int] = {tuple(1 for _ in range(query.K)): 1}
    for j in range(query.N):
        slot = _slot_value_tuples(query, j)
        nxt: dict[tuple[int, ...], int] = {}
        for part, c1 in acc.items():
            for vals, c2 in slot.items():
                key = tuple(a * b % q for a, b in zip(part, vals))
                nxt[key] = nxt.get(key, 0) + c1 * c2
        acc = nxt
    return acc.get(tuple(w % q for w in query.targets), 0)


def v_count_charsum(query: VCountQuery) -> Fraction:
    """Orthogonality route: (1/phi^K) sum over character K-tuples of
    prod_i conj(chi_i)(w_i) * prod_j Z_{q;chis}(F_{1,j}..F_{K,j}).

    Each Z value is an integer vector of root-of-unity counts; the slot
    product is a circular convolution and the cyclotomic reduction
    happens once at the very end, so the result is exact.
    """
    import itertools

    import numpy as np

    q = query.q
    grp = unit_group(q)
    phi = grp.phi
    if phi**query.K * query.N > CHARSUM_BUDGET:
        raise BudgetExceededError("character tuple budget exceeded")
    if q == 1:
        return Fraction(1)
    m = max(grp.exponent, 1)
    chars = list(characters_mod(q))
    tables = [np.array(char_value_table(chi, m), dtype=np.int64) for chi in chars]
    # distinct slot columns share their Z vectors
    col_keys = []
    distinct: dict[tuple, int] = {}
    for j in range(query.N):
        key = tuple(tuple(F.coeffs) for F in query.slot_polys[j])
        if key not in distinct:
            distinct[key] = len(distinct)
        col_keys.append(distinct[key])
    distinct_cols = [query.slot_polys[col_keys.index(i)] for i in range(len(distinct))]
    col_mult = [col_keys.count(i) for i in range(len(distinct))]
    units = list(grp.units())
    col_vals = []  # per column: (K, n_surviving) residue matrix
    for col in distinct_cols:
        rows = []
        for v in units:
            xs = [eval_mod(F, v, q) for F in col]
            if all(math.gcd(x, q) == 1 for x in xs):
                rows.append(xs)
        col_vals.append(np.array(rows, dtype=np.int64).reshape(len(rows), query.K))

    # int64 is safe while phi^(N+K) stays below 2^62; otherwise fall back
    # to exact object arithmetic
    dtype = np.int64 if phi ** (query.N + query.K) < 2**62 else object

    def circ_mul(a, b):
        lin = np.convolve(a, b)
        out = lin[:m].copy()
        if len(lin) > m:
            out[: len(lin) - m] += lin[m:]
        return out

    total = np.zeros(m, dtype=dtype)
    targets = [w % q for w in query.targets]
    for combo in itertools.product(range(phi), repeat=query.K):
        w_exp = 0
        dead = False
        zvecs = []
        for ci, vals in enumerate(col_vals):
            if len(vals) == 0:
                dead = True
                break
            e = np.zeros(len(vals), dtype=np.int64)
            for i in range(query.K):
                e += tables[combo[i]][vals[:, i]]
            zv = np.bincount(e % m, minlength=m).astype(dtype)
            zvecs.append(zv)
        if dead:
            continue
        for i in range(query.K):
            w_exp -= int(tables[combo[i]][targets[i]])
        term = None
        for ci, zv in enumerate(zvecs):
            for _ in range(col_mult[ci]):
                term = zv if term is None else circ_mul(term, zv)
        total += np.roll(term, w_exp % m)
    value = CycloSum(m, {e: Fraction(int(c)) for e, c in enumerate(total) if c})
    rat = value.as_rational()
    assert rat is not None, "character-sum count must be rational"
    return rat * Fraction(1, phi**query.K)


def _alpha_star(query: VCountQuery) -> Fraction:
    """prod_j alpha of the slot-j product polynomial."""
    acc = Fraction(1)
    for j in range(query.N):
        prod = IntPoly([1])
        for F in query.slot_polys[j]:
            prod = prod * F
        acc *= alpha_poly(prod, query.q)
    return acc


def estimate_check(query: VCountQuery, regime: str) -> VCountReport:
    """Compare the exact count against the regime's main term or
    envelope.  regime: LARGE_N | SMALL_N | SQFREE.  Implied constants
    are measured and reported, never asserted."""
    q = query.q
    D = max(sum(F.degree() for F in query.slot_polys[j]) for j in range(query.N))
    if regime == "LARGE_N" and query.N < query.K * D + 1:
        raise RegimeMismatchError(f"LARGE_N needs N >= K*D+1 = {query.K * D + 1}")
    if regime == "SMALL_N" and query.N > query.K * D:
        raise RegimeMismatchError(f"SMALL_N needs N <= K*D = {query.K * D}")
    if regime == "SQFREE" and any(e > 1 for _, e in factorize(q)):
        raise RegimeMismatchError("SQFREE needs a squarefree modulus")
    exact = v_count_brute(query)
    charsum = v_count_charsum(query)
    assert charsum == exact, f"route mismatch: {exact} vs {charsum}"
    phi = euler_phi(q)
    if regime == "LARGE_N":
        main = _alpha_star(query) * phi ** (query.N - query.K)
        ratio = float(Fraction(exact) / main) if main else None
        return VCountReport(exact, charsum, main, ratio, regime)
    # envelope regimes: count/phi^N <= q^(-min(K, N/D)) * constant
    exponent = min(query.K, Fraction(query.N, D)) if D else Fraction(query.K)
    envelope_scale = float(q) ** float(-exponent)
    density = exact / Fraction(phi) ** query.N
    constant = float(density) / envelope_scale if envelope_scale else 0.0
    return VCountReport(exact, charsum, None, None, regime, envelope_scale, constant)
