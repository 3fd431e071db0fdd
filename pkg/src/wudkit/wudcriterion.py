"""The membership decision q in Q(k; f_1..f_K): does every nontrivial
annihilating character tuple admit a prime whose local Euler-type factor
sum_j prod_i chi_i(f_i(p^j)) p^(-j/k) vanishes?

Exactness and finiteness both come from the same structure:

* every term sequence starts at t_0 = 1 with |t_j| <= 1, so the factor
  satisfies |S| >= 1 - x/(1-x) > 0 for x = p^(-1/k) < 1/2; a zero is
  only possible for p <= 2^k, leaving finitely many candidate primes and
  making a sound OUT (with certificate) decidable;
* residue sequences mod q are eventually periodic, so S is a rational
  function N(x)/(1 - x^pi) with cyclotomic coefficients, and vanishing
  at x = p^(-1/k) is tested exactly: by substitution for k = 1, via a
  Gauss-sum embedding of sqrt(p) for k = 2, and by divisibility against
  T^k - 1/p for k >= 3 (conclusive unless p divides the character
  order, which is reported UNKNOWN).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .dirichlet import (
    CycloSum,
    DirichletChar,
    annihilator_tuples,
    sqrt_prime_cyclosum,
)
from .errors import NotAdmissibleError
from .presets import ground_truth
from .resring import MultFnSpec, admissible_k, unit_group

__all__ = [
    "LocalFactor",
    "WudVerdict",
    "local_factor",
    "candidate_primes",
    "wud_membership",
    "classification_sweep",
]

ZERO = "ZERO"
NONZERO = "NONZERO"
UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class LocalFactor:
    """Exact record of sum_j prod_i chi_i(f_i(p^j)) p^(-j/k)."""

    p: int
    k: int
    preperiod: int
    period: int
    numerator: tuple  # CycloSum coefficients of N(x), degree order
    closed_form_zero: str  # ZERO | NONZERO | UNKNOWN
    numeric: complex

    def status(self) -> str:
        return self.closed_form_zero


def _term_sequence(spec: MultFnSpec, p: int, chis, q: int, j_max: int):
    """Exponent (or None for a zero term) of each t_j as an m-th root."""
    grp = unit_group(q)
    m = max(grp.exponent, 1)
    terms = []
    for j in range(j_max):
        e_total = 0
        dead = False
        for i, chi in enumerate(chis):
            val = spec.value_at_prime_power(i, p, j, mod=q)
            if q > 1 and math.gcd(val, q) != 1:
                dead = True
                break
            root = chi.value(val if q > 1 else 0)
            e_total += root.exponent_for_order(m)
        terms.append(None if dead else e_total % m)
    return terms, m


def _find_cycle(terms, min_repeats: int = 4):
    """Smallest (preperiod, period) visible in the computed window, with
    at least min_repeats full periods verified.  None if not detected."""
    n = len(terms)
    # smallest weak period of the tail via the KMP failure function
    for mu in range(0, n // 2 + 1):
        window = terms[mu:]
        L = len(window)
        fail = [0] * (L + 1)
        k = 0
        for i in range(1, L):
            while k and window[i] != window[k]:
                k = fail[k]
            if window[i] == window[k]:
                k += 1
            fail[i + 1] = k
        pi = L - fail[L]
        if pi <= L // (min_repeats + 1) or (pi == 1 and L >= min_repeats):
            # verify explicitly
            if all(
                terms[j] == terms[j + pi] for j in range(mu, n - pi)
            ) and L >= (min_repeats + 1) * pi:
                return mu, pi
    return None


def local_factor(
    spec: MultFnSpec,
    p: int,
    chis: Sequence[DirichletChar],
    k: int,
    j_max: Optional[int] = None,
) -> LocalFactor:
    """Exact local factor at p for a character tuple mod q."""
    q = chis[0].q
    grp = unit_group(q)
    if j_max is None:
        j_max = 8 * max(grp.exponent, spec.V, 8)
    cap = max(j_max, 64)
    terms = None
    cycle = None
    m = 1
    while True:
        terms, m = _term_sequence(spec, p, chis, q, cap)
        cycle = _find_cycle(terms)
        if cycle is not None:
            break
        if cap >= (1 << 17):
            break
        cap *= 4
    if cycle is None:
        # truncation failure: report UNKNOWN with the numeric partial sum
        num = _numeric_partial(terms, m, p, k)
        return LocalFactor(p, k, 0, 0, (), UNKNOWN, num)
    mu, pi = cycle
    # S = A(x) + x^mu B(x) / (1 - x^pi)  with A the preperiod part;
    # N(x) = A(x)(1 - x^pi) + x^mu B(x)
    coeffs: dict[int, CycloSum] = {}

    def add(deg: int, exp: Optional[int], sign: int):
        if exp is None:
            return
        cur = coeffs.get(deg, CycloSum(m))
        coeffs[deg] = cur + CycloSum(m, {exp: Fraction(sign)})

    for j in range(mu):
        add(j, terms[j], 1)
        add(j + pi, terms[j], -1)
    for j in range(pi):
        add(mu + j, terms[mu + j], 1)
    deg_max = max(coeffs, default=-1)
    numerator = [coeffs.get(d, CycloSum(m)) for d in range(deg_max + 1)]
    status = _decide_zero(numerator, m, p, k)
    num = _numeric_partial(terms, m, p, k)
    return LocalFactor(p, k, mu, pi, tuple(numerator), status, num)


def _numeric_partial(terms, m, p, k) -> complex:
    import cmath

    acc = 0j
    x = p ** (-1.0 / k)
    for j, e in enumerate(terms[: min(len(terms), 400)]):
        if e is not None:
            acc += cmath.exp(2j * cmath.pi * e / m) * x**j
    return acc


def _decide_zero(numerator: list, m: int, p: int, k: int) -> str:
    """Exact vanishing of N(p^(-1/k)); see module docstring for cases."""
    if all(c.is_zero() for c in numerator):
        return ZERO
    if k == 1:
        # substitute the rational 1/p: scale by p^deg to stay integral
        deg = len(numerator) - 1
        acc = CycloSum(m)
        for d, c in enumerate(numerator):
            acc = acc + c * Fraction(p ** (deg - d))
        return ZERO if acc.is_zero() else NONZERO
    if k == 2:
        root = sqrt_prime_cyclosum(p)  # sqrt(p) exactly
        M = math.lcm(m, root.order)
        inv_root = root * Fraction(1, p)  # p^(-1/2)
        acc = CycloSum(M)
        power = CycloSum.from_rational(1, M)
        for c in numerator:
            acc = acc + c.lift(M) * power
            power = power * inv_root.lift(M)
        return ZERO if acc.is_zero() else NONZERO
    # k >= 3: divide N by x^k - 1/p over Q(zeta_m)
    rem = {d: c for d, c in enumerate(numerator)}
    deg = len(numerator) - 1
    for d in range(deg, k - 1, -1):
        c = rem.get(d)
        if c is None:
            continue
        del rem[d]
        low = rem.get(d - k, CycloSum(m))
        rem[d - k] = low + c * Fraction(1, p)
    divisible = all(c.is_zero() for c in rem.values())
    if divisible:
        return ZERO
    # x = p^(-1/k) has degree k over Q(zeta_m) whenever p is unramified
    # there, i.e. p does not divide m
    if m % p:
        return NONZERO
    return UNKNOWN


def candidate_primes(k: int) -> list[int]:
    """Primes where the local factor can possibly vanish: p <= 2^k,
    because |S| >= 1 - x/(1-x) > 0 once x = p^(-1/k) < 1/2."""
    limit = 2**k
    out = []
    for p in range(2, limit + 1):
        if all(p % d for d in range(2, int(math.isqrt(p)) + 1)):
            out.append(p)
    return out


@dataclass(frozen=True)
class WudVerdict:
    status: str  # IN | OUT | UNKNOWN | NOT_ADMISSIBLE
    q: int
    k: Optional[int]
    certificate: dict = field(default_factory=dict)

    @property
    def is_in(self) -> bool:
        return self.status == "IN"


def wud_membership(
    spec: MultFnSpec,
    q: int,
    prime_budget: int = 10**4,
    j_max: Optional[int] = None,
) -> WudVerdict:
    """Decide q in Q(k; f_1..f_K) with machine-checkable certificates.

    IN requires either the generated subgroup to be full (vacuous case)
    or an exact ZERO witness prime for every nontrivial annihilating
    tuple.  OUT carries an exhaustive certificate: every candidate prime
    p <= 2^k tested exactly NONZERO, plus the tail bound excluding all
    larger primes.  prime_budget caps nothing in practice (the candidate
    set is finite) but is kept as an explicit policy knob.
    """
    res = admissible_k(spec, q)
    if res is None:
        return WudVerdict(
            "NOT_ADMISSIBLE", q, None, {"reason": "NONE_UP_TO_V", "V": spec.V}
        )
    k, alpha = res
    tuples = annihilator_tuples(spec, q, k)
    nontrivial = [t for t in tuples if not all(c.is_trivial() for c in t)]
    if not nontrivial:
        return WudVerdict("IN", q, k, {"kind": "GENERATES_FULL"})
    primes = [p for p in candidate_primes(k) if p <= max(prime_budget, 2)]
    witnesses = []
    unresolved = []
    refuted = []
    for tup in nontrivial:
        found = None
        unknown_at = []
        values = []
        for p in primes:
            lf = local_factor(spec, p, tup, k, j_max)
            if lf.status() == ZERO:
                found = (p, lf)
                break
            if lf.status() == UNKNOWN:
                unknown_at.append(p)
            values.append((p, lf.numeric))
        if found:
            witnesses.append(
                {"tuple": [list(c.exponents) for c in tup], "prime": found[0]}
            )
        elif unknown_at:
            unresolved.append(
                {"tuple": [list(c.exponents) for c in tup], "unknown_at": unknown_at}
            )
        else:
            refuted.append(
                {
                    "tuple": [list(c.exponents) for c in tup],
                    "tested_primes": [p for p, _ in values],
                    "values": [[p, repr(v)] for p, v in values],
                }
            )
    if refuted:
        return WudVerdict(
            "OUT",
            q,
            k,
            {
                "kind": "EXHAUSTIVE_CERTIFICATE",
                "tail_bound": f"no vanishing possible for p > 2^{k} since "
                f"|S| >= 1 - x/(1-x) > 0 at x = p^(-1/{k}) < 1/2",
                "refuted": refuted,
            },
        )
    if unresolved:
        return WudVerdict("UNKNOWN", q, k, {"unresolved": unresolved})
    return WudVerdict("IN", q, k, {"kind": "WITNESSES", "witnesses": witnesses})


def classification_sweep(
    spec: MultFnSpec, q_max: int, progress: Optional[callable] = None
) -> list[dict]:
    """Verdict per q <= q_max, with ground-truth comparison when the
    preset has a published table."""
    rows = []
    for q in range(1, q_max + 1):
        verdict = wud_membership(spec, q)
        row = {
            "q": q,
            "status": verdict.status,
            "k": verdict.k,
            "certificate_kind": verdict.certificate.get("kind"),
        }
        truth = ground_truth(spec.preset, q) if spec.preset else None
        if truth is not None:
            row["expected_wud"] = truth["wud"]
            row["expected_k"] = truth["k"]
            if verdict.status == "IN":
                row["agrees"] = truth["wud"] is True
            elif verdict.status in ("OUT", "NOT_ADMISSIBLE"):
                row["agrees"] = truth["wud"] is False
            else:
                row["agrees"] = None  # UNKNOWN never contradicts
        rows.append(row)
        if progress:
            progress(row)
    return rows
