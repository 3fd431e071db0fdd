"""High-throughput empirical equidistribution: evaluate the family's
residues mod q for every n <= x, track the anatomy filters the theory
singles out, and measure the discrepancy over coprime classes.

The sieve is segmented (2^20 per block) and vectorized: for each prime
p and exponent e the members of the segment with p^e exactly dividing n
are a strided slice difference, so per-n Python loops never happen.
Residues are accumulated from the factorization, never from the integer
values (sigma_r(n) would overflow long before x = 10^8).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BudgetExceededError, NotAdmissibleError
from .intpoly import IntPoly
from .resring import MultFnSpec, admissible_k, euler_phi, factorize, unit_group

__all__ = [
    "FilterSpec",
    "EquidistReport",
    "sieve_run",
    "coprime_growth_check",
    "counterexample_build",
    "Anatomy",
    "anatomy_of",
]

SEGMENT = 1 << 20
X_LIMIT = 10**8
Q_LIMIT = 10**5


# ---------------------------------------------------------------------------
# filters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FilterSpec:
    """Input restriction: NONE, P_R(n) > q, P_T(n_k) > q, or CONVENIENT."""

    kind: str = "NONE"  # NONE | P_R_GT_Q | P_T_OF_NK_GT_Q | CONVENIENT
    index: int = 0
    epsilon: float = 1.0

    @classmethod
    def parse(cls, text: str) -> "FilterSpec":
        text = text.strip()
        if text.upper() in ("", "NONE"):
            return cls("NONE")
        if text.upper() == "CONVENIENT":
            return cls("CONVENIENT")
        kind, _, idx = text.partition(":")
        kind = kind.upper()
        if kind in ("P_R", "P_R_GT_Q"):
            return cls("P_R_GT_Q", int(idx))
        if kind in ("P_T_NK", "P_T_OF_NK_GT_Q"):
            return cls("P_T_OF_NK_GT_Q", int(idx))
        raise ValueError(f"unknown filter {text!r}")

    def describe(self) -> str:
        if self.kind == "P_R_GT_Q":
            return f"P_{self.index}(n)>q"
        if self.kind == "P_T_OF_NK_GT_Q":
            return f"P_{self.index}(n_k)>q"
        return self.kind


@dataclass
class EquidistReport:
    x: int
    q: int
    k: int
    filter: str
    counts: dict  # K-tuple of units -> count
    coprime_total: int
    discrepancy: float
    chi_square: float
    spec_names: tuple[str, ...] = ()

    def class_ratio(self, target: tuple[int, ...]) -> float:
        """count(target) / (coprime_total / phi(q)^K)."""
        phi = euler_phi(self.q)
        k_count = self.counts.get(tuple(target), 0)
        expected = self.coprime_total / phi ** len(target)
        return k_count / expected if expected else math.inf


# ---------------------------------------------------------------------------
# the sieve core
# ---------------------------------------------------------------------------


def _primes_up_to(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(n)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


def _value_tables(spec: MultFnSpec, primes: np.ndarray, q: int, vmax: int):
    """tables[i][v, j] = f_i(primes[j]^v) mod q, as one 2D array per f_i."""
    tables = []
    plist = [int(p) for p in primes]
    for i in range(spec.K):
        rows = [[1 % q if q > 1 else 0] * len(plist)]  # v = 0
        for v in range(1, vmax + 1):
            rows.append([spec.value_at_prime_power(i, p, v, mod=q) for p in plist])
        tables.append(np.array(rows, dtype=np.int64))
    return tables


def _horner_mod(coeffs: Sequence[int], xs: np.ndarray, q: int) -> np.ndarray:
    acc = np.zeros_like(xs)
    for c in reversed([c % q for c in coeffs]):
        acc = (acc * xs + c) % q
    return acc


class _SieveAccumulator:
    """Per-run state merged across segments."""

    def __init__(self, spec: MultFnSpec, q: int, k: int, filt: FilterSpec, x: int):
        self.spec = spec
        self.q = q
        self.k = k
        self.filt = filt
        self.x = x
        self.grp = unit_group(q)
        self.phi = self.grp.phi
        K = spec.K
        if q**K > (1 << 27):
            raise BudgetExceededError("residue class table q^K too large")
        self.code_counts = np.zeros(q**K if q > 1 else 1, dtype=np.int64)
        self.unit_mask = np.zeros(q if q > 1 else 1, dtype=bool)
        if q > 1:
            for u in self.grp.units():
                self.unit_mask[u] = True
        else:
            self.unit_mask[0] = True
        # convenient-n parameters; J = floor(log log log x) is 0 or 1 at
        # any feasible x, so only the top prime needs tracking
        logx = math.log(max(x, 3))
        try:
            self.J = max(math.floor(math.log(math.log(logx))), 0)
        except ValueError:
            self.J = 0
        self.y = math.exp(logx ** (filt.epsilon / 2.0))

    def segment_codes(self, lo: int, hi: int, primes, tables) -> np.ndarray:
        """Residue-tuple codes for n in [lo, hi), -1 where filtered out."""
        spec, q, k = self.spec, self.q, self.k
        n = hi - lo
        cof = np.arange(lo, hi, dtype=np.int64)
        K = spec.K
        vals = [np.ones(n, dtype=np.int64) for _ in range(K)]
        big_count = np.zeros(n, dtype=np.int32)  # Omega_{>q} with multiplicity
        nk_count = np.zeros(n, dtype=np.int32)  # prime count of n_k above q
        top1_p = np.zeros(n, dtype=np.int64)
        top1_v = np.zeros(n, dtype=np.int32)
        top2_p = np.zeros(n, dtype=np.int64)
        want_convenient = self.filt.kind == "CONVENIENT"
        for pi_idx, p in enumerate(primes):
            p = int(p)
            if p * p >= hi:
                break
            # indices with p | n; exponent of p per such n via strided slices
            first = (-lo) % p
            idx = np.arange(first, n, p, dtype=np.int64)
            if len(idx) == 0:
                continue
            e = np.ones(len(idx), dtype=np.int64)
            pe = p
            while pe * p < hi:
                pe *= p
                first_e = (-lo) % pe
                sel = np.arange(first_e, n, pe, dtype=np.int64)
                if len(sel) == 0:
                    break
                e[(sel - first) // p] += 1
            for i in range(K):
                fv = tables[i][e, pi_idx]
                if q > 1:
                    vals[i][idx] = vals[i][idx] * fv % q
            cof[idx] //= p**e
            if p > q:
                big_count[idx] += e
                exact = e % k == 0
                nk_count[idx[exact]] += (e[exact] // k).astype(np.int32)
            if want_convenient:
                top2_p[idx] = top1_p[idx]
                top1_p[idx] = p
                top1_v[idx] = e
        # remaining cofactor is 1 or a prime > sqrt(hi)
        rest = cof > 1
        if rest.any():
            ps = cof[rest]
            for i in range(K):
                w1 = spec.polys[i][0]
                fv = _horner_mod(w1.coeffs, ps % q, q) if q > 1 else np.zeros(ps.shape, dtype=np.int64)
                vals[i][rest] = vals[i][rest] * fv % q if q > 1 else 0
            sel = np.nonzero(rest)[0]
            above = ps > q
            big_count[sel[above]] += 1
            if k == 1:
                nk_count[sel[above]] += 1
            if want_convenient:
                top2_p[sel] = top1_p[sel]
                top1_p[sel] = ps
                top1_v[sel] = 1
        # n = 1 (and n = 0) rows
        if lo == 0:
            big_count[:2] = 0
        # coprimality of every component
        ok = np.ones(n, dtype=bool)
        if q > 1:
            for i in range(K):
                ok &= self.unit_mask[vals[i]]
        # anatomy filter
        f = self.filt
        if f.kind == "P_R_GT_Q":
            ok &= big_count >= f.index
        elif f.kind == "P_T_OF_NK_GT_Q":
            ok &= nk_count >= f.index
        elif f.kind == "CONVENIENT":
            if self.J > 0:
                # J = 1: the largest prime must carry exponent exactly k
                # and exceed max(y, P(m)) = max(y, second largest prime)
                ok &= (top1_v == self.k) & (top1_p > self.y) & (top1_p > top2_p)
            # J = 0 leaves every n convenient
        codes = np.full(n, -1, dtype=np.int64)
        if q > 1:
            code = vals[0].copy()
            for i in range(1, K):
                code = code * q + vals[i]
            codes[ok] = code[ok]
        else:
            codes[ok] = 0
        if lo == 0:
            codes[0] = -1  # n = 0 is not an input
        return codes

    def consume(self, codes: np.ndarray):
        good = codes >= 0
        self.code_counts += np.bincount(
            codes[good], minlength=len(self.code_counts)
        ).astype(np.int64)

    def report(self) -> EquidistReport:
        spec, q = self.spec, self.q
        K = spec.K
        counts = {}
        if q > 1:
            units = list(self.grp.units())
            import itertools

            for tup in itertools.product(units, repeat=K):
                code = 0
                for t in tup:
                    code = code * q + t
                c = int(self.code_counts[code])
                counts[tup] = c
        else:
            counts[(0,) * K] = int(self.code_counts[0])
        total = sum(counts.values())
        expected = total / (self.phi**K) if total else 0.0
        if expected > 0:
            discrepancy = max(abs(c / expected - 1.0) for c in counts.values())
            chi_sq = sum((c - expected) ** 2 / expected for c in counts.values())
        else:
            discrepancy = math.inf
            chi_sq = math.inf
        return EquidistReport(
            x=self.x,
            q=q,
            k=self.k,
            filter=self.filt.describe(),
            counts=counts,
            coprime_total=total,
            discrepancy=discrepancy,
            chi_square=chi_sq,
            spec_names=spec.names,
        )


def sieve_run(
    spec: MultFnSpec,
    x: int,
    q: int,
    k: Optional[int] = None,
    filt: FilterSpec = FilterSpec(),
    checkpoints: Optional[Sequence[int]] = None,
    on_checkpoint: Optional[Callable[[int, int], None]] = None,
) -> EquidistReport:
    """Count residue tuples (f_1(n), .., f_K(n)) mod q over n <= x.

    checkpoints: ascending x values at which to report the running
    coprime total via on_checkpoint(x, total) -- used by the growth scan.
    """
    if x > X_LIMIT:
        raise BudgetExceededError(f"x = {x} exceeds {X_LIMIT}")
    if q > Q_LIMIT:
        raise BudgetExceededError(f"q = {q} exceeds {Q_LIMIT}")
    if k is None:
        res = admissible_k(spec, q)
        k = res[0] if res else 1
    acc = _SieveAccumulator(spec, q, k, filt, x)
    primes = _primes_up_to(int(math.isqrt(x)) + 1)
    vmax = max(1, int(math.log2(max(x, 2))) + 1)
    tables = _value_tables(spec, primes, q, vmax)
    cps = sorted(checkpoints or [])
    cp_idx = 0
    running = 0
    for lo in range(0, x + 1, SEGMENT):
        hi = min(lo + SEGMENT, x + 1)
        codes = acc.segment_codes(lo, hi, primes, tables)
        acc.consume(codes)
        if cps:
            good = np.nonzero(codes >= 0)[0]
            while cp_idx < len(cps) and cps[cp_idx] < hi:
                cp = cps[cp_idx]
                running_here = running + int(np.count_nonzero(good + lo <= cp))
                if on_checkpoint:
                    on_checkpoint(cp, running_here)
                cp_idx += 1
            running += len(good)
    return acc.report()


# ---------------------------------------------------------------------------
# anatomy oracle (naive, for cross-checks and small scans)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Anatomy:
    n: int
    factorization: tuple[tuple[int, int], ...]
    omega_big: int  # Omega counted with multiplicity
    n_k: int
    convenient: bool


def p_r(n_fac, r: int) -> int:
    """r-th largest prime factor with multiplicity; 1 when Omega(n) < r."""
    seen = 0
    for p, e in sorted(n_fac, reverse=True):
        seen += e
        if seen >= r:
            return p
    return 1


def n_k_part(n_fac, k: int) -> int:
    out = 1
    for p, e in n_fac:
        if e % k == 0:
            out *= p ** (e // k)
    return out


def anatomy_of(n: int, k: int, x: int, epsilon: float = 1.0) -> Anatomy:
    fac = tuple(factorize(n)) if n > 1 else ()
    omega = sum(e for _, e in fac)
    logx = math.log(max(x, 3))
    try:
        J = math.floor(math.log(math.log(math.log(x)))) if x > 16 else 0
    except ValueError:
        J = 0
    J = max(J, 0)
    y = math.exp(logx ** (epsilon / 2.0))
    convenient = True
    if J > 0:
        distinct = sorted((p for p, _ in fac), reverse=True)
        if len(distinct) < J:
            convenient = False
        else:
            tops = distinct[:J]
            rest = [p for p in distinct if p not in tops]
            m = n
            emap = dict(fac)
            for p in tops:
                if emap[p] != k:
                    convenient = False
                m //= p ** emap[p]
            if convenient:
                lm = max(y, max(rest) if rest else 1)
                if min(tops) <= lm:
                    convenient = False
    return Anatomy(n, fac, omega, n_k_part(fac, k), convenient)


# ---------------------------------------------------------------------------
# growth scan and counterexamples
# ---------------------------------------------------------------------------


def coprime_growth_check(
    spec: MultFnSpec, q: int, k: Optional[int] = None, xs: Optional[Sequence[int]] = None
) -> dict:
    """Fit log(coprime_total) against {log x, log log x} over a grid."""
    res = admissible_k(spec, q)
    if res is None:
        raise NotAdmissibleError(f"q = {q} is not admissible up to V")
    k_found, alpha = res
    if k is None:
        k = k_found
    xs = sorted(xs or [10**4, 10**5, 10**6, 10**7])
    totals: dict[int, int] = {}
    sieve_run(
        spec,
        xs[-1],
        q,
        k,
        FilterSpec(),
        checkpoints=xs,
        on_checkpoint=lambda cp, t: totals.__setitem__(cp, t),
    )
    rows = [(x, totals[x]) for x in xs]
    A = np.array([[math.log(x), math.log(math.log(x)), 1.0] for x, _ in rows])
    b = np.array([math.log(max(t, 1)) for _, t in rows])
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    resid = A @ coef - b
    return {
        "q": q,
        "k": k,
        "alpha_k": alpha,
        "points": rows,
        "logx_coeff": float(coef[0]),
        "loglogx_coeff": float(coef[1]),
        "intercept": float(coef[2]),
        "max_residual": float(np.max(np.abs(resid))),
        "target_loglog_coeff": float(alpha - 1) / k if k == 1 else None,
    }


def _spec_from_polys(names, rows, beyond="constant_one") -> MultFnSpec:
    from .resring import BEYOND_CONSTANT_ONE

    return MultFnSpec(
        names=tuple(names),
        polys=tuple(tuple(r) for r in rows),
        beyond_v=BEYOND_CONSTANT_ONE,
    )


def counterexample_build(kind: str, x: int, params: Optional[dict] = None) -> dict:
    """Construct an overrepresentation scenario and measure it.

    kinds: EISENSTEIN_FAMILY (degree-d Eisenstein-shifted polynomial,
    modulus a product of two primes, count restricted to prime inputs),
    IFH_VIOLATION (last polynomial a d-th power, modulus odd so every
    prime factor violates gcd(ell-1, d) = 1, counts over n with
    P_2(n) > q), LINEAR_OVERREP (pairwise coprime linear family, target
    hit by a single progression), CONTROL (generic WUD configuration,
    unrestricted; its max class ratio should sit near 1).
    """
    params = params or {}
    if kind == "EISENSTEIN_FAMILY":
        d = params.get("d", 2)
        q = params.get("q", 77)
        K = params.get("K", 1)
        base = IntPoly([1])
        for j in range(1, d + 1):
            base = base * IntPoly([-2 * j, 1])
        rows = []
        targets = []
        for i in range(1, K + 1):
            w = base + IntPoly([2 * (2 * i - 1)])
            rows.append((w,) + tuple(IntPoly([1]) for _ in range(3)))
            targets.append(2 * (2 * i - 1) % q)
        spec = _spec_from_polys([f"eis{i}" for i in range(K)], rows)
        # restrict to prime inputs: primes are exactly the n with
        # P_1(n) > q once n > q ... sieve with filter P_1 > q and k = 1,
        # then isolate via the value table being W(p) directly
        report = _prime_restricted_ratio(spec, x, q, tuple(targets))
        report.update({"kind": kind, "d": d, "q": q})
        return report
    if kind == "IFH_VIOLATION":
        d = params.get("d", 2)
        q = params.get("q", 77)
        # W_1 = T - 1, W_2 = (T - 2)^d: beta = d; gcd(ell-1, d) > 1 for
        # every odd prime when d = 2
        w1 = IntPoly([-1, 1])
        w2 = IntPoly([-2, 1]) ** d
        spec = _spec_from_polys(
            ["lin", "pow"],
            [
                (w1, IntPoly([1]), IntPoly([1]), IntPoly([1])),
                (w2, IntPoly([1]), IntPoly([1]), IntPoly([1])),
            ],
        )
        target = (1 % q, 1 % q)
        rep = sieve_run(spec, x, q, 1, FilterSpec("P_R_GT_Q", 2))
        ratio = rep.class_ratio(target)
        return {
            "kind": kind,
            "d": d,
            "q": q,
            "x": x,
            "target": list(target),
            "observed_ratio": ratio,
            "coprime_total": rep.coprime_total,
        }
    if kind == "LINEAR_OVERREP":
        q = params.get("q", 1001)
        b = params.get("b", 2)
        spec = _spec_from_polys(
            ["lin1", "lin2"],
            [
                (IntPoly([-1, 1]),) + tuple(IntPoly([1]) for _ in range(3)),
                (IntPoly([1, 1]),) + tuple(IntPoly([1]) for _ in range(3)),
            ],
        )
        targets = ((b - 1) % q, (b + 1) % q)
        report = _prime_restricted_ratio(spec, x, q, targets)
        report.update({"kind": kind, "q": q, "b": b})
        return report
    if kind == "CONTROL":
        q = params.get("q", 79)
        from .presets import preset

        # K = 1 deliberately: at desk scale a K = 2 family's prime inputs
        # pile onto the phi(q) diagonal classes out of phi(q)^2, which no
        # feasible x washes out
        spec = preset(params.get("preset", "sigma"))
        rep = sieve_run(spec, x, q, None, FilterSpec())
        worst = max(rep.counts, key=lambda t: rep.counts[t])
        return {
            "kind": kind,
            "q": q,
            "x": x,
            "observed_ratio": rep.class_ratio(worst),
            "discrepancy": rep.discrepancy,
            "coprime_total": rep.coprime_total,
        }
    raise ValueError(f"unknown construction {kind!r}")


def _prime_restricted_ratio(spec: MultFnSpec, x: int, q: int, targets) -> dict:
    """Ratio of the target class among prime inputs n = P <= x."""
    primes = _primes_up_to(x)
    primes = primes[primes > q]
    K = spec.K
    good = np.ones(len(primes), dtype=bool)
    vals = []
    for i in range(K):
        v = _horner_mod(spec.polys[i][0].coeffs, primes % q, q)
        unit_mask = np.zeros(q, dtype=bool)
        for u in unit_group(q).units():
            unit_mask[u] = True
        good &= unit_mask[v]
        vals.append(v)
    total = int(np.count_nonzero(good))
    hit = good.copy()
    for v, t in zip(vals, targets):
        hit &= v == t
    count = int(np.count_nonzero(hit))
    phi = euler_phi(q)
    expected = total / phi**K if total else 0.0
    return {
        "x": x,
        "target": list(targets),
        "restricted_to": "prime inputs n = P > q",
        "count": count,
        "coprime_total": total,
        "observed_ratio": count / expected if expected else math.inf,
    }
