"""Polynomial arithmetic and factorization over prime fields F_ell.

Polynomials are lists of ints in [0, ell), constant term first, no
trailing zeros ([] is zero).  Factorization runs squarefree split,
distinct-degree split, then Cantor-Zassenhaus equal-degree splitting
(seeded; deterministic given the seed).
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .intpoly import IntPoly

__all__ = [
    "ff_from_intpoly",
    "ff_normalize",
    "ff_mul",
    "ff_divmod",
    "ff_gcd",
    "ff_pow_mod",
    "ff_monic",
    "ff_deriv",
    "ff_eval",
    "ff_roots",
    "factor_mod_ell",
    "radical_degree_mod_ell",
]


def ff_normalize(a: Sequence[int], ell: int) -> list[int]:
    out = [c % ell for c in a]
    while out and out[-1] == 0:
        out.pop()
    return out


def ff_from_intpoly(p: IntPoly, ell: int) -> list[int]:
    return ff_normalize(p.coeffs, ell)


def ff_add(a, b, ell):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % ell
    while out and out[-1] == 0:
        out.pop()
    return out


def ff_sub(a, b, ell):
    return ff_add(a, [(-c) % ell for c in b], ell)


def ff_mul(a, b, ell):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % ell
    while out and out[-1] == 0:
        out.pop()
    return out


def ff_divmod(a, b, ell):
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, ell)
    if len(a) < len(b):
        return [], a
    q = [0] * (len(a) - db)
    for k in range(len(a) - db - 1, -1, -1):
        c = a[db + k] * inv % ell
        q[k] = c
        if c:
            for i, bc in enumerate(b):
                a[i + k] = (a[i + k] - c * bc) % ell
    while a and a[-1] == 0:
        a.pop()
    return q, a


def ff_mod(a, b, ell):
    return ff_divmod(a, b, ell)[1]


def ff_monic(a, ell):
    if not a:
        return a
    inv = pow(a[-1], -1, ell)
    return [c * inv % ell for c in a]


def ff_gcd(a, b, ell):
    a, b = list(a), list(b)
    while b:
        a, b = b, ff_mod(a, b, ell)
    return ff_monic(a, ell)


def ff_deriv(a, ell):
    out = [i * c % ell for i, c in enumerate(a)][1:]
    while out and out[-1] == 0:
        out.pop()
    return out


def ff_eval(a, x, ell):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % ell
    return acc


def ff_pow_mod(a, n, mod_poly, ell):
    """a(x)^n mod mod_poly."""
    result = [1]
    base = ff_mod(a, mod_poly, ell)
    while n:
        if n & 1:
            result = ff_mod(ff_mul(result, base, ell), mod_poly, ell)
        base = ff_mod(ff_mul(base, base, ell), mod_poly, ell)
        n >>= 1
    return result


def _pth_root(a, ell):
    """For a in F_ell[x^ell], the b with b^ell = a (Frobenius inverse)."""
    out = []
    for i in range(0, len(a), ell):
        out.append(a[i])  # c^(1/ell) = c in F_ell
    while out and out[-1] == 0:
        out.pop()
    return out


def ff_squarefree_decomposition(f, ell):
    """[(g_e, e)] with f = lc * prod g_e^e, g_e monic squarefree coprime."""
    out = []

    def recurse(f, mult):
        if len(f) <= 1:
            return
        d = ff_deriv(f, ell)
        if not d:
            # f lies in F_ell[x^ell], so f = (pth root of f)^ell
            recurse(_pth_root(f, ell), mult * ell)
            return
        c = ff_gcd(f, d, ell)
        w = ff_divmod(f, c, ell)[0]
        e = 1
        while len(w) > 1:
            y = ff_gcd(w, c, ell)
            fac = ff_divmod(w, y, ell)[0]
            if len(fac) > 1:
                out.append((ff_monic(fac, ell), mult * e))
            w = y
            c = ff_divmod(c, y, ell)[0]
            e += 1
        if len(c) > 1:
            # remaining factors all have multiplicity divisible by ell
            recurse(c, mult)

    recurse(ff_monic(f, ell), 1)
    merged: dict[int, list[int]] = {}
    for g, e in out:
        merged[e] = ff_mul(merged[e], g, ell) if e in merged else g
    return sorted(((g, e) for e, g in merged.items()), key=lambda t: t[1])


def _ddf(f, ell):
    """Distinct-degree: [(product of irreducibles of degree d, d)]."""
    out = []
    x = [0, 1]
    h = list(x)
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = ff_pow_mod(h, ell, f, ell)
        g = ff_gcd(ff_sub(h, x, ell), f, ell)
        if len(g) > 1:
            out.append((g, d))
            f = ff_divmod(f, g, ell)[0]
            h = ff_mod(h, f, ell)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _edf(f, d, ell, rng):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = [rng.randrange(ell) for _ in range(n)]
        a = ff_normalize(a, ell)
        if len(a) <= 1:
            continue
        g = ff_gcd(a, f, ell)
        if 1 < len(g) < len(f):
            pass
        elif ell == 2:
            # trace map: a + a^2 + a^4 + ... + a^(2^(d-1))
            t = list(a)
            acc = list(a)
            for _ in range(d - 1):
                t = ff_mod(ff_mul(t, t, 2), f, 2)
                acc = ff_add(acc, t, 2)
            g = ff_gcd(acc, f, ell)
        else:
            b = ff_pow_mod(a, (ell**d - 1) // 2, f, ell)
            g = ff_gcd(ff_sub(b, [1], ell), f, ell)
        if 1 < len(g) < len(f):
            rest = ff_divmod(f, g, ell)[0]
            return _edf(g, d, ell, rng) + _edf(rest, d, ell, rng)


def factor_mod_ell(p: IntPoly, ell: int, seed: int = 0) -> tuple[int, list[tuple[list[int], int]]]:
    """(leading unit, [(monic irreducible, multiplicity)]) of p mod ell.

    Raises ValueError when p = 0 mod ell.
    """
    f = ff_from_intpoly(p, ell)
    if not f:
        raise ValueError("polynomial vanishes identically mod ell")
    lead = f[-1]
    if len(f) == 1:
        return lead, []
    rng = random.Random(seed ^ hash((tuple(f), ell)))
    out = []
    for g, e in ff_squarefree_decomposition(f, ell):
        for h, d in _ddf(g, ell):
            for irr in _edf(h, d, ell, rng):
                out.append((ff_monic(irr, ell), e))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return lead, out


def radical_degree_mod_ell(p: IntPoly, ell: int, seed: int = 0) -> int:
    """Degree of the largest squarefree divisor of p mod ell."""
    _, factors = factor_mod_ell(p, ell, seed)
    return sum(len(g) - 1 for g, _ in factors)


def ff_roots(p: IntPoly, ell: int) -> list[tuple[int, int]]:
    """Roots of p mod ell with multiplicities, by scanning F_ell."""
    f = ff_from_intpoly(p, ell)
    if not f:
        raise ValueError("polynomial vanishes identically mod ell")
    out = []
    for theta in range(ell):
        if ff_eval(f, theta, ell) == 0:
            mult = 0
            g = f
            lin = [(-theta) % ell, 1]
            while True:
                q, r = ff_divmod(g, lin, ell)
                if r:
                    break
                g = q
                mult += 1
            out.append((theta, mult))
    return out
