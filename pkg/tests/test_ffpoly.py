import random

import pytest

from wudkit.ffpoly import (
    factor_mod_ell,
    ff_eval,
    ff_from_intpoly,
    ff_monic,
    ff_mul,
    ff_roots,
    radical_degree_mod_ell,
)
from wudkit.intpoly import IntPoly


def reassemble(lead, factors, ell):
    acc = [lead % ell]
    for g, e in factors:
        for _ in range(e):
            acc = ff_mul(acc, g, ell)
    return acc


def is_irreducible_brute(g, ell):
    """Trial division by all monic polynomials of smaller degree."""
    d = len(g) - 1
    if d == 1:
        return True
    from itertools import product

    for deg in range(1, d // 2 + 1):
        for tail in product(range(ell), repeat=deg):
            cand = list(tail) + [1]
            from wudkit.ffpoly import ff_divmod

            if not ff_divmod(g, cand, ell)[1]:
                return False
    return True


class TestFactorization:
    @pytest.mark.parametrize("ell", [2, 3, 5, 7, 13])
    def test_random_products_roundtrip(self, ell):
        rng = random.Random(ell * 31337)
        for _ in range(40):
            p = IntPoly([rng.randrange(-8, 9) for _ in range(rng.randrange(2, 6))])
            if not ff_from_intpoly(p, ell):
                continue
            lead, factors = factor_mod_ell(p, ell)
            assert reassemble(lead, factors, ell) == ff_from_intpoly(p, ell)
            for g, _ in factors:
                assert g[-1] == 1
                assert is_irreducible_brute(g, ell)

    def test_frobenius_power(self):
        # (x^2+1)^3 mod 3 has zero derivative territory: x^6+1 = (x^2+1)^3
        p = IntPoly([1, 0, 1]) ** 3
        lead, factors = factor_mod_ell(p, 3)
        assert reassemble(lead, factors, 3) == ff_from_intpoly(p, 3)
        # x^2+1 = (x+1)(x+2) mod... x^2+1 mod 3 is irreducible (no roots)
        assert factors == [([1, 0, 1], 3)]

    def test_wilson_style_split(self):
        # x^4 - 1 mod 5 = (x-1)(x-2)(x-3)(x-4)
        p = IntPoly([-1, 0, 0, 0, 1])
        _, factors = factor_mod_ell(p, 5)
        assert len(factors) == 4
        assert all(e == 1 and len(g) == 2 for g, e in factors)

    def test_mixed_multiplicity_char2(self):
        # (x+1)^2 * (x^2+x+1) mod 2
        p = IntPoly([1, 1]) ** 2 * IntPoly([1, 1, 1])
        _, factors = factor_mod_ell(p, 2)
        assert sorted((tuple(g), e) for g, e in factors) == [
            ((1, 1), 2),
            ((1, 1, 1), 1),
        ]

    def test_vanishing_poly_rejected(self):
        with pytest.raises(ValueError):
            factor_mod_ell(IntPoly([3, 6]), 3)


class TestRadicalDegree:
    def test_squareful(self):
        assert radical_degree_mod_ell(IntPoly([0, 0, 1]), 7) == 1  # T^2
        assert radical_degree_mod_ell(IntPoly([1, 0, 1]), 5) == 2  # stays squarefree
        assert radical_degree_mod_ell(IntPoly([1, 2, 1]), 5) == 1  # (T+1)^2


class TestRoots:
    def test_roots_with_multiplicity(self):
        p = IntPoly([-1, 1]) ** 2 * IntPoly([-2, 1])
        assert ff_roots(p, 7) == [(1, 2), (2, 1)]

    def test_matches_eval(self):
        rng = random.Random(5)
        for _ in range(30):
            ell = rng.choice([3, 5, 11])
            p = IntPoly([rng.randrange(-5, 6) for _ in range(4)])
            f = ff_from_intpoly(p, ell)
            if not f:
                continue
            roots = {theta for theta, _ in ff_roots(p, ell)}
            assert roots == {x for x in range(ell) if ff_eval(f, x, ell) == 0}
