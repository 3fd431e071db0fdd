import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from wudkit.errors import ConstantInputError
from wudkit.intpoly import (
    IntPoly,
    T,
    coprime_basis,
    discriminant,
    divides,
    eval_mod,
    exact_div,
    is_squarefull,
    ord_ell,
    poly_gcd,
    radical,
    resultant,
)

ONE = IntPoly([1])


def lin(a):
    """T - a."""
    return IntPoly([-a, 1])


small_polys = st.builds(
    IntPoly, st.lists(st.integers(min_value=-9, max_value=9), min_size=0, max_size=5)
)


class TestEvalMod:
    def test_spec_examples(self):
        assert eval_mod(IntPoly([1, 1, 1]), 2, 7) == 0
        assert eval_mod(IntPoly([]), 5, 3) == 0
        assert eval_mod(IntPoly([1, 1]), 6, 7) == 0

    def test_huge_values_no_overflow(self):
        p = IntPoly([3, 0, 0, 0, 1])  # T^4 + 3
        x = 10**50 + 7
        assert eval_mod(p, x, 10**9 + 7) == (x**4 + 3) % (10**9 + 7)

    @given(small_polys, small_polys, st.integers(-20, 20), st.integers(1, 97))
    @settings(max_examples=200)
    def test_ring_homomorphism(self, p, q, x, m):
        assert eval_mod(p * q, x, m) == (eval_mod(p, x, m) * eval_mod(q, x, m)) % m
        assert eval_mod(p + q, x, m) == (eval_mod(p, x, m) + eval_mod(q, x, m)) % m


class TestOrdEll:
    def test_spec_examples(self):
        assert ord_ell(IntPoly([8, 0, 4]), 2) == 2
        assert ord_ell(IntPoly([1, 1]), 5) == 0
        assert ord_ell(IntPoly([]), 3) == math.inf


class TestSquarefull:
    def test_spec_examples(self):
        assert is_squarefull(lin(1) * lin(1)) is True
        assert is_squarefull(IntPoly([1, 1, 1])) is False
        assert is_squarefull(lin(2) * lin(2) * lin(3)) is False

    def test_square_of_anything_is_squarefull(self):
        random.seed(7)
        for _ in range(25):
            p = IntPoly([random.randint(-5, 5) for _ in range(random.randint(2, 5))])
            if p.is_constant():
                continue
            assert is_squarefull(p * p)

    def test_simple_extra_factor_breaks_it(self):
        p = IntPoly([1, 0, 1])  # T^2+1
        assert is_squarefull(p * p) is True
        assert is_squarefull(p * p * lin(1)) is False

    def test_constant_rejected(self):
        with pytest.raises(ConstantInputError):
            is_squarefull(IntPoly([3]))


class TestGcd:
    def test_common_factor(self):
        a = lin(1) * lin(2)
        b = lin(2) * lin(3)
        assert poly_gcd(a, b) == lin(2)

    def test_coprime(self):
        assert poly_gcd(lin(1), lin(2)).degree() == 0

    @given(small_polys, small_polys, small_polys)
    @settings(max_examples=100, deadline=None)
    def test_gcd_divides_both(self, a, b, c):
        a, b = a * c, b * c
        if a.is_zero() or b.is_zero():
            return
        g = poly_gcd(a, b)
        assert divides(g, a) and divides(g, b)
        if not c.is_zero():
            assert divides(c.primitive(), g) or c.is_constant()


class TestResultant:
    def test_linear_pair(self):
        # Res(T-a, T-b) = b - a... up to convention sign: (a-b) for monic order
        assert abs(resultant(lin(2), lin(5))) == 3

    def test_shared_root_is_zero(self):
        assert resultant(lin(3) * lin(1), lin(3) * lin(7)) == 0

    def test_discriminant_quadratic(self):
        # disc(aT^2+bT+c) = b^2-4ac
        a, b, c = 2, 3, -7
        assert discriminant(IntPoly([c, b, a])) == b * b - 4 * a * c


class TestCoprimeBasis:
    def test_spec_example_already_coprime(self):
        dec = coprime_basis([lin(1), IntPoly([1, 1])])
        assert set(dec.basis) == {lin(1), IntPoly([1, 1])}
        cols = {tuple(row[i] for row in dec.exponents) for i in range(2)}
        assert cols == {(1, 0), (0, 1)}

    def test_spec_example_gcd_refinement(self):
        f0 = lin(1) * IntPoly([1, 1])
        f1 = IntPoly([1, 1]) * IntPoly([1, 1])
        dec = coprime_basis([f0, f1])
        assert set(dec.basis) == {lin(1), IntPoly([1, 1])}
        by_poly = {g: row for g, row in zip(dec.basis, dec.exponents)}
        assert by_poly[lin(1)] == (1, 0)
        assert by_poly[IntPoly([1, 1])] == (1, 2)

    def test_spec_example_squarefree_decomposition(self):
        dec = coprime_basis([IntPoly([1, 0, 1]) ** 3])
        assert dec.basis == (IntPoly([1, 0, 1]),)
        assert dec.exponents == ((3,),)

    def test_positive_entry_each_row(self):
        dec = coprime_basis([lin(1) * lin(2), lin(2) ** 2, lin(5)])
        for row in dec.exponents:
            assert any(e > 0 for e in row)

    def test_contents_absorb_signs_and_constants(self):
        f = -6 * (lin(1) ** 2)
        dec = coprime_basis([f])
        assert dec.contents == (-6,)
        assert all(g.leading() > 0 for g in dec.basis)

    @given(
        st.lists(
            st.tuples(
                st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 2), st.integers(1, 2)
            ),
            min_size=1,
            max_size=3,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_reconstruction(self, shapes):
        fs = []
        for a, b, e1, e2 in shapes:
            f = (lin(a) ** e1) * (IntPoly([b, 0, 1]) ** e2)
            if f.is_constant():
                f = f * lin(a + 1)
            fs.append(f)
        dec = coprime_basis(fs)
        for i, f in enumerate(fs):
            assert dec.reconstruct(i) == f
        for i in range(len(dec.basis)):
            for j in range(i + 1, len(dec.basis)):
                assert poly_gcd(dec.basis[i], dec.basis[j]).degree() == 0

    def test_basis_squarefree(self):
        dec = coprime_basis([(lin(1) * lin(2)) ** 2 * lin(3)])
        for g in dec.basis:
            assert poly_gcd(g, g.deriv()).degree() == 0

    def test_constant_rejected(self):
        with pytest.raises(ConstantInputError):
            coprime_basis([IntPoly([2])])


class TestExactDiv:
    def test_roundtrip(self):
        a, b = lin(3) * lin(4) * 5, lin(4)
        assert exact_div(a, b) == lin(3) * 5

    def test_rejects_inexact(self):
        with pytest.raises(ValueError):
            exact_div(lin(1), lin(2))


def test_radical_strips_multiplicity():
    assert radical(lin(2) ** 3 * lin(5)) == lin(2) * lin(5)
