import math
import random
from itertools import combinations

import pytest

from wudkit.errors import ConstantInputError
from wudkit.intmat import (
    IntMatrix,
    beta,
    exponent_matrix,
    ifh_check,
    is_mult_independent,
    kernel_basis,
    smith_normal_form,
)
from wudkit.intpoly import IntPoly


def lin(a):
    return IntPoly([-a, 1])


def check_snf(A):
    snf = smith_normal_form(A)
    assert snf.U * A * snf.V == snf.D
    assert abs(snf.U.det()) == 1
    assert abs(snf.V.det()) == 1
    facs = snf.invariant_factors
    assert all(f >= 0 for f in facs)
    for a, b in zip(facs, facs[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    return snf


class TestSnf:
    def test_diag_2_3(self):
        snf = check_snf(IntMatrix.from_rows([[2, 0], [0, 3]]))
        assert snf.invariant_factors == (1, 6)

    def test_column_of_ones(self):
        snf = check_snf(IntMatrix.from_rows([[1], [1]]))
        assert snf.invariant_factors == (1,)

    def test_zero_matrix(self):
        snf = check_snf(IntMatrix.zero(2, 2))
        assert snf.invariant_factors == (0, 0)

    def test_random_matrices_round_trip(self):
        random.seed(20240811)
        for _ in range(200):
            r = random.randint(1, 8)
            c = random.randint(1, 8)
            A = IntMatrix(r, c, [random.randint(-50, 50) for _ in range(r * c)])
            check_snf(A)

    def test_minor_gcd_characterization(self):
        random.seed(99)
        for _ in range(50):
            A = IntMatrix(4, 4, [random.randint(-9, 9) for _ in range(16)])
            snf = check_snf(A)
            rows = A.to_rows()
            prod = 1
            for j in range(1, 5):
                minors = []
                for ri in combinations(range(4), j):
                    for ci in combinations(range(4), j):
                        sub = IntMatrix.from_rows(
                            [[rows[i][k] for k in ci] for i in ri]
                        )
                        minors.append(sub.det())
                g = math.gcd(*minors)
                prod_expected = g
                prod *= snf.invariant_factors[j - 1]
                assert abs(prod) == prod_expected, (j, snf.invariant_factors)

    def test_row_duplication_invariance(self):
        random.seed(5)
        for _ in range(40):
            r, c = random.randint(1, 4), random.randint(1, 4)
            rows = [[random.randint(-9, 9) for _ in range(c)] for _ in range(r)]
            A = smith_normal_form(IntMatrix.from_rows(rows))
            B = smith_normal_form(IntMatrix.from_rows(rows + [rows[0]]))
            nz_a = [f for f in A.invariant_factors if f]
            nz_b = [f for f in B.invariant_factors if f]
            assert nz_a == nz_b


class TestKernel:
    def test_kernel_of_singular(self):
        A = IntMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
        basis = kernel_basis(A)
        assert len(basis) == 2
        for v in basis:
            assert all(
                sum(A[i, j] * v[j] for j in range(3)) == 0 for i in range(2)
            )

    def test_full_rank_trivial_kernel(self):
        assert kernel_basis(IntMatrix.from_rows([[2, 0], [0, 3]])) == []


class TestExponentMatrix:
    def test_single_repeated_root(self):
        E = exponent_matrix([lin(1), lin(1) * lin(1)])
        assert E.to_rows() == [[1, 2]]

    def test_two_basis_elements(self):
        E = exponent_matrix([lin(1), lin(-1), lin(1) * lin(-1)])
        rows = set(map(tuple, E.to_rows()))
        assert rows == {(0, 1, 1), (1, 0, 1)}

    def test_degenerate_power(self):
        E = exponent_matrix([lin(7) ** 3])
        assert E.to_rows() == [[3]]


class TestBeta:
    def test_paper_diag_family(self):
        assert beta([lin(1), lin(2), lin(3) ** 2]) == 2

    def test_separable_family(self):
        assert beta([lin(1), lin(-1)]) == 1

    def test_single_squarefree_product(self):
        assert beta([IntPoly([-1, 0, 1])]) == 1  # T^2 - 1

    def test_squarefree_product_always_one(self):
        fams = [
            [lin(1), lin(2)],
            [lin(1) * lin(2), lin(3)],
            [IntPoly([1, 1, 1]), lin(5)],
        ]
        for fam in fams:
            assert beta(fam) == 1

    def test_dependent_family_reports_zero(self):
        assert beta([lin(1), lin(1) ** 2]) == 0


class TestMultIndependent:
    def test_distinct_irreducibles(self):
        assert is_mult_independent([lin(1), lin(-1)]) is True

    def test_power_relation(self):
        assert is_mult_independent([lin(1), lin(1) ** 2]) is False

    def test_product_relation(self):
        assert is_mult_independent([lin(1) * lin(-1), lin(1), lin(-1)]) is False

    def test_constant_rejected(self):
        with pytest.raises(ConstantInputError):
            is_mult_independent([IntPoly([4])])


class TestIfh:
    def test_beta_one_always_passes(self):
        ok, witness = ifh_check(2 * 3 * 5 * 7 * 11, [lin(1), lin(-1)], 1)
        assert ok and witness is None

    def test_witness_seven(self):
        fam = [lin(1), lin(2), lin(3) ** 2]  # beta = 2
        ok, witness = ifh_check(7, fam, 1)
        assert not ok and witness == 7

    def test_witness_five(self):
        # gcd(5-1, 2) = 2, so q = 5 fails too
        fam = [lin(1), lin(2), lin(3) ** 2]
        ok, witness = ifh_check(5, fam, 1)
        assert not ok and witness == 5

    def test_b0_excludes_small_primes(self):
        fam = [lin(1), lin(2), lin(3) ** 2]
        ok, witness = ifh_check(5, fam, 5)
        assert ok
