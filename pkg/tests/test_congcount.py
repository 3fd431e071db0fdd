import itertools
import math
from fractions import Fraction

import pytest

from wudkit.congcount import (
    VCountQuery,
    estimate_check,
    v_count_brute,
    v_count_charsum,
)
from wudkit.errors import RegimeMismatchError
from wudkit.intpoly import IntPoly
from wudkit.resring import euler_phi

T_PLUS_1 = IntPoly([1, 1])
T_MINUS_1 = IntPoly([-1, 1])
T_ = IntPoly([0, 1])
QUAD = IntPoly([1, 1, 1])

CORPUS = [T_PLUS_1, T_MINUS_1, T_, QUAD, IntPoly([1, 0, 1])]


def literal_product_count(query):
    """Third route: literal iteration over U_q^N (tiny cases only)."""
    q = query.q
    units = [u for u in range(1, q) if math.gcd(u, q) == 1] if q > 1 else [0]
    count = 0
    for tup in itertools.product(units, repeat=query.N):
        ok = True
        for i in range(query.K):
            prod = 1
            for j, v in enumerate(tup):
                prod = prod * query.slot_polys[j][i](v) % q
            if math.gcd(prod, q) != 1 or prod != query.targets[i] % q:
                ok = False
                break
        if ok:
            count += 1
    return count


class TestBrute:
    def test_spec_example_pairs(self):
        query = VCountQuery.uniform(5, [T_PLUS_1], 2, [1])
        assert v_count_brute(query) == 3  # (1,2),(2,1),(3,3)

    def test_identity_slot(self):
        assert v_count_brute(VCountQuery.uniform(5, [T_], 1, [2])) == 1

    def test_q2(self):
        assert v_count_brute(VCountQuery.uniform(2, [T_], 3, [1])) == 1

    def test_q1(self):
        assert v_count_brute(VCountQuery.uniform(1, [T_], 2, [1])) == 1

    def test_against_literal_iteration(self):
        for q in (3, 4, 5, 8, 9, 12):
            for N in (1, 2, 3):
                for polys in ([T_PLUS_1], [T_MINUS_1, T_PLUS_1]):
                    units = [u for u in range(1, q) if math.gcd(u, q) == 1]
                    query = VCountQuery.uniform(q, polys, N, [units[0]] * len(polys))
                    assert v_count_brute(query) == literal_product_count(query)

    def test_mixed_slots(self):
        # different polynomials in different slots
        query = VCountQuery(
            q=5,
            K=1,
            N=2,
            slot_polys=((T_PLUS_1,), (T_MINUS_1,)),
            targets=(2,),
        )
        assert v_count_brute(query) == literal_product_count(query)


class TestCharsum:
    def test_matches_brute_spec_example(self):
        query = VCountQuery.uniform(5, [T_PLUS_1], 2, [1])
        assert v_count_charsum(query) == 3

    def test_q8_k2(self):
        query = VCountQuery.uniform(8, [T_MINUS_1, T_PLUS_1], 3, [1, 3])
        assert v_count_charsum(query) == v_count_brute(query)

    def test_q1(self):
        assert v_count_charsum(VCountQuery.uniform(1, [T_], 2, [1])) == 1

    def test_oracle_equivalence_grid(self):
        for q in (2, 3, 4, 5, 6, 8, 9, 15, 16):
            units = [u for u in range(1, q) if math.gcd(u, q) == 1] or [1]
            for N in (1, 2, 3):
                for K, polys in ((1, [QUAD]), (2, [T_PLUS_1, T_MINUS_1])):
                    for w0 in units[:2]:
                        targets = [w0] * K
                        query = VCountQuery.uniform(q, polys, N, targets)
                        assert v_count_charsum(query) == v_count_brute(query), (q, N, K, w0)

    def test_symmetry_slot_permutation(self):
        a = VCountQuery(
            q=7, K=1, N=3, slot_polys=((T_PLUS_1,), (QUAD,), (T_PLUS_1,)), targets=(2,)
        )
        b = VCountQuery(
            q=7, K=1, N=3, slot_polys=((T_PLUS_1,), (T_PLUS_1,), (QUAD,)), targets=(2,)
        )
        assert v_count_brute(a) == v_count_brute(b)
        assert v_count_charsum(a) == v_count_charsum(b)

    def test_total_mass(self):
        # summing over all coprime targets gives prod_j alpha_j phi(q)
        from wudkit.resring import alpha_poly

        for q in (5, 8, 9):
            units = [u for u in range(1, q) if math.gcd(u, q) == 1]
            N = 2
            polys = [T_PLUS_1]
            total = sum(
                v_count_brute(VCountQuery.uniform(q, polys, N, [w])) for w in units
            )
            expected = (alpha_poly(T_PLUS_1, q) * euler_phi(q)) ** N
            assert total == expected


class TestEstimate:
    def test_large_n_regime(self):
        query = VCountQuery.uniform(25, [T_MINUS_1, T_PLUS_1], 5, [2, 3])
        rep = estimate_check(query, "LARGE_N")
        assert rep.exact_count == rep.charsum_count
        assert rep.predicted_main is not None
        assert rep.ratio == pytest.approx(
            float(Fraction(rep.exact_count) / rep.predicted_main)
        )

    def test_small_n_regime(self):
        query = VCountQuery.uniform(13, [QUAD], 1, [1])
        rep = estimate_check(query, "SMALL_N")
        assert rep.exact_count <= 2
        assert rep.envelope is not None

    def test_regime_mismatch(self):
        query = VCountQuery.uniform(13, [QUAD], 1, [1])
        with pytest.raises(RegimeMismatchError):
            estimate_check(query, "LARGE_N")

    def test_sqfree_regime_rejects_squareful_modulus(self):
        query = VCountQuery.uniform(9, [T_PLUS_1], 2, [1])
        with pytest.raises(RegimeMismatchError):
            estimate_check(query, "SQFREE")

    def test_q1_trivial(self):
        rep = estimate_check(VCountQuery.uniform(1, [T_], 2, [1]), "LARGE_N")
        assert rep.exact_count == 1 and rep.predicted_main == 1
