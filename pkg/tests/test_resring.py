import math
import random
from fractions import Fraction

import pytest

from wudkit.errors import BeyondVUndefinedError, ModulusTooLargeError, ZeroDensityError
from wudkit.intpoly import IntPoly
from wudkit.presets import preset
from wudkit.resring import (
    admissible_k,
    alpha_poly,
    alpha_v,
    euler_phi,
    factorize,
    lift_count,
    mult_fn_value,
    r_v_set,
    unit_group,
)

PHI = preset("phi")
SIGMA = preset("sigma")
SIGMA3 = preset("sigma_3")
JOINT = preset("phi_sigma_joint")


def naive_factor(n):
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


class TestUnitGroup:
    def test_q5_cyclic(self):
        g = unit_group(5)
        assert g.phi == 4
        assert g.orders == (4,)
        assert g.components[0].generators == (2,)

    def test_q8_klein(self):
        g = unit_group(8)
        assert g.orders == (2, 2)
        assert set(g.components[0].generators) == {7, 5}

    def test_q1_trivial(self):
        g = unit_group(1)
        assert g.phi == 1
        assert list(g.units()) == [0]

    def test_dlog_exp_roundtrip(self):
        for q in [2, 3, 4, 8, 16, 45, 56, 97, 360]:
            g = unit_group(q)
            units = list(g.units())
            assert len(units) == g.phi == euler_phi(q)
            for u in units:
                assert g.exp(g.dlog(u)) == u

    def test_product_of_orders_is_phi(self):
        for q in range(1, 80):
            g = unit_group(q)
            prod = 1
            for o in g.orders:
                prod *= o
            assert prod == g.phi

    def test_too_large_rejected(self):
        with pytest.raises(ModulusTooLargeError):
            unit_group(10**7 + 1)

    def test_factorize(self):
        random.seed(1)
        for _ in range(100):
            n = random.randint(1, 10**6)
            assert factorize(n) == naive_factor(n)


class TestRvSet:
    def test_joint_family_q5(self):
        assert r_v_set(JOINT, 5, 1) == {2, 3}

    def test_sigma_v2_q4(self):
        assert r_v_set(SIGMA, 4, 2) == {1, 3}

    def test_sigma_v1_q4_empty(self):
        assert r_v_set(SIGMA, 4, 1) == set()

    def test_matches_brute_force(self):
        for spec in (PHI, SIGMA, JOINT):
            for q in [1, 2, 3, 4, 9, 12, 15, 30, 49]:
                for v in (1, 2):
                    brute = set()
                    for u in range(q) if q > 1 else [0]:
                        if math.gcd(u, q) != 1 and q > 1:
                            continue
                        w = 1
                        for i in range(spec.K):
                            w *= spec.poly(i, v)(u)
                        if math.gcd(w, q) == 1:
                            brute.add(u)
                    assert r_v_set(spec, q, v) == brute, (spec.names, q, v)


class TestAlpha:
    def test_joint_q5(self):
        assert alpha_v(JOINT, 5, 1) == Fraction(1, 2)

    def test_sigma_q7_v2(self):
        assert alpha_v(SIGMA, 7, 2) == Fraction(2, 3)

    def test_q1(self):
        assert alpha_v(PHI, 1, 1) == 1

    def test_multiplicative(self):
        for q1 in range(1, 18):
            for q2 in range(1, 300 // max(q1, 1) + 1):
                if math.gcd(q1, q2) != 1:
                    continue
                a = alpha_v(SIGMA, q1 * q2, 1)
                assert a == alpha_v(SIGMA, q1, 1) * alpha_v(SIGMA, q2, 1)

    def test_joint_closed_form(self):
        # alpha_1(q) = prod (l-3)/(l-1) for squarefree q coprime to 6
        for q in range(1, 1001):
            fac = factorize(q)
            if math.gcd(q, 6) != 1 or any(e > 1 for _, e in fac):
                continue
            expected = Fraction(1)
            for ell, _ in fac:
                expected *= Fraction(ell - 3, ell - 1)
            assert alpha_v(JOINT, q, 1) == expected

    def test_alpha_counts_set(self):
        for q in [5, 9, 20, 77]:
            a = alpha_v(SIGMA, q, 1)
            assert a * euler_phi(q) == len(r_v_set(SIGMA, q, 1))


class TestAdmissible:
    def test_sigma_odd_is_one(self):
        assert admissible_k(SIGMA, 9)[0] == 1

    def test_sigma_q4_is_two(self):
        k, a = admissible_k(SIGMA, 4)
        assert k == 2 and a == 1

    def test_sigma_q6(self):
        k, _ = admissible_k(SIGMA, 6)
        assert k == 2
        assert r_v_set(SIGMA, 6, 2) == {5}

    def test_phi_even_none(self):
        assert admissible_k(PHI, 8) is None

    def test_alpha_positive_when_admissible(self):
        for q in range(1, 120):
            res = admissible_k(SIGMA, q)
            assert res is not None
            k, a = res
            assert a > 0
            for v in range(1, k):
                assert alpha_v(SIGMA, q, v) == 0


class TestLiftCount:
    def test_spec_example(self):
        assert lift_count(IntPoly([1, 1]), 15, 3, 1) == 3

    def test_identity_lift(self):
        assert lift_count(IntPoly([1, 1]), 15, 15, 1) == 1

    def test_free_poly(self):
        assert lift_count(IntPoly([0, 1]), 9, 3, 2) == 3

    def test_zero_density(self):
        with pytest.raises(ZeroDensityError):
            lift_count(IntPoly([1, 1]), 4, 2, 1)

    def test_against_enumeration(self):
        random.seed(42)
        F = IntPoly([1, 1])
        checked = 0
        for Q in range(2, 200):
            divisors = [d for d in range(1, Q + 1) if Q % d == 0]
            for d in divisors:
                units = [
                    u
                    for u in range(d if d > 1 else 1)
                    if math.gcd(u, d) == 1 and math.gcd(F(u), d) == 1
                ]
                if not units or alpha_poly(F, Q) == 0:
                    continue
                u = random.choice(units)
                lift_count(F, Q, d, u)  # internal assertion is the check
                checked += 1
        assert checked > 300


class TestMultFnValue:
    def test_phi_12(self):
        assert mult_fn_value(PHI, 0, [(2, 2), (3, 1)]) == 4

    def test_sigma_12(self):
        assert mult_fn_value(SIGMA, 0, [(2, 2), (3, 1)]) == 28

    def test_sigma3_4(self):
        assert mult_fn_value(SIGMA3, 0, [(2, 2)]) == 73

    def test_divisor_sum_oracle(self):
        sig2 = preset("sigma_2")
        sig3 = preset("sigma_3")
        for n in range(1, 2000):
            fac = naive_factor(n)
            for r, spec in ((1, SIGMA), (2, sig2), (3, sig3)):
                expected = sum(d**r for d in range(1, n + 1) if n % d == 0)
                assert mult_fn_value(spec, 0, fac) == expected

    def test_polys_match_prime_power_fn(self):
        for spec in (PHI, SIGMA, SIGMA3, JOINT):
            for i in range(spec.K):
                for p in (2, 3, 5, 13):
                    for v in range(1, spec.V + 1):
                        assert spec.poly(i, v)(p) == spec.prime_power_fn(i, p, v)

    def test_beyond_v_undefined(self):
        bare = preset("phi")
        bare = type(bare)(
            names=bare.names, polys=bare.polys, beyond_v="undefined", prime_power_fn=None
        )
        with pytest.raises(BeyondVUndefinedError):
            mult_fn_value(bare, 0, [(2, bare.V + 1)])

    def test_mod_evaluation_matches(self):
        for spec in (SIGMA3, JOINT):
            for i in range(spec.K):
                for n_fac in ([(2, 3), (7, 1)], [(5, 2)], [(3, 8)]):
                    q = 45
                    assert (
                        mult_fn_value(spec, i, n_fac, mod=q)
                        == mult_fn_value(spec, i, n_fac) % q
                    )
