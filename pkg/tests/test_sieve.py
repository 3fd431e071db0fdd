import math

import numpy as np
import pytest

from wudkit.errors import BudgetExceededError
from wudkit.presets import preset
from wudkit.resring import factorize, mult_fn_value
from wudkit.sieve import (
    FilterSpec,
    anatomy_of,
    coprime_growth_check,
    counterexample_build,
    n_k_part,
    p_r,
    sieve_run,
)

PHI = preset("phi")
SIGMA = preset("sigma")
JOINT = preset("phi_sigma_joint")


def brute_report(spec, x, q, k, filt=FilterSpec()):
    """Per-n oracle: factor each n naively and apply filters literally."""
    counts = {}
    for n in range(1, x + 1):
        fac = factorize(n) if n > 1 else []
        vals = tuple(mult_fn_value(spec, i, fac, mod=q) for i in range(spec.K))
        if q > 1 and any(math.gcd(v, q) != 1 for v in vals):
            continue
        if filt.kind == "P_R_GT_Q":
            if not p_r(fac, filt.index) > q:
                continue
        elif filt.kind == "P_T_OF_NK_GT_Q":
            nk = n_k_part(fac, k)
            nk_fac = [(p, e // k) for p, e in fac if e % k == 0]
            if not p_r(nk_fac, filt.index) > q:
                continue
        elif filt.kind == "CONVENIENT":
            if not anatomy_of(n, k, x).convenient:
                continue
        counts[vals] = counts.get(vals, 0) + 1
    return counts


class TestSieveCorrectness:
    def test_phi_spec_example(self):
        rep = sieve_run(PHI, 10, 5, 1)
        assert rep.counts[(1,)] == 4

    def test_x1_q2(self):
        rep = sieve_run(PHI, 1, 2)
        assert rep.counts == {(1,): 1}
        assert rep.coprime_total == 1

    @pytest.mark.parametrize("spec", [PHI, SIGMA, JOINT])
    @pytest.mark.parametrize("q", [4, 5, 9])
    def test_counts_match_naive_oracle(self, spec, q):
        x = 3000
        from wudkit.resring import admissible_k

        res = admissible_k(spec, q)
        if res is None:
            return
        k = res[0]
        rep = sieve_run(spec, x, q, k)
        brute = brute_report(spec, x, q, k)
        observed = {t: c for t, c in rep.counts.items() if c}
        assert observed == brute

    @pytest.mark.parametrize(
        "filt",
        [
            FilterSpec("P_R_GT_Q", 2),
            FilterSpec("P_T_OF_NK_GT_Q", 1),
            FilterSpec("CONVENIENT"),
        ],
    )
    def test_filters_match_naive_oracle(self, filt):
        x, q, k = 2500, 5, 1
        rep = sieve_run(SIGMA, x, q, k, filt)
        brute = brute_report(SIGMA, x, q, k, filt)
        observed = {t: c for t, c in rep.counts.items() if c}
        assert observed == brute

    def test_filter_nk_k2(self):
        x, q, k = 4000, 4, 2
        filt = FilterSpec("P_T_OF_NK_GT_Q", 1)
        rep = sieve_run(SIGMA, x, q, k, filt)
        brute = brute_report(SIGMA, x, q, k, filt)
        observed = {t: c for t, c in rep.counts.items() if c}
        assert observed == brute

    def test_mass_conservation(self):
        rep = sieve_run(SIGMA, 10**4, 7, 1)
        assert sum(rep.counts.values()) == rep.coprime_total

    def test_filter_monotone_in_R(self):
        totals = []
        for R in (1, 2, 3, 4):
            rep = sieve_run(SIGMA, 10**4, 5, 1, FilterSpec("P_R_GT_Q", R))
            totals.append(rep.coprime_total)
        assert totals == sorted(totals, reverse=True)

    def test_budget_guards(self):
        with pytest.raises(BudgetExceededError):
            sieve_run(PHI, 10**8 + 1, 5)
        with pytest.raises(BudgetExceededError):
            sieve_run(PHI, 100, 10**5 + 1)


class TestAnatomy:
    def test_p_r_examples(self):
        assert p_r([(2, 2), (3, 1)], 1) == 3
        assert p_r([(2, 2), (3, 1)], 2) == 2
        assert p_r([(2, 2), (3, 1)], 3) == 2
        assert p_r([(2, 2), (3, 1)], 4) == 1

    def test_n_k(self):
        # n = 2^4 * 3^2 * 5: n_2 = 2^2 * 3, cofactor 5 kept aside
        assert n_k_part([(2, 4), (3, 2), (5, 1)], 2) == 12
        assert n_k_part([(2, 3), (3, 2)], 2) == 3
        assert n_k_part([(2, 3)], 1) == 8

    def test_against_naive_scan(self):
        for n in range(2, 500):
            fac = factorize(n)
            prod = 1
            for p, e in fac:
                prod *= p**e
            assert prod == n
            for k in (1, 2, 3):
                nk = n_k_part(fac, k)
                assert n % nk**k == 0
                rest = n // nk**k
                assert math.gcd(nk, rest) == 1
                for p, e in factorize(rest) if rest > 1 else []:
                    assert e % k != 0

    def test_anatomy_convenient_j0(self):
        # x small enough that J = 0: everything is convenient
        assert anatomy_of(12, 1, 1000).convenient


class TestGrowth:
    def test_phi_q1(self):
        rows = {}
        rep = sieve_run(PHI, 10**4, 1, 1)
        assert rep.coprime_total == 10**4

    def test_sigma_q3_shape(self):
        out = coprime_growth_check(SIGMA, 3, 1, xs=[10**4, 10**5, 10**6])
        assert out["alpha_k"] == 0.5
        assert 0.8 <= out["logx_coeff"] <= 1.2

    def test_checkpoints_monotone(self):
        totals = {}
        sieve_run(
            SIGMA,
            10**5,
            5,
            1,
            checkpoints=[10**3, 10**4, 10**5],
            on_checkpoint=lambda cp, t: totals.__setitem__(cp, t),
        )
        assert totals[10**3] <= totals[10**4] <= totals[10**5]
        direct = sieve_run(SIGMA, 10**3, 5, 1)
        assert totals[10**3] == direct.coprime_total


class TestCounterexamples:
    def test_eisenstein_small(self):
        out = counterexample_build("EISENSTEIN_FAMILY", 10**5, {"d": 2, "q": 77})
        assert out["observed_ratio"] >= 2.0

    def test_ifh_small(self):
        out = counterexample_build("IFH_VIOLATION", 10**5, {"d": 2, "q": 77})
        assert out["observed_ratio"] >= 1.5  # full strength needs larger x

    def test_control_small(self):
        out = counterexample_build("CONTROL", 10**5, {"q": 79})
        assert out["observed_ratio"] < 1.5

    def test_linear_overrep(self):
        out = counterexample_build("LINEAR_OVERREP", 10**5, {"q": 1001})
        assert out["observed_ratio"] > 2.0
