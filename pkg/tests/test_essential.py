import csv
import io
import json
import math

import numpy as np
import pytest

from covrad.errors import InvalidInputError
from covrad.essential import (
    CSV_FIELDS,
    SlidingBlockRule,
    analytic_essential_0k,
    apply_sliding_block,
    apply_sliding_block_batch,
    constant_rule,
    empirical_quantile,
    estimate_eps_radius,
    estimate_sbc_mismatch,
    estimates_to_csv,
    identity_rule,
    rll0k_rule,
    rll0k_rule_mismatch,
)
from covrad.graphs import build_full_shift, build_repetition, build_rll_0k, build_rll_d_inf
from covrad.markov import sample_words, uniform_bernoulli
from covrad.quantizer import covering_radius_exact, quantize_distances

from oracles import rll0k_ok

U2 = uniform_bernoulli(2)
FULL2 = build_full_shift(2)


class TestEstimate:
    def test_rll01(self):
        est = estimate_eps_radius(build_rll_0k(1), U2, 10**4, 200, 0.5, seed=7)
        assert abs(est.normalized - 1 / 6) <= 0.01
        assert abs(est.mean_normalized - 1 / 6) <= 0.01

    def test_full_shift_zero(self):
        est = estimate_eps_radius(FULL2, U2, 500, 20, 0.5, seed=1)
        assert est.quantile_radius == 0 and est.mean_normalized == 0.0 and est.stderr == 0.0

    def test_repetition_half(self):
        est = estimate_eps_radius(build_repetition(2), U2, 10**4, 50, 0.5, seed=2)
        assert abs(est.normalized - 0.5) <= 0.01

    def test_seed_reproducible(self):
        a = estimate_eps_radius(build_rll_0k(2), U2, 300, 20, 0.2, seed=5)
        b = estimate_eps_radius(build_rll_0k(2), U2, 300, 20, 0.2, seed=5)
        assert a == b

    @pytest.mark.parametrize("bad", [dict(N=5), dict(eps=0.0), dict(eps=1.0), dict(n=0)])
    def test_preconditions(self, bad):
        kw = dict(n=100, N=20, eps=0.5)
        kw.update(bad)
        with pytest.raises(InvalidInputError):
            estimate_eps_radius(build_rll_0k(1), U2, kw["n"], kw["N"], kw["eps"], seed=0)

    def test_alphabet_mismatch(self):
        with pytest.raises(InvalidInputError):
            estimate_eps_radius(build_rll_0k(1), uniform_bernoulli(3), 100, 20, 0.5, seed=0)


class TestQuantile:
    @pytest.mark.parametrize("eps", [0.01, 0.1, 0.25, 0.5, 0.9, 0.99])
    def test_matches_counting_definition(self, eps):
        rng = np.random.default_rng(int(eps * 100))
        for _ in range(50):
            d = rng.integers(0, 20, int(rng.integers(10, 60)))
            r = empirical_quantile(d, eps)
            # smallest r whose ball holds at least (1 - eps) of the samples
            want = min(v for v in range(21) if (d <= v).mean() >= 1 - eps - 1e-12)
            assert r == want

    def test_order_statistic(self):
        d = list(range(10))
        assert empirical_quantile(d, 0.5) == 4  # ceil(5) = 5th smallest
        assert empirical_quantile(d, 0.05) == 9
        assert empirical_quantile(d, 0.95) == 0


class TestAnalytic:
    def test_values(self):
        assert analytic_essential_0k(1) == pytest.approx(1 / 6)
        assert analytic_essential_0k(2) == pytest.approx(1 / 14)

    def test_below_power(self):
        for k in range(1, 30):
            assert analytic_essential_0k(k) < 2.0 ** (-(k + 1))

    def test_rejects_k0(self):
        with pytest.raises(InvalidInputError):
            analytic_essential_0k(0)


class TestSlidingBlock:
    def test_identity(self):
        y = [0, 1, 1, 0, 1]
        assert apply_sliding_block(identity_rule(), y) == (tuple(y), 0)

    def test_constant(self):
        img, m = apply_sliding_block(constant_rule(1), [0] * 12)
        assert img == (1,) * 12 and m == 12

    def test_window_too_long(self):
        with pytest.raises(InvalidInputError):
            apply_sliding_block(rll0k_rule(1, 3), [0] * 5)

    @pytest.mark.parametrize("k,N", [(1, 1), (1, 3), (2, 2), (3, 1)])
    def test_vectorized_matches_scalar(self, k, N):
        r = rll0k_rule(k, N)
        scalar = SlidingBlockRule(r.look_back, r.look_ahead, r.rule)
        words = sample_words(U2, 60, 30, k * 10 + N)
        a, ma = apply_sliding_block_batch(r, words)
        b, mb = apply_sliding_block_batch(scalar, words)
        assert np.array_equal(a, b) and np.array_equal(ma, mb)

    def test_look_back(self):
        assert rll0k_rule(2, 3).look_back == 8 and rll0k_rule(2, 3).look_ahead == 0

    def test_formula_k1_n3(self):
        assert rll0k_rule_mismatch(1, 3) == pytest.approx(11 / 64, abs=1e-15)

    def test_formula_by_enumeration(self):
        # exact mismatch probability: enumerate every window under the uniform measure
        from itertools import product
        for k, N in [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2)]:
            r = rll0k_rule(k, N)
            total = sum(r.rule(w) != w[-1] for w in product((0, 1), repeat=r.width))
            assert total / 2**r.width == pytest.approx(rll0k_rule_mismatch(k, N), abs=1e-15)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_formula_limit(self, k):
        assert rll0k_rule_mismatch(k, 60) == pytest.approx(analytic_essential_0k(k), abs=1e-15)

    @pytest.mark.parametrize("k,N", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)])
    def test_empirical_rate(self, k, N):
        rate, se = estimate_sbc_mismatch(rll0k_rule(k, N), U2, 10**5, 20, seed=k * 100 + N)
        assert abs(rate - rll0k_rule_mismatch(k, N)) <= 3 * se

    def test_identity_zero_rate(self):
        assert estimate_sbc_mismatch(identity_rule(), U2, 1000, 5, seed=0) == (0.0, 0.0)

    def test_monotone_in_block(self):
        rates = [rll0k_rule_mismatch(1, N) for N in range(1, 7)]
        assert all(a > b for a, b in zip(rates, rates[1:]))
        assert rates[-1] > 1 / 6
        est = [estimate_sbc_mismatch(rll0k_rule(1, N), U2, 10**5, 20, seed=N)[0] for N in (1, 3, 6)]
        assert est[0] > est[1] > est[2] > 1 / 6 - 0.005

    @pytest.mark.parametrize("k,N", [(1, 1), (1, 3), (2, 2), (3, 2)])
    def test_images_are_constrained(self, k, N):
        words = sample_words(U2, 400, 100, 11)
        img, _ = apply_sliding_block_batch(rll0k_rule(k, N), words)
        assert (quantize_distances(build_rll_0k(k), img) == 0).all()
        assert all(rll0k_ok(tuple(row), k) for row in img.tolist())


class TestOrdering:
    @pytest.mark.parametrize("system", [build_rll_0k(1), build_rll_0k(2), build_rll_d_inf(1), build_repetition(2)],
                             ids=lambda s: s.name)
    def test_quantile_below_exact(self, system):
        n = 12
        exact = covering_radius_exact(system, FULL2, n).radius
        est = estimate_eps_radius(system, U2, n, 200, 0.1, seed=4)
        assert est.quantile_radius <= exact

    def test_stderr_scaling(self):
        x = build_rll_0k(1)
        ratios = []
        for rep in range(8):
            a = estimate_eps_radius(x, U2, 400, 100, 0.5, seed=1000 + rep).stderr
            b = estimate_eps_radius(x, U2, 400, 200, 0.5, seed=2000 + rep).stderr
            ratios.append(b / a)
        assert abs(np.mean(ratios) - 1 / math.sqrt(2)) <= 0.2 / math.sqrt(2)


class TestSerialization:
    def test_json_and_csv(self):
        est = estimate_eps_radius(build_rll_0k(1), U2, 200, 10, 0.5, seed=3)
        d = json.loads(est.to_json())
        assert d["seed"] == 3 and d["samples"] == 10
        rows = list(csv.DictReader(io.StringIO(estimates_to_csv([est, est]))))
        assert len(rows) == 2 and tuple(rows[0]) == CSV_FIELDS
        assert float(rows[0]["normalized"]) == est.normalized
