import math

import numpy as np
import pytest
from scipy.stats import chisquare

from crease.hazard import (
    MAX_SCORE_CAP,
    ConstantParams,
    HazardParams,
    effective_average,
    hazard,
    log_pmf,
    log_pmf_grid,
    log_survival,
    log_survival_grid,
    sample_score,
    sample_scores,
    truncation_point,
)

GEOM_HALF = HazardParams(1, 1, 5, 1)  # mu = 1 everywhere -> hazard 1/2


class TestEffectiveAverage:
    def test_midpoint_is_mean_of_levels(self):
        assert effective_average(HazardParams(20, 40, 10, 2), 10) == pytest.approx(30.0, abs=1e-12)

    def test_equal_levels_collapse_to_constant(self):
        p = HazardParams(30, 30, 5, 1)
        for x in (0, 3, 17, 200):
            assert effective_average(p, x) == 30.0

    def test_scalar_evaluation_at_zero(self):
        # independent evaluation: 20 + 20 / (1 + e^5)
        expected = 20.0 + 20.0 / (1.0 + math.exp(5.0))
        assert effective_average(HazardParams(20, 40, 10, 2), 0) == pytest.approx(expected, rel=1e-12)

    def test_bounded_between_levels(self):
        p = HazardParams(20, 40, 10, 2)
        mu = effective_average(p, np.arange(0, 500))
        assert np.all(mu >= 20.0) and np.all(mu <= 40.0)
        # strictly inside until the sigmoid saturates in double precision
        window = effective_average(p, np.arange(0, 60))
        assert np.all(window > 20.0) and np.all(window < 40.0)

    def test_monotone_limit_toward_mu2(self):
        p = HazardParams(20, 40, 10, 2)
        mu = effective_average(p, np.arange(0, 300))
        assert np.all(np.diff(mu) >= 0)
        assert np.all(np.diff(mu[:60]) > 0)
        assert mu[-1] == pytest.approx(40.0, abs=1e-9)

    def test_tiny_ell_acts_as_step_without_overflow(self):
        p = HazardParams(10, 50, 7.5, 1e-12)
        assert effective_average(p, 7) == pytest.approx(10.0, abs=1e-6)
        assert effective_average(p, 8) == pytest.approx(50.0, abs=1e-6)
        assert np.isfinite(effective_average(p, np.arange(1000))).all()


class TestHazard:
    def test_constant_value(self):
        assert hazard(HazardParams(30, 30, 5, 1), 4) == pytest.approx(1 / 31, rel=1e-12)

    def test_composes_with_effective_average(self):
        assert hazard(HazardParams(20, 40, 10, 2), 10) == pytest.approx(1 / 31, rel=1e-12)

    def test_small_mu_approaches_certain_dismissal(self):
        p = HazardParams(1e-12, 1e-12, 5, 1)
        assert hazard(p, 0) == pytest.approx(1.0, abs=1e-9)


class TestSurvivalAndPmf:
    def test_log_survival_at_zero_is_zero(self):
        for p in (GEOM_HALF, HazardParams(20, 40, 10, 2)):
            assert log_survival(p, 0) == 0.0

    def test_geometric_survival(self):
        assert log_survival(GEOM_HALF, 2) == pytest.approx(math.log(0.25), rel=1e-12)
        p_mu9 = HazardParams(9, 9, 5, 1)  # hazard 0.1
        assert log_survival(p_mu9, 3) == pytest.approx(3 * math.log(0.9), rel=1e-12)

    def test_geometric_pmf(self):
        p_mu9 = HazardParams(9, 9, 5, 1)
        assert log_pmf(p_mu9, 3) == pytest.approx(math.log(0.1 * 0.9**3), rel=1e-12)
        assert log_pmf(GEOM_HALF, 0) == pytest.approx(math.log(0.5), rel=1e-12)

    def test_pmf_at_zero_uses_mu_at_zero(self):
        p = HazardParams(20, 40, 10, 2)
        mu0 = 20.0 + 20.0 / (1.0 + math.exp(5.0))
        assert log_pmf(p, 0) == pytest.approx(math.log(1.0 / (mu0 + 1.0)), rel=1e-12)

    def test_survival_recurrence_exact(self):
        p = HazardParams(17, 55, 8, 2.5)
        log_g = log_survival_grid(p, 120)
        for x in range(0, 119, 7):
            lhs = log_g[x + 1] - log_g[x]
            rhs = math.log1p(-hazard(p, x))
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_geometric_reduction_identity(self):
        for mu in (5.0, 30.0, 60.0):
            p = HazardParams(mu, mu, 20, 3)
            h = 1.0 / (mu + 1.0)
            grid = log_pmf_grid(p, 200)
            xs = np.arange(201)
            expected = math.log(h) + xs * math.log1p(-h)
            assert np.max(np.abs(grid - expected)) < 1e-12


class TestTruncation:
    def test_geometric_examples(self):
        assert truncation_point(GEOM_HALF, 0.3) == 2
        assert truncation_point(GEOM_HALF, 1e-12) == 40

    def test_eps_close_to_one(self):
        x = truncation_point(GEOM_HALF, 0.999)
        assert x == 1  # G(1) = 0.5 < 0.999

    def test_matches_direct_iteration(self):
        p = HazardParams(20, 40, 10, 2)
        for eps in (0.5, 1e-3, 1e-9):
            x = truncation_point(p, eps)
            assert math.exp(log_survival(p, x)) < eps
            assert math.exp(log_survival(p, x - 1)) >= eps

    def test_capped_for_pathological_params(self):
        p = HazardParams(1e7, 1e7, 5, 1)
        assert truncation_point(p, 1e-300) == MAX_SCORE_CAP

    def test_eps_validation(self):
        with pytest.raises(ValueError):
            truncation_point(GEOM_HALF, 0.0)
        with pytest.raises(ValueError):
            truncation_point(GEOM_HALF, 1.0)


class TestSampling:
    def test_near_certain_immediate_dismissal(self):
        p = HazardParams(1e-9, 1e-9, 5, 1)
        rng = np.random.default_rng(0)
        assert all(sample_score(p, rng) == 0 for _ in range(200))

    def test_literal_and_batch_agree_in_distribution(self):
        p = HazardParams(4, 4, 5, 1)
        rng = np.random.default_rng(3)
        lit = np.array([sample_score(p, rng) for _ in range(4000)])
        bat = sample_scores(p, 4000, np.random.default_rng(4))
        edges = [0, 1, 2, 3, 5, 8, 13, np.inf]
        lit_h = np.histogram(lit, edges)[0]
        bat_h = np.histogram(bat, edges)[0]
        # two-sample chi-square on pooled expectation
        pooled = (lit_h + bat_h) / 2.0
        stat = np.sum((lit_h - pooled) ** 2 / pooled) + np.sum((bat_h - pooled) ** 2 / pooled)
        assert stat < 30.0  # ~chi2(7) at p=0.0001 is 27.9

    def test_geometric_mean_monte_carlo(self):
        p = HazardParams(30, 30, 5, 1)
        draws = sample_scores(p, 1_000_000, np.random.default_rng(5))
        assert draws.mean() == pytest.approx(30.0, abs=0.1)

    def test_histogram_matches_pmf_chisquare(self):
        p = HazardParams(20, 40, 10, 2)
        n = 150_000
        draws = sample_scores(p, n, np.random.default_rng(11))
        x_hi = 120
        probs = np.exp(log_pmf_grid(p, x_hi))
        counts = np.bincount(np.minimum(draws, x_hi + 1), minlength=x_hi + 2)
        expected = np.concatenate([probs, [1.0 - probs.sum()]]) * n
        keep = expected > 10
        stat, pval = chisquare(counts[keep], expected[keep] * counts[keep].sum() / expected[keep].sum())
        assert pval > 0.001

    def test_zero_draws(self):
        assert sample_scores(GEOM_HALF, 0, np.random.default_rng(0)).size == 0


class TestNormalization:
    def test_pmf_plus_tail_is_one(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            p = HazardParams(*np.exp(rng.uniform(math.log(0.5), math.log(120), size=4)))
            x_max = truncation_point(p, 1e-12)
            total = np.exp(log_pmf_grid(p, x_max)).sum() + math.exp(log_survival(p, x_max + 1))
            assert total == pytest.approx(1.0, abs=1e-10)


class TestParamValidation:
    def test_positive_required(self):
        for bad in ((0, 30, 5, 1), (30, -1, 5, 1), (30, 30, 0, 1), (30, 30, 5, 0)):
            with pytest.raises(ValueError):
                HazardParams(*bad)
        with pytest.raises(ValueError):
            ConstantParams(0)

    def test_fields_coerced_to_float(self):
        p = HazardParams(20, 40, 10, 2)
        assert isinstance(p.mu1, float)
