import math

import numpy as np
import pytest

import lsqbounds as lb


def test_fixed_design_closed_forms():
    assert lb.analytic_risk_distribution("testing", 4, 2) == [(2.0, 2), (1.0, 2)]
    assert lb.risk_moments("testing", 4, 2, 0.1) == pytest.approx((0.06, 2e-3), rel=1e-12)
    assert lb.testing_bound(4, 2, 0.1) == pytest.approx(6 + math.sqrt(200), rel=1e-14)
    npm, _ = lb.naive_cdfs(4, 2, 6.0)
    assert npm == pytest.approx(1 - math.exp(-3) * 8.5, rel=1e-12)


def test_mixture_matches_gamma_for_one_component():
    for x in (0.5, 2.0, 7.0):
        assert lb.mixture_cdf([(2.0, 3)], x) == pytest.approx(lb.gamma_cdf(1.5, 4.0, x), rel=1e-12)
    q = lb.mixture_quantile([(2.0, 2), (1.0, 2)], 0.9)
    assert lb.mixture_cdf([(2.0, 2), (1.0, 2)], q) == pytest.approx(0.9, abs=1e-9)


def test_sample_risks():
    g = lb.sample_risks("testing", 20000, seed=3)
    assert isinstance(g, np.ndarray) and g.shape == (20000,)
    assert 5.8 < g.mean() < 6.2
    again = lb.sample_risks("testing", 20000, seed=3, sigma=2.0, threads=3)
    assert np.array_equal(g, again)


def test_random_design_moments():
    assert lb.mean_mse(60, 10, 0.2) == pytest.approx(0.04 * 59 / 49, rel=1e-14)
    assert lb.variance_mse(60, 10, 1.0, "paper") == pytest.approx(489661 / 112847, rel=1e-13)
    assert lb.variance_mse(60, 10, 1.0, "corrected") == pytest.approx(330754 / 112847, rel=1e-13)
    t1, t2, t11 = lb.inv_wishart_trace_moments(20, 5)
    assert t11 == pytest.approx(335 / 2520, rel=1e-14)
    assert lb.gaussian_quartic_moment(np.eye(2), np.zeros(2)) == pytest.approx(8.0)
    assert lb.approx_bound(6.0, 0.2, 0.75, "asymptotic") == pytest.approx(0.08)


def test_run_trials():
    losses = lb.run_trials(60, 10, 0.2, 20000, seed=7)
    s = lb.summarize(losses)
    assert abs(s["mean"] - lb.mean_mse(60, 10, 0.2)) < 4 * s["std_error_mean"]
    assert np.array_equal(losses, lb.run_trials(60, 10, 0.2, 20000, seed=7, threads=1))
    assert not lb.run_trials(20, 5, 0.0, 100, seed=1).any()


def test_errors():
    with pytest.raises(lb.DomainError):
        lb.mean_mse(11, 10, 1.0)
    with pytest.raises(lb.DomainError):
        lb.variance_mse(60, 10, 1.0, "other")
    with pytest.raises(lb.Error):
        lb.run_trials(20, 5, 0.1, 10, seed=1, feature_cov=np.zeros((5, 5)))
    with pytest.raises(ValueError):
        lb.testing_bound(4, 2, 1.5)
