import json
import math

import numpy as np
import pytest
from scipy import integrate, stats

from pacnull.errors import DomainError, InvalidArgumentError, NumericInstabilityError
from pacnull.io import dumps
from pacnull.mcval import mc_null
from pacnull.mi import MiValue
from pacnull.nullmodel import (
    CALIBRATED,
    PRINTED,
    NullModelParams,
    NullVariant,
    assess,
    cell_variance,
    critical_value,
    dirichlet_cross_moment,
    entropy_contribution_moments,
    null_params,
    p_value,
)


def test_cell_variance_large_n_limit():
    B = 18
    assert cell_variance(10**15, B, leading_term=True) == pytest.approx((1 / B**2) * (1 - 1 / B), abs=1e-9)
    assert cell_variance(10**15, B) < 1e-15


def test_cell_variance_matches_iid_simulation():
    # normalized Rayleigh bin means under uniform phase
    n, B, reps = 600, 18, 20_000
    rng = np.random.default_rng(0)
    bins = rng.integers(0, B, (reps, n))
    amp = rng.rayleigh(1.0, (reps, n))
    idx = bins + B * np.arange(reps)[:, None]
    sums = np.bincount(idx.ravel(), amp.ravel(), reps * B).reshape(reps, B)
    counts = np.bincount(idx.ravel(), minlength=reps * B).reshape(reps, B)
    means = sums / counts
    p = means / means.sum(axis=1, keepdims=True)
    assert p[:, 0].var() == pytest.approx(cell_variance(n, B), rel=0.03)


@pytest.mark.parametrize("a, B", [(0.5, 4), (3.0, 9), (200.0, 18), (1500.0, 60)])
def test_entropy_moments_quadrature(a, B):
    dist = stats.beta(a, (B - 1) * a)
    lo, hi = dist.ppf(1e-14), dist.ppf(1 - 1e-14)
    m1 = integrate.quad(lambda p: p * math.log(p) * dist.pdf(p), lo, hi, epsabs=1e-15, limit=200)[0]
    m2 = integrate.quad(lambda p: (p * math.log(p)) ** 2 * dist.pdf(p), lo, hi, epsabs=1e-15, limit=200)[0]
    got1, got2 = entropy_contribution_moments(a, B)
    assert got1 == pytest.approx(m1, rel=1e-8)
    assert got2 == pytest.approx(m2, rel=1e-8)


@pytest.mark.parametrize("a, B", [(0.7, 3), (2.0, 6), (50.0, 18)])
def test_cross_moment_dirichlet_sampling(a, B):
    rng = np.random.default_rng(1)
    p = rng.dirichlet(np.full(B, a), size=400_000)
    h = np.where(p > 0, p * np.log(np.where(p > 0, p, 1)), 0)
    prod = h[:, 0] * h[:, 1]
    se = prod.std() / math.sqrt(prod.size)
    assert abs(prod.mean() - dirichlet_cross_moment(a, B)) < 3 * se


def test_cross_moment_two_bin_closed_check():
    # with B=2, h_1 h_2 is a function of one beta variable
    a = 1.7
    dist = stats.beta(a, a)
    val = integrate.quad(lambda p: p * math.log(p) * (1 - p) * math.log(1 - p) * dist.pdf(p), 0, 1)[0]
    assert dirichlet_cross_moment(a, 2) == pytest.approx(val, rel=1e-9)


def test_params_invariants():
    for n in (100, 600, 7000, 24000):
        for B in (2, 9, 18, 60):
            p = null_params(n, B)
            assert p.mu_p == 1 / B
            assert p.sigma2_p > 0 and p.a_p > 0
            assert p.b_p == pytest.approx((B - 1) * p.a_p, rel=1e-15)
            assert 0 < p.mu_h < 1 and p.sigma2_h > 0 and p.d_h > 0
            assert p.dist.a > 0 and p.dist.b > 0
            assert p.dist.mean == pytest.approx(1 - p.mu_h, abs=1e-12)


def test_beta_mean_small_at_7000():
    assert 0 < null_params(7000, 18).dist.mean < 0.001


@pytest.mark.parametrize(
    "n, B, expected, rel",
    [
        (7000, 18, 0.0002261, 0.01),
        (20000, 36, 0.0001094855, 0.001),
        (24000, 51, 0.0001105, 0.01),
        (600, 18, 0.00270, 0.02),
        (600, 36, 0.00383, 0.02),
        (600, 60, 0.00527, 0.02),
        (600, 9, 0.00211, 0.02),
    ],
)
def test_critical_values_reproduce_tables(n, B, expected, rel):
    assert critical_value(null_params(n, B), 0.01) == pytest.approx(expected, rel=rel)


def test_450_20_tabulated_value_is_the_one_per_mille_quantile():
    p = null_params(450, 20)
    assert critical_value(p, 0.001) == pytest.approx(0.0046073, rel=1e-3)
    assert critical_value(p, 0.01) == pytest.approx(0.0038074, rel=1e-3)


def test_eight_bins_does_not_reproduce():
    assert abs(critical_value(null_params(600, 8), 0.01) / 0.00211 - 1) > 0.02


def test_p_value_examples():
    p = null_params(600, 18)
    for alpha in (0.001, 0.01, 0.05, 0.3):
        assert p_value(p, critical_value(p, alpha)) == pytest.approx(alpha, abs=1e-8)
    assert p_value(p, 0.0) == 1.0
    with pytest.raises(DomainError):
        p_value(p, 1.5)
    with pytest.raises(DomainError):
        p_value(p, -0.1)


def test_p_value_decreasing_in_mi():
    p = null_params(600, 18)
    mi = np.linspace(1e-5, 0.02, 400)
    assert np.all(np.diff(p_value(p, mi)) < 0)


def test_critical_value_decreasing_in_alpha():
    p = null_params(600, 18)
    cv = [critical_value(p, a) for a in (0.001, 0.01, 0.05, 0.1, 0.5)]
    assert all(np.diff(cv) < 0)
    for bad in (0.0, 1.0, -0.1):
        with pytest.raises(DomainError):
            critical_value(p, bad)


def test_critical_value_increases_with_bins():
    cv = [critical_value(null_params(600, B), 0.01) for B in (9, 18, 36, 60)]
    assert all(np.diff(cv) > 0)


def test_critical_value_decreases_with_length():
    cv = [critical_value(null_params(n, 18), 0.01) for n in (450, 600, 7000, 24000)]
    assert all(np.diff(cv) < 0)


def test_assess_examples():
    zero = assess(MiValue(0.0, math.log(18), 18), 600, 0.01)
    assert not zero.significant and zero.p_value == 1.0
    full = assess(MiValue(1.0, 0.0, 18), 600, 0.01)
    assert full.significant and full.p_value < 1e-6
    edge = assess(MiValue(0.00270, 0.0, 18), 600, 0.01)
    assert abs(edge.p_value - 0.01) < 0.002


@pytest.mark.parametrize("mi", [0.0005, 0.002, 0.0027, 0.004, 0.05])
def test_assess_consistency(mi):
    r = assess(MiValue(mi, 0.0, 18), 600, 0.01)
    assert r.significant == (r.p_value < r.alpha) == (r.mi > r.critical_value)


def test_assess_param_mismatch():
    with pytest.raises(InvalidArgumentError):
        assess(MiValue(0.01, 0.0, 18), 600, params=null_params(600, 9))


@pytest.mark.parametrize("n, B", [(1, 18), (600, 1), (600.5, 18), (600, 2.5)])
def test_null_params_invalid(n, B):
    with pytest.raises(InvalidArgumentError):
        null_params(n, B)


def test_unknown_variant():
    with pytest.raises(InvalidArgumentError):
        null_params(600, 18, "nope")


def test_printed_variant_is_unstable():
    with pytest.raises(NumericInstabilityError) as err:
        null_params(600, 18, PRINTED)
    steps = err.value.intermediates
    assert steps["variant"] == "printed"
    assert steps["mu_h"] > 1
    assert {"sigma2_p", "a_p", "m1", "m2", "c", "sigma2_h", "d_h"} <= set(steps)


def test_leading_term_alone_inflates_threshold():
    with_term = NullVariant("leading", leading_term=True)
    cv = critical_value(null_params(7000, 18, with_term), 0.01)
    assert cv > 100 * critical_value(null_params(7000, 18, CALIBRATED), 0.01)


def test_params_json_round_trip():
    p = null_params(7000, 18)
    data = json.loads(dumps(p.to_dict()))
    assert set(data) >= {"n", "bins", "mu_p", "sigma2_p", "a_p", "b_p", "m1", "m2", "c",
                         "mu_h", "sigma2_h", "d_h", "dist"}
    assert NullModelParams.from_dict(data) == p


def test_calibration_at_five_percent():
    p = null_params(1000, 18)
    sample = mc_null(1000, 18, 10_000, seed=0)
    rate = np.mean(p_value(p, sample.mis) < 0.05)
    assert 0.035 <= rate <= 0.065


@pytest.mark.slow
def test_mc_ninetieth_percentile_p_value():
    sample = mc_null(1000, 18, 100_000, seed=0)
    q90 = np.quantile(sample.mis, 0.9)
    assert 0.08 <= p_value(null_params(1000, 18), q90) <= 0.12
