import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from pacnull.errors import DegenerateInputError, InvalidArgumentError
from pacnull.mi import (
    PhaseAmpHistogram,
    entropy,
    mi_from_probs,
    mi_pipeline,
    mi_raw,
    modulation_index,
    phase_amp_histogram,
    phase_bins,
)
from pacnull.nullmodel import critical_value, null_params
from pacnull.scenarios import ScenarioConfig, simulate
from pacnull.sigproc import BandSpec, TimeSeries

TWO_PI = 2 * np.pi


def hist_of(probs):
    probs = np.asarray(probs, float)
    return PhaseAmpHistogram(probs, probs.size, int(np.sum(probs == 0)))


def test_uniform_grid_gives_uniform_histogram():
    phase = np.arange(100) * TWO_PI / 100
    h = phase_amp_histogram(phase, np.ones(100), 10)
    np.testing.assert_allclose(h.probs, 0.1, atol=1e-15)
    assert h.empty_bins == 0


def test_concentrated_phase(caplog):
    phase = np.linspace(0, TWO_PI / 4 * 0.99, 50)
    with caplog.at_level(logging.WARNING):
        h = phase_amp_histogram(phase, np.ones(50), 4)
    np.testing.assert_array_equal(h.probs, [1, 0, 0, 0])
    assert h.empty_bins == 3
    assert "3 of 4" in caplog.text


def test_hand_worked_two_bins():
    h = phase_amp_histogram([0.1, 0.2, 3.3, 3.4], [1, 3, 2, 2], 2)
    np.testing.assert_allclose(h.probs, [0.5, 0.5])


def test_bin_edges_half_open_and_wrap():
    edges = np.array([0.0, TWO_PI / 4, np.pi, TWO_PI])
    np.testing.assert_array_equal(phase_bins(edges, 4), [0, 1, 2, 0])
    just_below = np.nextafter(TWO_PI / 4, 0)
    assert phase_bins(np.array([just_below]), 4)[0] == 0


def test_histogram_errors():
    with pytest.raises(InvalidArgumentError):
        phase_amp_histogram([0.1, 0.2], [1.0], 4)
    with pytest.raises(InvalidArgumentError):
        phase_amp_histogram([0.1], [1.0], 1)
    with pytest.raises(InvalidArgumentError):
        phase_amp_histogram([0.1], [-1.0], 2)
    with pytest.raises(DegenerateInputError):
        phase_amp_histogram([0.1, 3.0], [0.0, 0.0], 2)


def test_entropy_examples():
    assert entropy(hist_of([0.1] * 10)) == pytest.approx(math.log(10), abs=1e-12)
    assert entropy(hist_of([1, 0, 0, 0])) == 0
    assert entropy(hist_of([0.5, 0.3, 0.2])) == pytest.approx(1.02965, abs=1e-4)


def test_mi_examples():
    assert modulation_index(hist_of([1 / 7] * 7)).mi == pytest.approx(0, abs=1e-12)
    assert modulation_index(hist_of([0, 1, 0, 0, 0])).mi == 1.0
    assert modulation_index(hist_of([0.5, 0.3, 0.2])).mi == pytest.approx(0.0628, abs=1e-3)


def test_vectorized_mi_agrees():
    rng = np.random.default_rng(0)
    p = rng.dirichlet(np.ones(18), size=50)
    expected = [modulation_index(hist_of(row)).mi for row in p]
    np.testing.assert_allclose(mi_from_probs(p), expected, atol=1e-12)


sizes = st.integers(1, 200)


@st.composite
def phase_amp(draw):
    n = draw(sizes)
    phase = draw(arrays(float, n, elements=st.floats(0, TWO_PI, exclude_max=True)))
    amp = draw(arrays(float, n, elements=st.floats(0.01, 100)))
    bins = draw(st.integers(2, 40))
    return phase, amp, bins


@given(phase_amp())
@settings(max_examples=200, deadline=None)
def test_histogram_invariants(data):
    phase, amp, bins = data
    h = phase_amp_histogram(phase, amp, bins)
    assert abs(h.probs.sum() - 1) < 1e-12
    assert np.all((h.probs >= 0) & (h.probs <= 1))
    v = modulation_index(h)
    assert 0 <= v.mi <= 1
    assert 0 <= v.entropy_nats <= math.log(bins)
    assert abs(v.mi - (1 - v.entropy_nats / math.log(bins))) < 1e-12


@given(phase_amp(), st.floats(1e-3, 1e3))
@settings(max_examples=100, deadline=None)
def test_scale_invariance(data, c):
    phase, amp, bins = data
    h1 = phase_amp_histogram(phase, amp, bins)
    h2 = phase_amp_histogram(phase, c * amp, bins)
    np.testing.assert_allclose(h1.probs, h2.probs, atol=1e-12)
    assert abs(modulation_index(h1).mi - modulation_index(h2).mi) < 1e-12


@given(st.integers(2, 36), st.integers(-50, 50), st.integers(0, 2**31))
@settings(max_examples=100, deadline=None)
def test_rotation_permutes_bins(bins, k, seed):
    rng = np.random.default_rng(seed)
    width = TWO_PI / bins
    # keep phases away from edges so rotation by whole bins is exact
    idx = rng.integers(0, bins, 300)
    phase = (idx + rng.uniform(0.1, 0.9, 300)) * width
    amp = rng.uniform(0.1, 2, 300)
    rotated = np.mod(phase + k * width, TWO_PI)
    h1 = phase_amp_histogram(phase, amp, bins)
    h2 = phase_amp_histogram(rotated, amp, bins)
    np.testing.assert_allclose(np.roll(h1.probs, k), h2.probs, atol=1e-12)
    assert abs(modulation_index(h1).mi - modulation_index(h2).mi) < 1e-12


@pytest.mark.parametrize("bins", [2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 24, 30, 40, 60])
def test_bin_refinement_on_uniform_grid(bins):
    n = 120
    phase = (np.arange(n) + 0.5) * TWO_PI / n
    assert modulation_index(phase_amp_histogram(phase, np.ones(n), bins)).mi == pytest.approx(0, abs=1e-12)


def test_pipeline_constant_input_is_degenerate():
    x = TimeSeries(np.ones(600), 300.0)
    with pytest.raises(DegenerateInputError):
        mi_pipeline(x, BandSpec(0.1, 5), BandSpec(10, 75), 18)


def test_pipeline_am_coupling_detected():
    x = simulate(ScenarioConfig("am", strength=1.0, seed=0))
    v = mi_pipeline(x, BandSpec(0.1, 5), BandSpec(10, 75), 18)
    assert v.mi > critical_value(null_params(600, 18), 0.01)


def test_two_channel_variant():
    rng = np.random.default_rng(1)
    fs = 300.0
    t = np.arange(600) / fs
    slow = np.sin(TWO_PI * t)
    fast = (1 + np.sin(TWO_PI * t)) * np.sin(TWO_PI * 40 * t)
    x = TimeSeries(slow + 0.1 * rng.standard_normal(600), fs)
    y = TimeSeries(fast + 0.1 * rng.standard_normal(600), fs)
    coupled = mi_pipeline(x, BandSpec(0.1, 5), BandSpec(30, 50), 18, amp_source=y)
    alone = mi_pipeline(x, BandSpec(0.1, 5), BandSpec(30, 50), 18)
    assert coupled.mi > 5 * alone.mi


def test_two_channel_mismatch():
    x = TimeSeries(np.zeros(10) + 1, 100.0)
    with pytest.raises(InvalidArgumentError):
        mi_pipeline(x, BandSpec(1, 5), BandSpec(10, 20), 4, amp_source=TimeSeries(np.ones(11), 100.0))
    with pytest.raises(InvalidArgumentError):
        mi_pipeline(x, BandSpec(1, 5), BandSpec(10, 20), 4, amp_source=TimeSeries(np.ones(10), 50.0))


def test_raw_mi_of_independent_noise_is_small():
    rng = np.random.default_rng(2)
    x, y = rng.standard_normal((2, 5000))
    assert mi_raw(x, y, 18).mi < 0.002
