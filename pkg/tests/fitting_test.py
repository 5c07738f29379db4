"""Testing the decay and scaling fits."""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np
import pytest

from ctds_sat.fitting import (
    DegenerateWindow, InsufficientData, compare_decay_models,
    fit_eta_scaling, fit_exponential_decay, fit_rate_scaling, fit_step_powerlaw,
    survival_function)


def _power_samples(eta, v, size, seed):
    # inverse transform of p(n) = (v + n)**-eta with p(0) = 1 at v = 1
    u = np.random.default_rng(seed).uniform(size=size)
    return u ** (-1.0 / eta) - v


def test_survival_function():
    x, p = survival_function([1.0, 2.0, 2.0, None])
    assert list(x) == [1.0, 2.0]
    assert list(p) == [0.75, 0.25]
    x, p = survival_function([])
    assert len(x) == 0


def test_exponential_decay():
    samples = np.random.default_rng(1).exponential(1 / 0.7, size=10000)
    fit = fit_exponential_decay(samples)
    assert fit.lam == pytest.approx(0.7, rel=0.02)
    assert fit.r_squared > 0.99
    assert fit.num_samples == 10000
    assert fit.survival(0.0) == pytest.approx(fit.r)


def test_rate_scaling():
    sizes = [50, 100, 200, 400]
    fit = fit_rate_scaling([(n, 2 * n ** -1.5) for n in sizes])
    assert fit.beta == pytest.approx(1.5, abs=0.01)
    assert fit.b == pytest.approx(2.0)
    assert fit.window == (50.0, 400.0)
    expected = 100 ** 1.5 / 2.0 * np.log(1 / 0.1)
    assert fit.predict_time(0.1, 100) == pytest.approx(expected)


def test_eta_scaling():
    fit = fit_eta_scaling([(n, 3 * n ** -0.25) for n in (20, 40, 80)])
    assert fit.delta == pytest.approx(0.25)
    with pytest.raises(TypeError):
        fit.predict_time(0.1, 100)
    expected = np.exp(100 ** 0.25 / 3.0 * np.log(1 / 0.1))
    assert fit.predict_steps(0.1, 100) == pytest.approx(expected)
    assert fit.predict_steps(0.1, 100, u=1.0, v=2.0) == pytest.approx(expected - 2.0)
    # a lower target fraction costs more steps
    assert fit.predict_steps(0.01, 100) > fit.predict_steps(0.1, 100)
    rate = fit_rate_scaling([(n, n ** -1.0) for n in (20, 40, 80)])
    with pytest.raises(TypeError):
        rate.predict_steps(0.1, 100)


def test_step_powerlaw():
    samples = _power_samples(0.8, 1.0, 20000, 3)
    fit = fit_step_powerlaw(samples)
    assert fit.eta == pytest.approx(0.8, rel=0.1)
    assert fit.r_squared > 0.99


def test_compare_models():
    power = _power_samples(0.8, 1.0, 20000, 4)
    assert compare_decay_models(power)[2] == 'power'
    slow = np.random.default_rng(5).exponential(1e4, size=20000)
    exp_fit, _, winner = compare_decay_models(slow)
    assert winner == 'exponential'
    assert exp_fit.lam == pytest.approx(1e-4, rel=0.05)


def test_degenerate():
    with pytest.raises(DegenerateWindow):
        fit_exponential_decay([5.0] * 100)
    with pytest.raises(InsufficientData):
        fit_exponential_decay([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        fit_exponential_decay(range(100), window=(0.02, 0.5))


def test_single_size():
    with pytest.raises(InsufficientData):
        fit_rate_scaling([(100, 0.1), (100, 0.12)])
