"""Optimizer tests: sharp-limit optima, determinism, monotone degradation."""

import math

import numpy as np
import pytest

from fuzzycorr import (
    CoarseningParams,
    Correlator,
    OptimizerConfig,
    StateSpec,
    bell_spec,
    evaluate,
    maximize,
    maximize_profile,
    steering_spec,
)
from fuzzycorr.witness import AngleAssignment
from grid_oracle import chsh_grid_max, steering_grid_max

SHARP = Correlator(StateSpec(5, p=1.0), CoarseningParams())
FAST = OptimizerConfig(restarts=8)


class ScaledCorrelator:
    """A correlator multiplied by a constant factor."""

    def __init__(self, inner, scale):
        self.inner = inner
        self.scale = scale

    def matrix(self, alice, bob):
        return self.scale * self.inner.matrix(alice, bob)

    def diagonal(self, alice, bob):
        return self.scale * self.inner.diagonal(alice, bob)

    def __call__(self, a, b):
        return self.scale * self.inner(a, b)


def test_chsh_sharp_optimum_vs_grid_oracle():
    result = maximize(bell_spec(2), SHARP, FAST)
    assert result.value == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-6)
    # the pi/720 grid search cannot beat the continuous optimum, and must
    # get within its own resolution of it
    grid = chsh_grid_max()
    assert grid <= result.value + 1e-6
    assert grid == pytest.approx(result.value, abs=1e-3)


def test_steering_sharp_optima_vs_grid_oracle():
    for m in (2, 3, 4, 5):
        result = maximize(steering_spec(m), SHARP, FAST)
        assert result.value == pytest.approx(math.sqrt(m), abs=1e-6)
        assert steering_grid_max(m) <= result.value + 1e-6


def test_scaled_correlator_halves_value():
    # Werner p = 0.5 at zero coarsening is exactly the halved correlator
    corr = Correlator(StateSpec(5, p=0.5), CoarseningParams())
    result = maximize(bell_spec(2), corr, FAST)
    assert result.value == pytest.approx(math.sqrt(2.0), abs=1e-6)


def test_result_value_consistent_with_angles():
    spec = bell_spec(2)
    result = maximize(spec, SHARP, FAST)
    assert evaluate(spec, result.angles, SHARP) == pytest.approx(result.value, abs=1e-8)


def test_determinism_bit_exact():
    spec = bell_spec(3)
    corr = Correlator(StateSpec(5, p=0.9), CoarseningParams(delta=1.5, Delta=0.1))
    config = OptimizerConfig(restarts=10, seed=123)
    a = maximize(spec, corr, config)
    b = maximize(spec, corr, config)
    assert a.value == b.value
    np.testing.assert_array_equal(a.angles.alice, b.angles.alice)
    np.testing.assert_array_equal(a.angles.bob, b.angles.bob)
    assert a.restart_index == b.restart_index and a.iterations == b.iterations


def test_local_maximum_certificate():
    spec = bell_spec(2)
    corr = Correlator(StateSpec(5, p=1.0), CoarseningParams(delta=2.0))
    result = maximize(spec, corr, FAST)
    x = np.concatenate([result.angles.alice, result.angles.bob])
    for i in range(len(x)):
        for step in (1e-4, -1e-4):
            y = x.copy()
            y[i] += step
            perturbed = evaluate(
                spec, AngleAssignment(alice=y[:2], bob=y[2:]), corr
            )
            assert perturbed <= result.value + 1e-9


def test_scaling_covariance():
    spec = bell_spec(2)
    base = maximize(spec, SHARP, FAST)
    for s in (0.25, 0.6, 1.0):
        scaled = maximize(spec, ScaledCorrelator(SHARP, s), FAST)
        assert scaled.value == pytest.approx(s * base.value, abs=1e-6)
        # the scaled argmax is optimal for the unscaled problem too
        assert evaluate(spec, scaled.angles, SHARP) == pytest.approx(
            base.value, abs=1e-5
        )


def test_profile_single_point_matches_maximize():
    spec = bell_spec(2)
    single = maximize_profile(spec, [SHARP], FAST)
    assert len(single) == 1
    assert single[0].value == maximize(spec, SHARP, FAST).value


def test_profile_constant_family():
    spec = steering_spec(2)
    results = maximize_profile(spec, [SHARP, SHARP, SHARP], FAST)
    values = [r.value for r in results]
    assert max(values) - min(values) < 1e-9


def test_profile_monotone_degradation_in_delta():
    spec = bell_spec(2)
    state = StateSpec(5, p=1.0)
    grid = np.linspace(0.0, 12.0, 13)
    correlators = [
        Correlator(state, CoarseningParams(delta=math.sqrt(v))) for v in grid
    ]
    results = maximize_profile(spec, correlators, FAST)
    values = [r.value for r in results]
    for prev, cur in zip(values, values[1:]):
        assert cur <= prev + 1e-4
    # spot-check the warm-swept values against cold starts
    for idx in (0, 6, 12):
        cold = maximize(spec, correlators[idx], FAST)
        assert values[idx] == pytest.approx(cold.value, abs=1e-6)


def test_profile_monotone_degradation_in_Delta():
    spec = steering_spec(2)
    state = StateSpec(5, p=1.0)
    grid = np.linspace(0.0, 0.5, 11)
    correlators = [
        Correlator(state, CoarseningParams(Delta=math.sqrt(v))) for v in grid
    ]
    values = [r.value for r in maximize_profile(spec, correlators, FAST)]
    for prev, cur in zip(values, values[1:]):
        assert cur <= prev + 1e-4


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=0)
    with pytest.raises(ValueError):
        OptimizerConfig(tolerance=0.0)
