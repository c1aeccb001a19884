"""
Tests for the Adam update
"""
import numpy as np
import pytest

from engine.network import forward_backward
from engine.optimizer import OptimizerState, adam_step
from utils.errors import ShapeError


def _weights():
    return {'a': np.array([[[0.5, -0.25]]]), 'b': np.array([[[1.0]], [[2.0]]])}


class TestAdamStep:

    def test_zero_gradient_keeps_weights(self):
        weights = _weights()
        grads = {name: np.zeros_like(w) for name, w in weights.items()}
        new_weights, state = adam_step(weights, grads, OptimizerState.for_weights(weights), 1e-3)
        for name in weights:
            np.testing.assert_array_equal(new_weights[name], weights[name])
        assert state.step == 1

    def test_first_step_moves_by_gamma(self):
        weights = {'w': np.zeros((1, 1, 1))}
        grads = {'w': np.full((1, 1, 1), 3.0)}
        new_weights, state = adam_step(weights, grads, OptimizerState.for_weights(weights), 0.001)
        assert new_weights['w'][0, 0, 0] == pytest.approx(-0.001 * 3.0 / (3.0 + 1e-8), rel=1e-12)
        assert new_weights['w'][0, 0, 0] == pytest.approx(-0.001, rel=1e-6)
        assert state.first_moment['w'][0, 0, 0] == pytest.approx(0.3)
        assert state.second_moment['w'][0, 0, 0] == pytest.approx(0.009)

    def test_deterministic(self):
        weights = _weights()
        rng = np.random.default_rng(0)
        grads = {name: rng.standard_normal(w.shape) for name, w in weights.items()}
        runs = []
        for _ in range(2):
            state = OptimizerState.for_weights(weights)
            current = weights
            for _ in range(3):
                current, state = adam_step(current, grads, state, 0.01)
            runs.append((current, state))
        for name in weights:
            assert runs[0][0][name].tobytes() == runs[1][0][name].tobytes()
            assert runs[0][1].second_moment[name].tobytes() == runs[1][1].second_moment[name].tobytes()

    def test_inputs_untouched(self):
        weights = _weights()
        before = {name: w.copy() for name, w in weights.items()}
        grads = {name: np.ones_like(w) for name, w in weights.items()}
        state = OptimizerState.for_weights(weights)
        adam_step(weights, grads, state, 0.1)
        for name in weights:
            np.testing.assert_array_equal(weights[name], before[name])
            assert not state.first_moment[name].any()
        assert state.step == 0

    def test_shape_mismatch(self):
        weights = _weights()
        grads = {'a': np.zeros((1, 1, 3)), 'b': np.zeros((2, 1, 1))}
        with pytest.raises(ShapeError):
            adam_step(weights, grads, OptimizerState.for_weights(weights), 0.1)

    def test_single_step_descends(self, toy_model):
        t = np.arange(16)
        batch = np.stack([np.sin(2 * np.pi * (t + s) / 8.0)[np.newaxis] for s in range(4)])
        epsilon = np.random.default_rng(1).standard_normal((4, 2))
        loss, grads = forward_backward(toy_model, batch, epsilon)
        assert np.sqrt(sum(np.sum(g ** 2) for g in grads.values())) > 1e-6
        weights, _ = adam_step(toy_model.weights(), grads, OptimizerState.for_weights(toy_model.weights()), 1e-4)
        after, _ = forward_backward(toy_model.with_weights(weights), batch, epsilon)
        assert after < loss
