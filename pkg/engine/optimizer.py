"""
Optimizer - Adam with bias correction over named weight arrays
"""
import numpy as np

import config
from utils.errors import ShapeError


class OptimizerState:
    """First/second moment accumulators in model layout plus a step counter"""

    def __init__(self, first_moment, second_moment, step=0):
        self.first_moment = first_moment
        self.second_moment = second_moment
        self.step = step

    @classmethod
    def for_weights(cls, weights):
        return cls(
            {name: np.zeros_like(w) for name, w in weights.items()},
            {name: np.zeros_like(w) for name, w in weights.items()},
            0,
        )

    def __repr__(self):
        return f"<OptimizerState(step={self.step}, arrays={len(self.first_moment)})>"


def adam_step(weights, grads, state, gamma,
              beta1=config.ADAM_BETA1, beta2=config.ADAM_BETA2, eps=config.ADAM_EPSILON):
    """Return (new_weights, new_state); inputs are left untouched"""
    if list(weights) != list(grads) or list(weights) != list(state.first_moment):
        raise ShapeError("Weights, gradients and optimizer state must share one layout")

    step = state.step + 1
    correction1 = 1.0 - beta1 ** step
    correction2 = 1.0 - beta2 ** step
    new_weights, first, second = {}, {}, {}
    for name, w in weights.items():
        g = grads[name]
        if g.shape != w.shape or state.first_moment[name].shape != w.shape:
            raise ShapeError(f"Shape mismatch for {name}: weights {w.shape}, grads {g.shape}")
        m = beta1 * state.first_moment[name] + (1.0 - beta1) * g
        v = beta2 * state.second_moment[name] + (1.0 - beta2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        new_weights[name] = w - gamma * m_hat / (np.sqrt(v_hat) + eps)
        first[name] = m
        second[name] = v
    return new_weights, OptimizerState(first, second, step)
