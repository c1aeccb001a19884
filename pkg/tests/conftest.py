"""
Shared fixtures: toy architectures, seeded series and model builders
"""
import numpy as np
import pytest

from models.fae_model import FaeModel
from models.hyperparams import FaeHyperparams
from models.normalizer import Normalizer
from models.series import SeriesRecord
from services.synth_service import SeriesComponents, synth_service


def brute_force_conv(x, weights, dilation):
    """Triple-loop causal dilated convolution of one (C_in, T) input"""
    c_out, c_in, kernel = weights.shape
    length = x.shape[-1]
    out = np.zeros((c_out, length))
    for c in range(c_out):
        for t in range(length):
            total = 0.0
            for cp in range(c_in):
                for k in range(kernel):
                    source = t - (kernel - 1 - k) * dilation
                    if source >= 0:
                        total += weights[c, cp, k] * x[cp, source]
            out[c, t] = total
    return out


@pytest.fixture
def conv_oracle():
    return brute_force_conv


@pytest.fixture
def toy_hyper():
    return FaeHyperparams(window=16, latent_dim=2, filters=4, kernel=2, learning_rate=5e-3, batch_size=16)


@pytest.fixture
def toy_model(toy_hyper):
    return FaeModel.build(toy_hyper, seed=0)


@pytest.fixture
def zero_model(toy_hyper):
    return FaeModel.zeros(toy_hyper)


@pytest.fixture
def sine_series():
    t = np.arange(200)
    return SeriesRecord("sine", np.sin(2.0 * np.pi * t / 16.0), timestamps=300 * t)


@pytest.fixture
def noisy_pair():
    """Two seeded seasonal series with different shapes"""
    first = synth_service.synth_generate(SeriesComponents(period=16, noise_std=0.05), 240, seed=1,
                                         series_id="a")
    second = synth_service.synth_generate(SeriesComponents(period=16, amplitude=2.0, level=3.0, noise_std=0.05),
                                          240, seed=2, series_id="b")
    return [first, second]


@pytest.fixture
def unit_zero_model(zero_model):
    """mu = 0 and sigma = 1 everywhere, identity normalizer for series 's'"""
    return zero_model.with_normalizer(Normalizer.unit(["s"]))
