"""
Tests for the dilated causal convolution and rectifier kernels
"""
import numpy as np
import pytest

from engine.layers import (
    ConvParams, dilated_causal_conv_forward, dilated_causal_conv_backward,
    relu_pointwise, relu_forward, receptive_field,
)
from utils.constants import RELU_BACKWARD
from utils.errors import ShapeError


def _random_params(rng, c_out, c_in, kernel, dilation):
    return ConvParams(rng.standard_normal((c_out, c_in, kernel)), dilation)


class TestConvForward:

    def test_identity_kernel(self):
        params = ConvParams(np.eye(3)[:, :, np.newaxis], 1)
        x = np.random.default_rng(0).standard_normal((3, 9))
        np.testing.assert_array_equal(dilated_causal_conv_forward(x, params), x)

    def test_older_tap_is_pure_delay(self):
        params = ConvParams(np.array([[[1.0, 0.0]]]), 3)
        x = np.array([[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]])
        np.testing.assert_array_equal(dilated_causal_conv_forward(x, params), [[0, 0, 0, 1, 2, 3]])

    def test_matches_triple_loop_oracle(self, conv_oracle):
        rng = np.random.default_rng(1)
        params = _random_params(rng, 3, 2, 2, 2)
        x = rng.standard_normal((2, 7))
        np.testing.assert_allclose(dilated_causal_conv_forward(x, params),
                                   conv_oracle(x, params.weights, 2), rtol=0, atol=1e-12)

    @pytest.mark.parametrize("kernel,dilation,length", [(2, 1, 5), (3, 3, 11), (4, 2, 9), (2, 8, 6)])
    def test_oracle_across_geometries(self, conv_oracle, kernel, dilation, length):
        rng = np.random.default_rng(kernel * 100 + dilation)
        params = _random_params(rng, 2, 3, kernel, dilation)
        x = rng.standard_normal((3, length))
        np.testing.assert_allclose(dilated_causal_conv_forward(x, params),
                                   conv_oracle(x, params.weights, dilation), rtol=0, atol=1e-12)

    def test_batched_input_matches_per_item(self):
        rng = np.random.default_rng(2)
        params = _random_params(rng, 4, 2, 2, 4)
        batch = rng.standard_normal((5, 2, 12))
        out = dilated_causal_conv_forward(batch, params)
        for b in range(5):
            np.testing.assert_array_equal(out[b], dilated_causal_conv_forward(batch[b], params))

    def test_causality_is_exact(self):
        rng = np.random.default_rng(3)
        params = _random_params(rng, 2, 2, 3, 2)
        x = rng.standard_normal((2, 10))
        base = dilated_causal_conv_forward(x, params)
        for t_prime in range(10):
            perturbed = x.copy()
            perturbed[:, t_prime] += 1.0
            out = dilated_causal_conv_forward(perturbed, params)
            np.testing.assert_array_equal(out[:, :t_prime], base[:, :t_prime])

    def test_linearity(self):
        rng = np.random.default_rng(4)
        params = _random_params(rng, 3, 2, 2, 2)
        x, y = rng.standard_normal((2, 2, 8))
        lhs = dilated_causal_conv_forward(2.5 * x - 0.5 * y, params)
        rhs = 2.5 * dilated_causal_conv_forward(x, params) - 0.5 * dilated_causal_conv_forward(y, params)
        np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-12)

    def test_determinism(self):
        rng = np.random.default_rng(5)
        params = _random_params(rng, 3, 2, 2, 2)
        x = rng.standard_normal((2, 8))
        assert dilated_causal_conv_forward(x, params).tobytes() == dilated_causal_conv_forward(x, params).tobytes()

    def test_channel_mismatch(self):
        params = ConvParams(np.ones((2, 3, 2)), 1)
        with pytest.raises(ShapeError):
            dilated_causal_conv_forward(np.ones((2, 5)), params)

    def test_zero_length_input(self):
        params = ConvParams(np.ones((1, 1, 2)), 1)
        with pytest.raises(ShapeError):
            dilated_causal_conv_forward(np.ones((1, 0)), params)

    def test_receptive_field(self):
        assert receptive_field(2, [1, 2, 4, 8]) == 16
        assert receptive_field(3, [1, 3]) == 9


class TestConvBackward:

    def test_zero_gradient(self):
        rng = np.random.default_rng(6)
        params = _random_params(rng, 2, 3, 2, 2)
        x = rng.standard_normal((3, 6))
        grad_input, grad_weights = dilated_causal_conv_backward(np.zeros((2, 6)), x, params)
        assert not grad_input.any()
        assert not grad_weights.any()

    def test_identity_kernel_passes_gradient(self):
        params = ConvParams(np.eye(2)[:, :, np.newaxis], 1)
        g = np.random.default_rng(7).standard_normal((2, 5))
        grad_input, _ = dilated_causal_conv_backward(g, np.ones((2, 5)), params)
        np.testing.assert_array_equal(grad_input, g)

    def test_adjoint_identity(self):
        rng = np.random.default_rng(8)
        params = _random_params(rng, 3, 2, 3, 2)
        x = rng.standard_normal((2, 11))
        g = rng.standard_normal((3, 11))
        grad_input, _ = dilated_causal_conv_backward(g, x, params)
        lhs = np.sum(g * dilated_causal_conv_forward(x, params))
        np.testing.assert_allclose(lhs, np.sum(grad_input * x), rtol=0, atol=1e-10)

    def test_finite_differences(self):
        """Loss = sum(output**2) / 2 on C_in=C_out=2, F=2, d=2, T=6"""
        rng = np.random.default_rng(9)
        params = _random_params(rng, 2, 2, 2, 2)
        x = rng.standard_normal((2, 6))
        h = 1e-6

        def loss(inp, weights):
            return 0.5 * np.sum(dilated_causal_conv_forward(inp, params.with_weights(weights)) ** 2)

        out = dilated_causal_conv_forward(x, params)
        grad_input, grad_weights = dilated_causal_conv_backward(out, x, params)

        numeric_input = np.zeros_like(x)
        for idx in np.ndindex(x.shape):
            up, down = x.copy(), x.copy()
            up[idx] += h
            down[idx] -= h
            numeric_input[idx] = (loss(up, params.weights) - loss(down, params.weights)) / (2 * h)
        numeric_weights = np.zeros_like(params.weights)
        for idx in np.ndindex(params.weights.shape):
            up, down = params.weights.copy(), params.weights.copy()
            up[idx] += h
            down[idx] -= h
            numeric_weights[idx] = (loss(x, up) - loss(x, down)) / (2 * h)

        np.testing.assert_allclose(grad_input, numeric_input, rtol=1e-6, atol=1e-9)
        np.testing.assert_allclose(grad_weights, numeric_weights, rtol=1e-6, atol=1e-9)

    def test_batched_weight_gradient_is_sum(self):
        rng = np.random.default_rng(10)
        params = _random_params(rng, 2, 2, 2, 1)
        x = rng.standard_normal((3, 2, 5))
        g = rng.standard_normal((3, 2, 5))
        _, batched = dilated_causal_conv_backward(g, x, params)
        summed = sum(dilated_causal_conv_backward(g[b], x[b], params)[1] for b in range(3))
        np.testing.assert_allclose(batched, summed, rtol=0, atol=1e-12)

    def test_shape_mismatch(self):
        params = ConvParams(np.ones((2, 2, 2)), 1)
        with pytest.raises(ShapeError):
            dilated_causal_conv_backward(np.ones((2, 4)), np.ones((2, 5)), params)


class TestRelu:

    def test_forward(self):
        np.testing.assert_array_equal(relu_pointwise(np.array([-1.0, 0.0, 2.0])), [0, 0, 2])

    def test_backward_subgradient_at_zero(self):
        out = relu_pointwise(np.array([-1.0, 0.0, 2.0]), RELU_BACKWARD, np.array([5.0, 5.0, 5.0]))
        np.testing.assert_array_equal(out, [0, 0, 5])

    def test_backward_shape_mismatch(self):
        with pytest.raises(ShapeError):
            relu_pointwise(np.zeros(3), RELU_BACKWARD, np.zeros(4))

    def test_composite_conv_relu_finite_differences(self):
        rng = np.random.default_rng(11)
        params = _random_params(rng, 3, 2, 2, 1)
        x = rng.standard_normal((2, 8))
        pre = dilated_causal_conv_forward(x, params)
        assert np.min(np.abs(pre[pre != 0])) > 1e-4
        h = 1e-6

        def loss(weights):
            return 0.5 * np.sum(relu_forward(dilated_causal_conv_forward(x, params.with_weights(weights))) ** 2)

        grad_pre = relu_pointwise(pre, RELU_BACKWARD, relu_forward(pre))
        _, grad_weights = dilated_causal_conv_backward(grad_pre, x, params)
        numeric = np.zeros_like(params.weights)
        for idx in np.ndindex(params.weights.shape):
            up, down = params.weights.copy(), params.weights.copy()
            up[idx] += h
            down[idx] -= h
            numeric[idx] = (loss(up) - loss(down)) / (2 * h)
        np.testing.assert_allclose(grad_weights, numeric, rtol=1e-6, atol=1e-9)
