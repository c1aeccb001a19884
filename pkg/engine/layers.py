"""
Layer Kernels - Forward/backward passes of the dilated causal convolution and rectifier

Tensors are float64 numpy arrays shaped (channels, time), optionally with a
leading batch axis (batch, channels, time). Every function is pure.
"""
import numpy as np

from utils.constants import RELU_FORWARD, RELU_BACKWARD
from utils.errors import ShapeError


class ConvParams:
    """Bias-free convolution weights shaped (out_channels, in_channels, kernel)"""

    def __init__(self, weights, dilation=1):
        weights = np.asarray(weights, dtype=np.float64)
        if weights.ndim != 3 or 0 in weights.shape:
            raise ShapeError(f"Convolution weights must be a non-empty 3-D array, got shape {weights.shape}")
        if int(dilation) < 1:
            raise ShapeError(f"Dilation must be a positive integer, got {dilation}")
        self.weights = weights
        self.dilation = int(dilation)

    @property
    def out_channels(self):
        return self.weights.shape[0]

    @property
    def in_channels(self):
        return self.weights.shape[1]

    @property
    def kernel(self):
        return self.weights.shape[2]

    @property
    def size(self):
        return self.weights.size

    def with_weights(self, weights):
        """Copy of these params holding new weights of the same shape"""
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != self.weights.shape:
            raise ShapeError(f"Expected weights of shape {self.weights.shape}, got {weights.shape}")
        return ConvParams(weights, self.dilation)

    def tap_shift(self, k):
        """Delay (in samples) applied to the input by tap k"""
        return (self.kernel - 1 - k) * self.dilation

    def to_dict(self):
        return {
            'out_channels': self.out_channels,
            'in_channels': self.in_channels,
            'kernel': self.kernel,
            'dilation': self.dilation,
        }

    def __repr__(self):
        return (f"<ConvParams(out={self.out_channels}, in={self.in_channels}, "
                f"kernel={self.kernel}, dilation={self.dilation})>")


def check_tensor2(x, name="input"):
    """Coerce to float64 and verify a (C, T) or (B, C, T) layout"""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim not in (2, 3):
        raise ShapeError(f"{name} must be shaped (C, T) or (B, C, T), got {x.shape}")
    if x.shape[-1] == 0 or x.shape[-2] == 0:
        raise ShapeError(f"{name} has an empty channel or time axis: {x.shape}")
    return x


def shift_right(x, shift):
    """Delay along time by `shift` samples, zero-filling the left edge"""
    if shift == 0:
        return x
    out = np.zeros_like(x)
    if shift < x.shape[-1]:
        out[..., shift:] = x[..., :-shift]
    return out


def shift_left(x, shift):
    """Advance along time by `shift` samples, zero-filling the right edge"""
    if shift == 0:
        return x
    out = np.zeros_like(x)
    if shift < x.shape[-1]:
        out[..., :-shift] = x[..., shift:]
    return out


def receptive_field(kernel, dilations):
    """Number of input samples seen by one output of a conv stack"""
    return 1 + sum((kernel - 1) * d for d in dilations)


def dilated_causal_conv_forward(x, params):
    """
    Causal dilated convolution with implicit left zero-padding of (F-1)*d.

    output[c, t] = sum_{c', k} w[c, c', k] * x[c', t - (F-1-k)*d]
    """
    x = check_tensor2(x)
    if x.shape[-2] != params.in_channels:
        raise ShapeError(f"Input has {x.shape[-2]} channels, layer expects {params.in_channels}")

    out = None
    for k in range(params.kernel):
        term = params.weights[:, :, k] @ shift_right(x, params.tap_shift(k))
        out = term if out is None else out + term
    return out


def dilated_causal_conv_backward(grad_output, cached_input, params):
    """
    Adjoint of the forward map.

    Returns (grad_input, grad_weights); weight gradients are summed over the
    batch axis in array order.
    """
    grad_output = check_tensor2(grad_output, "grad_output")
    cached_input = check_tensor2(cached_input, "cached_input")
    if cached_input.shape[-2] != params.in_channels:
        raise ShapeError(f"Cached input has {cached_input.shape[-2]} channels, layer expects {params.in_channels}")
    if grad_output.shape[-2] != params.out_channels:
        raise ShapeError(f"grad_output has {grad_output.shape[-2]} channels, layer produces {params.out_channels}")
    if grad_output.shape[-1] != cached_input.shape[-1] or grad_output.ndim != cached_input.ndim:
        raise ShapeError(f"grad_output {grad_output.shape} does not match cached input {cached_input.shape}")
    if grad_output.ndim == 3 and grad_output.shape[0] != cached_input.shape[0]:
        raise ShapeError("Batch sizes of grad_output and cached input differ")

    grad_input = np.zeros_like(cached_input)
    grad_weights = np.zeros_like(params.weights)
    for k in range(params.kernel):
        shift = params.tap_shift(k)
        w_k = params.weights[:, :, k]
        grad_input += shift_left(w_k.T @ grad_output, shift)
        contribution = grad_output @ np.swapaxes(shift_right(cached_input, shift), -1, -2)
        if contribution.ndim == 3:
            contribution = contribution.sum(axis=0)
        grad_weights[:, :, k] = contribution
    return grad_input, grad_weights


def relu_forward(x):
    return np.maximum(x, 0.0)


def relu_backward(grad, cached_input):
    """Pass gradient where the cached pre-activation is strictly positive"""
    grad = np.asarray(grad, dtype=np.float64)
    cached_input = np.asarray(cached_input, dtype=np.float64)
    if grad.shape != cached_input.shape:
        raise ShapeError(f"Gradient shape {grad.shape} does not match cached input {cached_input.shape}")
    return np.where(cached_input > 0.0, grad, 0.0)


def relu_pointwise(x, mode=RELU_FORWARD, grad=None):
    """Rectifier in either direction; backward mode treats `x` as the cached input"""
    if mode == RELU_FORWARD:
        return relu_forward(np.asarray(x, dtype=np.float64))
    if mode == RELU_BACKWARD:
        if grad is None:
            raise ShapeError("Backward mode requires a gradient")
        return relu_backward(grad, x)
    raise ValueError(f"Unknown relu mode: {mode}")
