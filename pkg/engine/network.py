"""
FAE Network - Encode, reparameterize, decode and the ELBO with exact gradients

Single windows are shaped (1, T) (or (T,)); mini-batches are (B, 1, T) with
latent vectors (B, J). Log-sigma heads are clamped to
[LOG_SIGMA_MIN, LOG_SIGMA_MAX] before exponentiation and their gradient is
zero outside that range.
"""
import math

import numpy as np

import config
from engine.layers import (
    dilated_causal_conv_forward, dilated_causal_conv_backward,
    relu_forward, relu_backward,
)
from models.latent import LatentSample
from utils.constants import (
    ENCODER_PREFIX, DECODER_PREFIX, ENC_MU_HEAD, ENC_LOGSIGMA_HEAD,
    DEC_MU_HEAD, DEC_LOGSIGMA_HEAD,
)
from utils.errors import ShapeError, NumericError

HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def _clamp_log_sigma(raw):
    return np.clip(raw, config.LOG_SIGMA_MIN, config.LOG_SIGMA_MAX)


def _clamp_mask(raw):
    return (raw >= config.LOG_SIGMA_MIN) & (raw <= config.LOG_SIGMA_MAX)


def _prepare_windows(model, x):
    """Return (batch of shape (B, 1, T), was_single)"""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim < 3
    if x.ndim == 1:
        x = x[np.newaxis, np.newaxis, :]
    elif x.ndim == 2:
        if x.shape[0] != 1:
            raise ShapeError(f"A single window must be shaped (1, T), got {x.shape}")
        x = x[np.newaxis]
    elif x.ndim != 3 or x.shape[1] != 1:
        raise ShapeError(f"A window batch must be shaped (B, 1, T), got {x.shape}")
    if x.shape[-1] != model.hyper.window:
        raise ShapeError(f"Window length {x.shape[-1]} does not match model T={model.hyper.window}")
    return x, single


def _prepare_latent(model, vector, name="z"):
    vector = np.asarray(vector, dtype=np.float64)
    single = vector.ndim == 1
    if single:
        vector = vector[np.newaxis]
    if vector.ndim != 2 or vector.shape[1] != model.hyper.latent_dim:
        raise ShapeError(f"{name} must have length J={model.hyper.latent_dim}, got shape {vector.shape}")
    return vector, single


# ==========================
# STACK PASSES
# ==========================

def _stack_forward(layers, h):
    inputs, pre_acts = [], []
    for layer in layers:
        pre = dilated_causal_conv_forward(h, layer)
        inputs.append(h)
        pre_acts.append(pre)
        h = relu_forward(pre)
    return h, {'inputs': inputs, 'pre': pre_acts, 'top': h}


def _stack_backward(layers, cache, grad, prefix, grads):
    for h in reversed(range(len(layers))):
        grad = relu_backward(grad, cache['pre'][h])
        grad, grads[f"{prefix}.{h}"] = dilated_causal_conv_backward(grad, cache['inputs'][h], layers[h])
    return grad


def _encoder_pass(model, x):
    top, cache = _stack_forward(model.encoder_layers, x)
    mu_full = dilated_causal_conv_forward(top, model.enc_mu_head)
    raw_full = dilated_causal_conv_forward(top, model.enc_logsigma_head)
    return mu_full[..., -1], raw_full[..., -1], cache


def _decoder_pass(model, z):
    repeated = np.repeat(z[:, :, np.newaxis], model.hyper.window, axis=2)
    top, cache = _stack_forward(model.decoder_layers, repeated)
    mu_x = dilated_causal_conv_forward(top, model.dec_mu_head)
    raw = dilated_causal_conv_forward(top, model.dec_logsigma_head)
    return mu_x, raw, cache


# ==========================
# PUBLIC OPERATIONS
# ==========================

def encode(model, x):
    """(mu_z, logsigma_z) read at time T-1 of the latent heads"""
    x, single = _prepare_windows(model, x)
    mu_z, raw, _ = _encoder_pass(model, x)
    logsigma_z = _clamp_log_sigma(raw)
    if single:
        return mu_z[0], logsigma_z[0]
    return mu_z, logsigma_z


def reparameterize(mu_z, logsigma_z, epsilon):
    mu_z = np.asarray(mu_z, dtype=np.float64)
    logsigma_z = np.asarray(logsigma_z, dtype=np.float64)
    epsilon = np.asarray(epsilon, dtype=np.float64)
    if not (mu_z.shape == logsigma_z.shape == epsilon.shape):
        raise ShapeError(f"Latent shapes differ: mu {mu_z.shape}, logsigma {logsigma_z.shape}, "
                         f"epsilon {epsilon.shape}")
    z = mu_z + np.exp(logsigma_z) * epsilon
    return LatentSample(mu_z, logsigma_z, epsilon, z)


def decode(model, z):
    """(mu_x, sigma_x), each (1, T) for one latent vector or (B, 1, T) for a batch"""
    z, single = _prepare_latent(model, z)
    mu_x, raw, _ = _decoder_pass(model, z)
    sigma_x = np.exp(_clamp_log_sigma(raw))
    if single:
        return mu_x[0], sigma_x[0]
    return mu_x, sigma_x


def reconstruct(model, x):
    """Deterministic (epsilon = 0) reconstruction of a window or batch"""
    mu_z, _ = encode(model, x)
    return decode(model, mu_z)


def elbo_terms(x, mu_x, sigma_x, mu_z, logsigma_z, beta=config.DEFAULT_BETA):
    """(nll, kl, loss) summed over every supplied element"""
    x = np.asarray(x, dtype=np.float64)
    mu_x = np.asarray(mu_x, dtype=np.float64)
    sigma_x = np.asarray(sigma_x, dtype=np.float64)
    mu_z = np.asarray(mu_z, dtype=np.float64)
    logsigma_z = np.asarray(logsigma_z, dtype=np.float64)
    if not (x.shape == mu_x.shape == sigma_x.shape):
        raise ShapeError(f"x {x.shape}, mu_x {mu_x.shape} and sigma_x {sigma_x.shape} must match")
    if mu_z.shape != logsigma_z.shape:
        raise ShapeError(f"mu_z {mu_z.shape} and logsigma_z {logsigma_z.shape} must match")
    if np.any(sigma_x <= 0.0):
        raise NumericError("sigma_x must be strictly positive")

    nll = float(np.sum(0.5 * np.log(2.0 * np.pi * sigma_x ** 2) + (x - mu_x) ** 2 / (2.0 * sigma_x ** 2)))
    kl = float(0.5 * np.sum(mu_z ** 2 + np.exp(2.0 * logsigma_z) - 1.0 - 2.0 * logsigma_z))
    return nll, kl, nll + beta * kl


def window_losses(model, x, epsilon=None, beta=None):
    """Per-window loss for a batch (epsilon defaults to zero)"""
    loss_per, _ = _forward(model, x, epsilon, beta)
    return loss_per


def _forward(model, x, epsilon, beta):
    x, _ = _prepare_windows(model, x)
    beta = model.hyper.beta if beta is None else float(beta)
    if epsilon is None:
        epsilon = np.zeros((x.shape[0], model.hyper.latent_dim))
    epsilon, _ = _prepare_latent(model, epsilon, "epsilon")
    if epsilon.shape[0] != x.shape[0]:
        raise ShapeError(f"{epsilon.shape[0]} epsilon draws for {x.shape[0]} windows")

    mu_z, raw_z, enc_cache = _encoder_pass(model, x)
    ls_z = _clamp_log_sigma(raw_z)
    sigma_z = np.exp(ls_z)
    z = mu_z + sigma_z * epsilon
    mu_x, raw_x, dec_cache = _decoder_pass(model, z)
    ls_x = _clamp_log_sigma(raw_x)
    var_x = np.exp(2.0 * ls_x)
    resid = x - mu_x

    nll_per = (HALF_LOG_TWO_PI + ls_x + resid ** 2 / (2.0 * var_x)).sum(axis=(1, 2))
    kl_per = 0.5 * (mu_z ** 2 + sigma_z ** 2 - 1.0 - 2.0 * ls_z).sum(axis=1)
    loss_per = nll_per + beta * kl_per

    state = {
        'x': x, 'epsilon': epsilon, 'beta': beta,
        'mu_z': mu_z, 'raw_z': raw_z, 'ls_z': ls_z, 'sigma_z': sigma_z,
        'raw_x': raw_x, 'var_x': var_x, 'resid': resid,
        'enc_cache': enc_cache, 'dec_cache': dec_cache,
    }
    return loss_per, state


def forward_backward(model, x, epsilon, beta=None):
    """
    Loss (mean over the batch) and its exact gradient with epsilon held fixed.

    Returns (loss, grads) where grads maps each layer name to an array shaped
    like that layer's weights.
    """
    loss_per, s = _forward(model, x, epsilon, beta)
    loss = float(loss_per.mean())
    if not np.isfinite(loss):
        raise NumericError(f"Non-finite loss {loss}")

    batch = s['x'].shape[0]
    scale = 1.0 / batch
    grads = {}

    # Decoder side
    g_mu_x = -s['resid'] / s['var_x'] * scale
    g_raw_x = (1.0 - s['resid'] ** 2 / s['var_x']) * scale * _clamp_mask(s['raw_x'])
    dec_top = s['dec_cache']['top']
    g_top_mu, grads[DEC_MU_HEAD] = dilated_causal_conv_backward(g_mu_x, dec_top, model.dec_mu_head)
    g_top_ls, grads[DEC_LOGSIGMA_HEAD] = dilated_causal_conv_backward(g_raw_x, dec_top, model.dec_logsigma_head)
    g_repeated = _stack_backward(model.decoder_layers, s['dec_cache'], g_top_mu + g_top_ls, DECODER_PREFIX, grads)
    g_z = g_repeated.sum(axis=2)

    # Latent heads
    beta = s['beta']
    g_mu_z = beta * s['mu_z'] * scale + g_z
    g_raw_z = (beta * (s['sigma_z'] ** 2 - 1.0) * scale + g_z * s['sigma_z'] * s['epsilon']) * _clamp_mask(s['raw_z'])

    window = model.hyper.window
    g_mu_full = np.zeros((batch, model.hyper.latent_dim, window))
    g_raw_full = np.zeros_like(g_mu_full)
    g_mu_full[..., -1] = g_mu_z
    g_raw_full[..., -1] = g_raw_z
    enc_top = s['enc_cache']['top']
    g_top_mu, grads[ENC_MU_HEAD] = dilated_causal_conv_backward(g_mu_full, enc_top, model.enc_mu_head)
    g_top_ls, grads[ENC_LOGSIGMA_HEAD] = dilated_causal_conv_backward(g_raw_full, enc_top, model.enc_logsigma_head)
    _stack_backward(model.encoder_layers, s['enc_cache'], g_top_mu + g_top_ls, ENCODER_PREFIX, grads)

    return loss, {name: grads[name] for name in model.params}


def encoder_activations(model, x):
    """Post-rectifier activations of every encoder layer, for causality checks"""
    x, _ = _prepare_windows(model, x)
    _, cache = _stack_forward(model.encoder_layers, x)
    return [relu_forward(pre) for pre in cache['pre']]


def preactivation_margin(model, x, epsilon=None):
    """Smallest nonzero |pre-activation| over encoder and decoder stacks"""
    _, s = _forward(model, x, epsilon, None)
    margins = []
    for pre in s['enc_cache']['pre'] + s['dec_cache']['pre']:
        nonzero = np.abs(pre[pre != 0.0])
        if nonzero.size:
            margins.append(nonzero.min())
    return float(min(margins)) if margins else math.inf
