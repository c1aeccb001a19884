"""
FAE Model - Parameter set of the dilated-convolution variational auto-encoder
"""
import logging

import numpy as np

from engine.layers import ConvParams
from models.hyperparams import FaeHyperparams
from models.normalizer import Normalizer
from utils.constants import (
    ENCODER_PREFIX, DECODER_PREFIX, ENC_MU_HEAD, ENC_LOGSIGMA_HEAD,
    DEC_MU_HEAD, DEC_LOGSIGMA_HEAD,
)
from utils.errors import ShapeError

logger = logging.getLogger(__name__)

LOGSIGMA_HEADS = (ENC_LOGSIGMA_HEAD, DEC_LOGSIGMA_HEAD)


def layer_shapes(hyper):
    """Ordered (name, (out, in, kernel), dilation) for every weight array"""
    U, J, F, N = hyper.filters, hyper.latent_dim, hyper.kernel, hyper.depth
    shapes = []
    for h, dilation in enumerate(hyper.encoder_dilations()):
        shapes.append((f"{ENCODER_PREFIX}.{h}", (U, 1 if h == 0 else U, F), dilation))
    shapes.append((ENC_MU_HEAD, (J, U, 1), 1))
    shapes.append((ENC_LOGSIGMA_HEAD, (J, U, 1), 1))
    for h, dilation in enumerate(hyper.decoder_dilations()):
        shapes.append((f"{DECODER_PREFIX}.{h}", (U, J if h == 0 else U, F), dilation))
    shapes.append((DEC_MU_HEAD, (1, U, 1), 1))
    shapes.append((DEC_LOGSIGMA_HEAD, (1, U, 1), 1))
    return shapes


class FaeModel:
    """Encoder stack, latent heads, mirrored decoder stack, output heads and normalizers"""

    def __init__(self, hyper, params, normalizer=None):
        expected = layer_shapes(hyper)
        if [name for name, _, _ in expected] != list(params):
            raise ShapeError("Parameter names do not follow the model layout")
        for name, shape, dilation in expected:
            layer = params[name]
            if layer.weights.shape != shape or layer.dilation != dilation:
                raise ShapeError(f"Layer {name} has shape {layer.weights.shape}/d={layer.dilation}, "
                                 f"expected {shape}/d={dilation}")
        self.hyper = hyper
        self.params = dict(params)
        self.normalizer = normalizer if normalizer is not None else Normalizer()

    @classmethod
    def build(cls, hyper, seed=0):
        """
        Fan-in scaled uniform initialisation from a seeded generator.

        The two log-sigma heads start at zero, so a fresh model predicts
        sigma_z = 1 and sigma_x = 1 for every input.
        """
        rng = np.random.default_rng(seed)
        params = {}
        for name, shape, dilation in layer_shapes(hyper):
            bound = np.sqrt(6.0 / (shape[1] * shape[2]))
            weights = rng.uniform(-bound, bound, size=shape)
            if name in LOGSIGMA_HEADS:
                # drawn anyway so the other layers keep their values for a given seed
                weights = np.zeros(shape)
            params[name] = ConvParams(weights, dilation)
        model = cls(hyper, params)
        logger.info("Built model %r with %s parameters", hyper, model.param_count())
        return model

    @classmethod
    def zeros(cls, hyper):
        """Model with every weight set to zero (mu = 0, sigma = 1 everywhere)"""
        params = {name: ConvParams(np.zeros(shape), dilation)
                  for name, shape, dilation in layer_shapes(hyper)}
        return cls(hyper, params)

    # ==========================
    # LAYOUT ACCESS
    # ==========================

    @property
    def encoder_layers(self):
        return [self.params[f"{ENCODER_PREFIX}.{h}"] for h in range(self.hyper.depth)]

    @property
    def decoder_layers(self):
        return [self.params[f"{DECODER_PREFIX}.{h}"] for h in range(self.hyper.depth)]

    @property
    def enc_mu_head(self):
        return self.params[ENC_MU_HEAD]

    @property
    def enc_logsigma_head(self):
        return self.params[ENC_LOGSIGMA_HEAD]

    @property
    def dec_mu_head(self):
        return self.params[DEC_MU_HEAD]

    @property
    def dec_logsigma_head(self):
        return self.params[DEC_LOGSIGMA_HEAD]

    def named_parameters(self):
        """Ordered name -> ConvParams in file layout order"""
        return dict(self.params)

    def weights(self):
        """Ordered name -> weight array"""
        return {name: layer.weights for name, layer in self.params.items()}

    def with_weights(self, weights):
        """New model sharing hyperparameters and normalizers with replaced weights"""
        params = {name: layer.with_weights(weights[name]) for name, layer in self.params.items()}
        return FaeModel(self.hyper, params, self.normalizer)

    def with_normalizer(self, normalizer):
        return FaeModel(self.hyper, self.params, normalizer)

    def copy(self):
        return self.with_weights({name: w.copy() for name, w in self.weights().items()})

    def param_count(self):
        return int(sum(layer.size for layer in self.params.values()))

    def __repr__(self):
        return f"<FaeModel({self.hyper!r}, params={self.param_count()})>"


def build_model(hyper, seed=0):
    """Construct a freshly initialised model for the given hyperparameters"""
    if not isinstance(hyper, FaeHyperparams):
        hyper = FaeHyperparams.from_dict(hyper)
    return FaeModel.build(hyper, seed)


def param_count(model):
    return model.param_count()
