"""Sampled fully-connected networks: hidden weights from data pairs, linear readout."""

from .baseline import BaselineConfig, fit_random_features
from .network import (
    Activation,
    ConstantBlock,
    LayerParams,
    SampledNetwork,
    constant_block_eval,
    forward,
    forward_hidden,
    predict_classes,
    predict_labels,
    weight_from_pair,
)
from .numerics import RidgeSolution, matmul, solve_ridge
from .sampler import DegenerateLayerError, FitConfig, PairPool, build_pool, fit, pair_weight, sample_pairs

__version__ = "0.1.0"

__all__ = [
    "Activation",
    "BaselineConfig",
    "ConstantBlock",
    "DegenerateLayerError",
    "FitConfig",
    "LayerParams",
    "PairPool",
    "RidgeSolution",
    "SampledNetwork",
    "build_pool",
    "constant_block_eval",
    "fit",
    "fit_random_features",
    "forward",
    "forward_hidden",
    "matmul",
    "pair_weight",
    "predict_classes",
    "predict_labels",
    "sample_pairs",
    "solve_ridge",
    "weight_from_pair",
]
