"""Data-agnostic random-feature networks used as the comparison baseline.

Every hidden weight is drawn from N(0, 1) and every bias from U(-pi, pi); the
activation is ``sin``. Deep baselines stack the same recipe layer by layer.
Only the readout sees the data.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .network import Activation, LayerParams, SampledNetwork, apply_layer
from .numerics import as_matrix, solve_ridge
from .sampler import layer_generators


@dataclass
class BaselineConfig:
    layers: list[int]
    seed: int = 0
    ridge_lambda: float = 1e-10

    def __post_init__(self):
        self.layers = [int(n) for n in self.layers]
        if not self.layers or any(n < 1 for n in self.layers):
            raise ValueError(f"layer widths must be >= 1, got {self.layers}")
        if not self.ridge_lambda >= 0:
            raise ValueError(f"ridge lambda must be >= 0, got {self.ridge_lambda}")


def random_hidden_layers(input_dim: int, cfg: BaselineConfig) -> list[LayerParams]:
    layers, prev = [], input_dim
    for n, rng in zip(cfg.layers, layer_generators(cfg.seed, len(cfg.layers))):
        W = rng.standard_normal((n, prev))
        b = rng.uniform(-np.pi, np.pi, size=n)
        layers.append(LayerParams(W, b))
        prev = n
    return layers


def fit_random_features(X, Y, cfg: BaselineConfig) -> SampledNetwork:
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    if X.shape[0] != Y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
    act = Activation.from_kind("sine")
    hidden = random_hidden_layers(X.shape[1], cfg)
    H = X
    for layer in hidden:
        H = apply_layer(layer, act, H)
    sol = solve_ridge(H, Y, cfg.ridge_lambda)
    return SampledNetwork(
        input_dim=X.shape[1],
        hidden=hidden,
        activation=act,
        output_weights=sol.weights.T,
        output_bias=sol.bias,
        seed=cfg.seed,
        config={"method": "random_features", **asdict(cfg)},
        train_residual_norm=sol.residual_norm,
    )
