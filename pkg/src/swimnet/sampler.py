"""Data-driven construction of hidden layers.

Each hidden layer is built in three steps:

1. draw a pool of candidate index pairs uniformly from ``X x X``, dropping pairs
   whose current representations coincide;
2. weight each candidate by ``||y_j - y_i|| / max(||r_j - r_i||, eps)``, so that
   close inputs with very different targets are preferred (``eps`` is 0 for
   the first layer);
3. draw one pair per neuron, with replacement, proportionally to the weights.

After the last hidden layer the linear readout is solved with
:func:`~swimnet.numerics.solve_ridge`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from .network import Activation, LayerParams, SampledNetwork, apply_layer, weights_from_pairs
from .numerics import as_matrix, row_norms, solve_ridge

logger = logging.getLogger(__name__)

# Rows per chunk when differencing pool pairs; bounds peak memory.
_CHUNK = 8192
# Candidate draw attempts allowed per requested candidate.
_RETRY_FACTOR = 50


class DegenerateLayerError(RuntimeError):
    """No pair of training rows has distinct representations at some layer."""

    def __init__(self, layer: int, message: str):
        super().__init__(f"layer {layer}: {message}")
        self.layer = layer


@dataclass
class FitConfig:
    layers: list[int]
    activation: str = "tanh"
    epsilon: float = 1e-6
    pool_multiplier: int = 1
    ridge_lambda: float = 1e-10
    y_norm: str = "linf"
    x_norm: str = "l2"
    seed: int = 0
    s1: float | None = None
    s2: float | None = None

    def __post_init__(self):
        self.layers = [int(n) for n in self.layers]
        if not self.layers or any(n < 1 for n in self.layers):
            raise ValueError(f"layer widths must be >= 1, got {self.layers}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if int(self.pool_multiplier) != self.pool_multiplier or self.pool_multiplier < 1:
            raise ValueError(f"pool multiplier must be a positive integer, got {self.pool_multiplier}")
        self.pool_multiplier = int(self.pool_multiplier)
        if not self.ridge_lambda >= 0:
            raise ValueError(f"ridge lambda must be >= 0, got {self.ridge_lambda}")
        for name in ("y_norm", "x_norm"):
            if getattr(self, name) not in ("l2", "linf"):
                raise ValueError(f"{name} must be 'l2' or 'linf'")
        Activation.from_kind(self.activation)

    def make_activation(self) -> Activation:
        return Activation.from_kind(self.activation, self.s1, self.s2)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class PairPool:
    layer: int
    pairs: np.ndarray  # (n, 2) int64 row indices
    weights: np.ndarray  # (n,) nonnegative
    fallback_uniform: bool = False

    def __len__(self):
        return len(self.pairs)

    def probabilities(self) -> np.ndarray:
        if self.fallback_uniform:
            return np.full(len(self), 1.0 / len(self))
        return self.weights / self.weights.sum()


def pool_size(n_neurons: int, n_rows: int, multiplier: int = 1) -> int:
    return multiplier * math.ceil(n_neurons / n_rows) * n_rows


def pair_weight(r1, r2, y1, y2, l: int, cfg: FitConfig) -> float:
    r1, r2 = np.atleast_1d(np.asarray(r1, float)), np.atleast_1d(np.asarray(r2, float))
    y1, y2 = np.atleast_1d(np.asarray(y1, float)), np.atleast_1d(np.asarray(y2, float))
    return float(_pair_weights((r2 - r1)[None], (y2 - y1)[None], l, cfg)[0])


def _pair_weights(dr: np.ndarray, dy: np.ndarray, l: int, cfg: FitConfig) -> np.ndarray:
    floor = 0.0 if l == 1 else cfg.epsilon
    dist = row_norms(dr, cfg.x_norm)
    num = row_norms(dy, cfg.y_norm)
    out = np.zeros(len(dr))
    distinct = np.any(dr != 0, axis=1)
    out[distinct] = num[distinct] / np.maximum(dist[distinct], floor)
    return out


def build_pool(X, Y, reps, l: int, n_neurons: int, cfg: FitConfig, rng: np.random.Generator) -> PairPool:
    """Candidate pairs for layer ``l`` with their unnormalised weights.

    ``X`` is accepted for interface symmetry; only its row count matters,
    since the layer inputs are already in ``reps``.
    """
    Y = as_matrix(Y, "Y")
    reps = as_matrix(reps, "representations", check_finite=False)
    M = reps.shape[0]
    if M < 2:
        raise ValueError("need at least two training rows to form pairs")
    target = pool_size(n_neurons, M, cfg.pool_multiplier)
    budget = _RETRY_FACTOR * target

    kept_pairs, kept_weights = [], []
    n_kept = n_tried = 0
    while n_kept < target and n_tried < budget:
        n_draw = min(target - n_kept, budget - n_tried)
        cand = rng.integers(0, M, size=(n_draw, 2))
        n_tried += n_draw
        for start in range(0, n_draw, _CHUNK):
            c = cand[start:start + _CHUNK]
            dr = reps[c[:, 1]] - reps[c[:, 0]]
            ok = np.any(dr != 0, axis=1)
            if not ok.any():
                continue
            c, dr = c[ok], dr[ok]
            dy = Y[c[:, 1]] - Y[c[:, 0]]
            kept_pairs.append(c)
            kept_weights.append(_pair_weights(dr, dy, l, cfg))
            n_kept += len(c)

    if n_kept == 0:
        raise DegenerateLayerError(
            l, f"no pair with distinct representations in {n_tried} draws over {M} rows"
        )
    if n_kept < target:
        logger.warning("layer %d: pool has %d of %d candidates after %d draws", l, n_kept, target, n_tried)
    pairs = np.concatenate(kept_pairs)
    weights = np.concatenate(kept_weights)
    if not np.all(np.isfinite(weights)):
        raise FloatingPointError(f"layer {l}: non-finite pair weight")
    return PairPool(l, pairs, weights, fallback_uniform=not np.any(weights > 0))


def sample_pairs(pool: PairPool, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` pairs drawn with replacement, proportionally to the pool weights."""
    if len(pool) == 0:
        raise ValueError("cannot sample from an empty pool")
    if pool.fallback_uniform:
        idx = rng.integers(0, len(pool), size=n)
    else:
        cdf = np.cumsum(pool.weights)
        idx = np.searchsorted(cdf, rng.random(n) * cdf[-1], side="right")
        # u * total may round up to total; clamp to the last positive-weight entry.
        idx = np.minimum(idx, np.flatnonzero(pool.weights > 0)[-1])
    return pool.pairs[idx]


def layer_generators(seed: int, n_layers: int) -> list[np.random.Generator]:
    """One independent generator per hidden layer, derived from ``seed``."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n_layers)]


def fit(X, Y, cfg: FitConfig, *, pairs: list | None = None, generators: list | None = None) -> SampledNetwork:
    """Sample all hidden layers and solve the linear readout.

    ``pairs`` optionally forces the training-row index pairs per layer (a list
    of ``(N_l, 2)`` arrays, or ``None`` entries to sample that layer).
    ``generators`` replaces the per-layer streams derived from ``cfg.seed``.
    """
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    if X.shape[0] != Y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
    if X.shape[0] < 2:
        raise ValueError("need at least two training rows")
    act = cfg.make_activation()
    gens = generators if generators is not None else layer_generators(cfg.seed, len(cfg.layers))
    if len(gens) != len(cfg.layers):
        raise ValueError(f"got {len(gens)} generators for {len(cfg.layers)} layers")
    forced = list(pairs) if pairs is not None else [None] * len(cfg.layers)
    if len(forced) != len(cfg.layers):
        raise ValueError(f"got forced pairs for {len(forced)} layers, network has {len(cfg.layers)}")

    reps = X
    hidden, used = [], []
    for l, (n_l, rng, force) in enumerate(zip(cfg.layers, gens, forced), start=1):
        if force is None:
            pool = build_pool(X, Y, reps, l, n_l, cfg, rng)
            chosen = sample_pairs(pool, n_l, rng)
        else:
            chosen = np.asarray(force, dtype=np.int64).reshape(-1, 2)
            if len(chosen) != n_l:
                raise ValueError(f"layer {l}: {len(chosen)} forced pairs for {n_l} neurons")
        try:
            W, b = weights_from_pairs(reps[chosen[:, 0]], reps[chosen[:, 1]], act)
        except ValueError as exc:
            raise DegenerateLayerError(l, str(exc)) from None
        layer = LayerParams(W, b)
        reps = apply_layer(layer, act, reps)
        if not np.all(np.isfinite(reps)):
            raise FloatingPointError(f"layer {l}: non-finite hidden output")
        hidden.append(layer)
        used.append(chosen)

    sol = solve_ridge(reps, Y, cfg.ridge_lambda)
    return SampledNetwork(
        input_dim=X.shape[1],
        hidden=hidden,
        activation=act,
        output_weights=sol.weights.T,
        output_bias=sol.bias,
        seed=cfg.seed,
        config={"method": "swim", **cfg.to_dict()},
        pair_indices=used,
        train_residual_norm=sol.residual_norm,
    )
