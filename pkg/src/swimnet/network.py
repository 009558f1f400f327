"""Sampled network representation and evaluation.

A hidden neuron built from a pair of layer inputs ``(x1, x2)`` has

    w = s1 * (x2 - x1) / ||x2 - x1||^2,    b = <w, x1> + s2,

and computes ``phi(<w, x> - b)``. The constants ``(s1, s2)`` pin the activation
values at the pair: relu gives 0 at ``x1`` and 1 at ``x2``; tanh and sine give
-1/2 at ``x1``, +1/2 at ``x2`` and 0 at the midpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .numerics import as_matrix

ACTIVATION_CONSTANTS = {
    "relu": (1.0, 0.0),
    "tanh": (math.log(3.0), math.log(3.0) / 2),
    "sine": (math.pi / 3, math.pi / 6),
}

_ACTIVATION_FUNCTIONS = {
    "relu": lambda z: np.maximum(z, 0.0),
    "tanh": np.tanh,
    "sine": np.sin,
}


@dataclass(frozen=True)
class Activation:
    kind: str
    s1: float
    s2: float

    def __post_init__(self):
        if self.kind not in _ACTIVATION_FUNCTIONS:
            raise ValueError(
                f"unknown activation {self.kind!r}; expected one of {sorted(_ACTIVATION_FUNCTIONS)}"
            )

    @classmethod
    def from_kind(cls, kind: str, s1: float | None = None, s2: float | None = None) -> "Activation":
        """Activation with its default pair constants, optionally overridden."""
        if kind not in ACTIVATION_CONSTANTS:
            raise ValueError(
                f"unknown activation {kind!r}; expected one of {sorted(ACTIVATION_CONSTANTS)}"
            )
        d1, d2 = ACTIVATION_CONSTANTS[kind]
        return cls(kind, d1 if s1 is None else float(s1), d2 if s2 is None else float(s2))

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return _ACTIVATION_FUNCTIONS[self.kind](z)


@dataclass(frozen=True)
class LayerParams:
    """Weights ``(N_l, N_{l-1})`` and biases ``(N_l,)`` of one hidden layer."""

    weights: np.ndarray
    biases: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        b = np.asarray(self.biases, dtype=np.float64).reshape(-1)
        if w.ndim != 2:
            raise ValueError(f"layer weights must be 2-D, got shape {w.shape}")
        if b.shape[0] != w.shape[0]:
            raise ValueError(f"{w.shape[0]} weight rows but {b.shape[0]} biases")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise ValueError("layer parameters contain non-finite values")
        if np.any(np.all(w == 0, axis=1)):
            raise ValueError("layer has a zero weight row")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "biases", b)

    @property
    def shape(self) -> tuple[int, int]:
        return self.weights.shape


@dataclass
class SampledNetwork:
    """Fully-connected network ``x -> W_out phi(... phi(W_1 x - b_1) ...) - b_out``.

    ``output_weights`` is ``None`` until the linear readout has been solved.
    ``pair_indices`` records, per hidden layer, the training-row pairs used to
    build the neurons (``None`` for data-agnostic or loaded networks).
    """

    input_dim: int
    hidden: list[LayerParams]
    activation: Activation
    output_weights: np.ndarray | None = None
    output_bias: np.ndarray | None = None
    seed: int | None = None
    config: dict[str, Any] = field(default_factory=dict)
    labels: list[str] | None = None
    pair_indices: list[np.ndarray] | None = None
    train_residual_norm: float | None = None

    def __post_init__(self):
        prev = self.input_dim
        for l, layer in enumerate(self.hidden, start=1):
            if layer.shape[1] != prev:
                raise ValueError(
                    f"layer {l} expects {layer.shape[1]} inputs but layer {l - 1} has {prev} outputs"
                )
            prev = layer.shape[0]
        if self.output_weights is not None:
            ow = np.asarray(self.output_weights, dtype=np.float64)
            ob = np.asarray(self.output_bias, dtype=np.float64).reshape(-1)
            if ow.ndim != 2 or ow.shape[1] != prev:
                raise ValueError(
                    f"output weights have shape {ow.shape}, expected (*, {prev})"
                )
            if ob.shape[0] != ow.shape[0]:
                raise ValueError(f"{ow.shape[0]} outputs but {ob.shape[0]} output biases")
            self.output_weights, self.output_bias = ow, ob

    @property
    def depth(self) -> int:
        return len(self.hidden)

    @property
    def widths(self) -> list[int]:
        return [layer.shape[0] for layer in self.hidden]

    @property
    def is_trained(self) -> bool:
        return self.output_weights is not None

    @property
    def output_dim(self) -> int:
        if not self.is_trained:
            raise ValueError("network has no output layer")
        return self.output_weights.shape[0]


def weight_from_pair(x1, x2, act: Activation) -> tuple[np.ndarray, float]:
    x1 = np.asarray(x1, dtype=np.float64).reshape(-1)
    x2 = np.asarray(x2, dtype=np.float64).reshape(-1)
    w, b = weights_from_pairs(x1[None, :], x2[None, :], act)
    return w[0], float(b[0])


def weights_from_pairs(X1: np.ndarray, X2: np.ndarray, act: Activation):
    """Vectorised :func:`weight_from_pair` over rows of ``X1`` and ``X2``."""
    diff = X2 - X1
    sq = np.einsum("ij,ij->i", diff, diff)
    if np.any(sq == 0):
        bad = int(np.flatnonzero(sq == 0)[0])
        raise ValueError(f"pair {bad} has identical points; weights are undefined")
    W = act.s1 * diff / sq[:, None]
    b = np.einsum("ij,ij->i", W, X1) + act.s2
    return W, b


def _check_width(net: SampledNetwork, X) -> np.ndarray:
    X = as_matrix(X, "X", check_finite=False)
    if X.shape[1] != net.input_dim:
        raise ValueError(f"expected {net.input_dim} input columns, got {X.shape[1]}")
    return X


def apply_layer(layer: LayerParams, act: Activation, H: np.ndarray) -> np.ndarray:
    return act(H @ layer.weights.T - layer.biases)


def forward_hidden(net: SampledNetwork, X, upto: int | None = None) -> np.ndarray:
    """Output of hidden layer ``upto`` (0 returns ``X``, default is the last)."""
    X = _check_width(net, X)
    upto = net.depth if upto is None else upto
    if not 0 <= upto <= net.depth:
        raise ValueError(f"layer index {upto} outside 0..{net.depth}")
    H = X
    for layer in net.hidden[:upto]:
        H = apply_layer(layer, net.activation, H)
    return H


def forward(net: SampledNetwork, X) -> np.ndarray:
    if not net.is_trained:
        raise ValueError("network has no output layer; fit it first")
    H = forward_hidden(net, X)
    return H @ net.output_weights.T - net.output_bias


def predict_classes(net: SampledNetwork, X) -> np.ndarray:
    """Row-wise argmax of the outputs; ties go to the lowest index."""
    if not net.is_trained:
        raise ValueError("network has no output layer; fit it first")
    if net.output_dim < 2:
        raise ValueError("class prediction needs at least two outputs")
    return np.argmax(forward(net, X), axis=1)


def predict_labels(net: SampledNetwork, X) -> list[str]:
    """Decode :func:`predict_classes` through the stored label dictionary."""
    if net.labels is None:
        raise ValueError("network carries no label dictionary")
    return [net.labels[k] for k in predict_classes(net, X)]


@dataclass(frozen=True)
class ConstantBlock:
    """Five relu neurons summing to 0 below ``c1``, ``c`` above ``c2`` and a
    linear ramp in between.

    Neurons (``phi`` = relu)::

        f1 =  a1 phi(x - c2)      f2 = a1 phi(-(x - c3))    f3 = -a1 phi(x - c3)
        f4 = -a2 phi(-(x - c2))   f5 = a3 phi(-(x - c1))

    with ``a1 = c/(c3-c2)``, ``a2 = a1 (c1-c3)/(c1-c2)``, ``a3 = a2 - a1``. The
    ramp is ``a3 x + d`` with ``d = a1 c3 - a2 c2``. ``f4`` breaks at ``c2`` and
    ``f5`` faces left; with ``f4`` at ``c1`` or ``f5`` facing right the sum is
    not zero below ``c1``.
    """

    c: float
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        if not self.c1 < self.c2 < self.c3:
            raise ValueError(f"need c1 < c2 < c3, got {self.c1}, {self.c2}, {self.c3}")

    @property
    def a1(self) -> float:
        return self.c / (self.c3 - self.c2)

    @property
    def a2(self) -> float:
        return self.a1 * (self.c1 - self.c3) / (self.c1 - self.c2)

    @property
    def a3(self) -> float:
        return self.a2 - self.a1

    @property
    def d(self) -> float:
        return self.a1 * self.c3 - self.a2 * self.c2

    def neurons(self) -> list[tuple[float, float, float]]:
        """``(outer coefficient, inner sign, breakpoint)`` per neuron."""
        a1, a2, a3 = self.a1, self.a2, self.a3
        return [
            (a1, 1.0, self.c2),
            (a1, -1.0, self.c3),
            (-a1, 1.0, self.c3),
            (-a2, -1.0, self.c2),
            (a3, -1.0, self.c1),
        ]

    def closed_form(self, x):
        x = np.asarray(x, dtype=np.float64)
        ramp = self.a3 * x + self.d
        return np.where(x <= self.c1, 0.0, np.where(x <= self.c2, ramp, self.c))


def constant_block_eval(blk: ConstantBlock, x):
    """Sum of the five relu neurons of ``blk`` at ``x`` (scalar or array)."""
    x = np.asarray(x, dtype=np.float64)
    total = np.zeros_like(x)
    for coef, sign, brk in blk.neurons():
        total = total + coef * np.maximum(sign * (x - brk), 0.0)
    return total if total.ndim else float(total)
