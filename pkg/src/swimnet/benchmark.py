"""Experiment runners.

* :func:`run_barron` compares sampled networks with random features on the
  Barron test function ``sqrt(3/2) (||x - a|| - ||x + a||)`` over ``[-1, 1]^D``.
* :func:`run_classification` runs seeded stratified k-fold cross-validation
  over a grid of depths.
* :func:`timing_scaling` measures how fit time grows with the number of
  training points at a fixed architecture.
* :class:`RigidTransform` provides the ``x -> a A x + c`` maps used by the
  invariance checks.
"""

from __future__ import annotations

import hashlib
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
import scipy.stats

from .baseline import BaselineConfig, fit_random_features
from .network import forward, predict_classes
from .numerics import as_matrix
from .sampler import FitConfig, fit

logger = logging.getLogger(__name__)

METHODS = ("swim", "random_features")


@dataclass
class ExperimentRow:
    method: str
    depth: int
    width: int
    seed: int
    metric: str
    value: float
    fit_seconds: float
    fold: int | None = None
    data_hash: str | None = None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def barron_target(X) -> np.ndarray:
    X = as_matrix(X, "X")
    D = X.shape[1]
    a = 2.0 * np.arange(1, D + 1) / D - 1.0
    return math.sqrt(1.5) * (np.linalg.norm(X - a, axis=1) - np.linalg.norm(X + a, axis=1))


def relative_l2_error(pred, truth) -> float:
    pred = np.asarray(pred, dtype=np.float64).ravel()
    truth = np.asarray(truth, dtype=np.float64).ravel()
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.size} predictions, {truth.size} targets")
    denom = float(np.sum(truth ** 2))
    if denom == 0:
        raise ValueError("relative error undefined for an all-zero target")
    return math.sqrt(float(np.sum((truth - pred) ** 2)) / denom)


def array_digest(*arrays: np.ndarray) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a, dtype=np.float64).tobytes())
    return h.hexdigest()[:16]


@dataclass
class BarronSpec:
    dim: int
    train_points: int = 10_000
    test_points: int = 10_000
    widths: Sequence[int] = (64, 256, 1024)
    depths: Sequence[int] = (1,)
    activation: str = "sine"
    seeds: Sequence[int] = (0,)
    ridge_lambda: float = 1e-10
    methods: Sequence[str] = METHODS

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")
        if min(self.train_points, self.test_points) < 2:
            raise ValueError("need at least two train and test points")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")


def barron_data(dim: int, n_train: int, n_test: int, seed: int):
    """Uniform train/test samples on ``[-1, 1]^dim`` with Barron targets."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xBA7]))
    X_train = rng.uniform(-1, 1, size=(n_train, dim))
    X_test = rng.uniform(-1, 1, size=(n_test, dim))
    return X_train, barron_target(X_train), X_test, barron_target(X_test)


def fit_method(method: str, X, Y, layers: list[int], seed: int, ridge_lambda: float, activation: str = "sine"):
    if method == "swim":
        return fit(X, Y, FitConfig(layers=layers, activation=activation, ridge_lambda=ridge_lambda, seed=seed))
    if method == "random_features":
        return fit_random_features(X, Y, BaselineConfig(layers=layers, seed=seed, ridge_lambda=ridge_lambda))
    raise ValueError(f"unknown method {method!r}")


def _map(func: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


def run_barron(spec: BarronSpec, jobs: int = 1) -> list[ExperimentRow]:
    """One row per (seed, depth, width, method), reporting test ``rel_l2_error``.

    Both methods see the same train/test matrices for a given seed. A failing
    fit yields a row with ``value = nan`` and ``error`` set; the others run on.
    """
    data = {s: barron_data(spec.dim, spec.train_points, spec.test_points, s) for s in spec.seeds}
    digests = {s: array_digest(*d) for s, d in data.items()}
    tasks = [(s, depth, width, method)
             for s in spec.seeds for depth in spec.depths for width in spec.widths for method in spec.methods]

    def run(task):
        seed, depth, width, method = task
        X_train, y_train, X_test, y_test = data[seed]
        try:
            t0 = time.perf_counter()
            net = fit_method(method, X_train, y_train, [width] * depth, seed, spec.ridge_lambda, spec.activation)
            elapsed = time.perf_counter() - t0
            err = relative_l2_error(forward(net, X_test), y_test)
            return ExperimentRow(method, depth, width, seed, "rel_l2_error", err, elapsed, data_hash=digests[seed])
        except Exception as exc:  # noqa: BLE001 - recorded per row
            logger.warning("barron %s depth=%d width=%d seed=%d failed: %s", method, depth, width, seed, exc)
            return ExperimentRow(method, depth, width, seed, "rel_l2_error", math.nan, math.nan,
                                 data_hash=digests[seed], error=str(exc))

    return _map(run, tasks, jobs)


@dataclass(frozen=True)
class RigidTransform:
    """The map ``x -> a A x + c`` with ``a != 0`` and ``A`` orthogonal."""

    a: float
    A: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=np.float64))
        c = np.asarray(self.c, dtype=np.float64).reshape(-1)
        if self.a == 0 or not math.isfinite(self.a):
            raise ValueError("scale must be finite and nonzero")
        if A.shape != (c.size, c.size):
            raise ValueError(f"rotation shape {A.shape} does not match shift length {c.size}")
        dev = np.linalg.norm(A.T @ A - np.eye(c.size))
        if dev > 1e-10:
            raise ValueError(f"matrix is not orthogonal (||A^T A - I|| = {dev:.2e})")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.c.size

    def __call__(self, X) -> np.ndarray:
        return apply_transform(self, X)

    def compose(self, inner: "RigidTransform") -> "RigidTransform":
        """``self`` after ``inner``."""
        return RigidTransform(self.a * inner.a, self.A @ inner.A, self.a * self.A @ inner.c + self.c)

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator, scale: float | None = None) -> "RigidTransform":
        if dim == 1:
            A = np.array([[rng.choice([-1.0, 1.0])]])
        else:
            A = scipy.stats.ortho_group.rvs(dim, random_state=rng)
        a = float(scale) if scale is not None else float(rng.choice([-1, 1]) * rng.uniform(0.1, 10))
        return cls(a, A, rng.normal(size=dim))


def apply_transform(H: RigidTransform, X) -> np.ndarray:
    X = as_matrix(X, "X", check_finite=False)
    if X.shape[1] != H.dim:
        raise ValueError(f"transform acts on {H.dim} columns, X has {X.shape[1]}")
    return H.a * (X @ H.A.T) + H.c


def stratified_folds(labels, n_folds: int, seed: int = 0) -> np.ndarray:
    """Fold index per row: seeded shuffle, then per-class round robin.

    Classes are visited in order of first appearance in the shuffled order and
    the round robin continues across classes, so fold sizes differ by at most
    one and the assignment does not depend on how labels are named.
    """
    labels = np.asarray(labels)
    if n_folds < 2:
        raise ValueError(f"need at least 2 folds, got {n_folds}")
    classes, counts = np.unique(labels, return_counts=True)
    if len(classes) < 2:
        raise ValueError("stratified folds need at least two classes")
    small = classes[counts < n_folds]
    if len(small):
        raise ValueError(f"class {small[0]!r} has fewer than {n_folds} rows")
    order = np.random.default_rng(seed).permutation(len(labels))
    shuffled = labels[order]
    _, first = np.unique(shuffled, return_index=True)
    folds = np.empty(len(labels), dtype=np.int64)
    offset = 0
    for pos in np.sort(first):
        members = order[shuffled == shuffled[pos]]
        folds[members] = (offset + np.arange(len(members))) % n_folds
        offset += len(members)
    return folds


@dataclass
class ClassificationReport:
    rows: list[ExperimentRow]
    mean_accuracy: dict[int, float]
    best_depth: int
    folds: np.ndarray = field(repr=False)


def one_hot(labels) -> tuple[np.ndarray, list]:
    """One-hot matrix with classes in order of first appearance."""
    labels = np.asarray(labels)
    classes = list(dict.fromkeys(labels.tolist()))
    lookup = {c: k for k, c in enumerate(classes)}
    Y = np.zeros((len(labels), len(classes)))
    Y[np.arange(len(labels)), [lookup[c] for c in labels.tolist()]] = 1.0
    return Y, classes


def run_classification(X, labels, folds: int = 10, depths: Sequence[int] = (1, 2, 3, 4, 5),
                       width: int = 500, cfg: FitConfig | None = None, jobs: int = 1) -> ClassificationReport:
    """Stratified k-fold accuracy of sampled classifiers for each depth.

    ``cfg`` supplies everything except the layer widths, which become
    ``[width] * depth``. Its seed drives both the fold split and the fits.
    """
    X = as_matrix(X, "X")
    labels = np.asarray(labels)
    if labels.ndim != 1 or len(labels) != X.shape[0]:
        raise ValueError("labels must be a vector with one entry per row of X")
    cfg = cfg or FitConfig(layers=[width])
    fold_of = stratified_folds(labels, folds, cfg.seed)
    Y, _ = one_hot(labels)
    truth = np.argmax(Y, axis=1)
    tasks = [(depth, k) for depth in depths for k in range(folds)]

    def run(task):
        depth, k = task
        train, test = fold_of != k, fold_of == k
        run_cfg = replace(cfg, layers=[width] * depth)
        try:
            t0 = time.perf_counter()
            net = fit(X[train], Y[train], run_cfg)
            elapsed = time.perf_counter() - t0
            acc = float(np.mean(predict_classes(net, X[test]) == truth[test]))
            return ExperimentRow("swim", depth, width, cfg.seed, "accuracy", acc, elapsed, fold=k)
        except Exception as exc:  # noqa: BLE001 - recorded per row
            logger.warning("classification depth=%d fold=%d failed: %s", depth, k, exc)
            return ExperimentRow("swim", depth, width, cfg.seed, "accuracy", math.nan, math.nan,
                                 fold=k, error=str(exc))

    rows = _map(run, tasks, jobs)
    means = {}
    for depth in depths:
        vals = [r.value for r in rows if r.depth == depth and not r.failed]
        means[depth] = float(np.mean(vals)) if vals else math.nan
    finite = {d: m for d, m in means.items() if not math.isnan(m)}
    if not finite:
        raise RuntimeError("every classification fit failed")
    best = max(finite, key=lambda d: (finite[d], -d))
    return ClassificationReport(rows, means, best, fold_of)


@dataclass
class TimingReport:
    sizes: list[int]
    medians: list[float]
    slope: float
    ratios: list[float]
    samples: dict[int, list[float]]


def timing_scaling(layers: Sequence[int], sizes: Sequence[int], cfg: FitConfig | None = None,
                   repeats: int = 3, dim: int = 5) -> TimingReport:
    """Median fit time per training-set size and the log-log slope.

    Only the call to :func:`~swimnet.sampler.fit` is timed. Runs are
    sequential; do not run anything else concurrently.
    """
    sizes = sorted(int(m) for m in sizes)
    layers = [int(n) for n in layers]
    if len(sizes) < 3:
        raise ValueError("need at least three sample sizes")
    if sizes[0] < 10 * max(layers):
        raise ValueError(f"smallest size {sizes[0]} is below 10x the widest layer ({max(layers)})")
    if repeats < 3:
        raise ValueError("need at least three repeats for a median")
    cfg = replace(cfg or FitConfig(layers=layers), layers=layers)

    samples, medians = {}, []
    for m in sizes:
        X, y, _, _ = barron_data(dim, m, 2, seed=m)
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            fit(X, y, cfg)
            times.append(time.perf_counter() - t0)
        samples[m] = times
        medians.append(float(np.median(times)))
    if sum(medians) < 0.01:
        raise ValueError("total fit time under 10 ms; use larger sample sizes")
    slope = float(np.polyfit(np.log(sizes), np.log(medians), 1)[0])
    ratios = [medians[i + 1] / medians[i] for i in range(len(sizes) - 1)]
    return TimingReport(sizes, medians, slope, ratios, samples)
