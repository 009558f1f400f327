import math

import numpy as np
import pytest

from swimnet.benchmark import (
    BarronSpec,
    RigidTransform,
    apply_transform,
    barron_target,
    one_hot,
    relative_l2_error,
    run_barron,
    run_classification,
    stratified_folds,
    timing_scaling,
)
from swimnet.network import forward
from swimnet.numerics import solve_ridge
from swimnet.sampler import FitConfig, fit


def blobs(n_per_class=100, centers=((-4, -4), (4, 4)), seed=0, noise=0.5):
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(c, noise, size=(n_per_class, len(c))) for c in centers])
    y = np.repeat(np.arange(len(centers)), n_per_class)
    return X, y


@pytest.mark.parametrize("D", [1, 2, 5, 10])
def test_barron_target_vanishes_at_origin(D):
    assert barron_target(np.zeros((1, D)))[0] == 0.0


def test_barron_target_hand_value():
    # D=2: a = (0, 1); f((0,1)) = sqrt(1.5) * (0 - 2)
    assert barron_target([[0.0, 1.0]])[0] == pytest.approx(-2.449489742783178, abs=1e-12)


def test_barron_target_is_odd():
    X = np.random.default_rng(0).uniform(-1, 1, size=(50, 4))
    np.testing.assert_allclose(barron_target(-X), -barron_target(X), atol=1e-14)


def test_relative_error_values():
    truth = np.array([3.0, 4.0])
    assert relative_l2_error(truth, truth) == 0.0
    assert relative_l2_error(np.zeros(2), truth) == 1.0
    assert relative_l2_error([3.0, 0.0], truth) == pytest.approx(0.8, abs=1e-15)
    with pytest.raises(ValueError):
        relative_l2_error([1.0], [0.0])
    with pytest.raises(ValueError):
        relative_l2_error([1.0, 2.0], [1.0])


def test_run_barron_cardinality_and_sanity():
    spec = BarronSpec(dim=3, train_points=1500, test_points=1000, widths=(64,), depths=(1,), seeds=(0,))
    rows = run_barron(spec)
    assert [r.method for r in rows] == ["swim", "random_features"]
    for r in rows:
        assert not r.failed and math.isfinite(r.value) and 0 <= r.value <= 1.05
        assert r.fit_seconds >= 0


def test_run_barron_shares_data_within_seed():
    spec = BarronSpec(dim=2, train_points=400, test_points=300, widths=(16, 32), seeds=(0, 1))
    rows = run_barron(spec)
    for seed in (0, 1):
        assert len({r.data_hash for r in rows if r.seed == seed}) == 1
    assert len({r.data_hash for r in rows}) == 2


def test_run_barron_parallel_matches_serial():
    spec = BarronSpec(dim=2, train_points=300, test_points=300, widths=(8, 16), seeds=(0, 1))
    a = [r.value for r in run_barron(spec, jobs=1)]
    b = [r.value for r in run_barron(spec, jobs=3)]
    assert a == b


def test_run_barron_failure_marks_row():
    spec = BarronSpec(dim=2, train_points=300, test_points=300, widths=(8,), ridge_lambda=float("nan"))
    rows = run_barron(spec)
    assert all(r.failed and math.isnan(r.value) for r in rows)


def test_transform_identity():
    X = np.random.default_rng(0).normal(size=(5, 3))
    H = RigidTransform(1.0, np.eye(3), np.zeros(3))
    np.testing.assert_array_equal(apply_transform(H, X), X)


def test_transform_quarter_turn():
    H = RigidTransform(1.0, np.array([[0.0, -1.0], [1.0, 0.0]]), np.zeros(2))
    np.testing.assert_allclose(H([[1.0, 0.0]]), [[0.0, 1.0]], atol=1e-15)


def test_transform_composition():
    rng = np.random.default_rng(1)
    H1, H2 = RigidTransform.random(4, rng), RigidTransform.random(4, rng)
    X = rng.normal(size=(10, 4))
    direct = H2(H1(X))
    composed = H2.compose(H1)
    assert composed.a == pytest.approx(H2.a * H1.a)
    np.testing.assert_allclose(composed(X), direct, atol=1e-10)


def test_transform_rejects_non_orthogonal():
    with pytest.raises(ValueError, match="orthogonal"):
        RigidTransform(1.0, np.array([[1.0, 0.1], [0.0, 1.0]]), np.zeros(2))
    with pytest.raises(ValueError):
        RigidTransform(0.0, np.eye(2), np.zeros(2))


@pytest.mark.parametrize("dim", [1, 2, 6])
def test_random_transform_is_orthogonal(dim):
    H = RigidTransform.random(dim, np.random.default_rng(dim))
    assert np.linalg.norm(H.A.T @ H.A - np.eye(dim)) <= 1e-10


def test_stratified_folds_balance_classes():
    y = np.array([0] * 30 + [1] * 20 + [2] * 13)
    folds = stratified_folds(y, 5, seed=0)
    for cls in (0, 1, 2):
        counts = np.bincount(folds[y == cls], minlength=5)
        assert counts.max() - counts.min() <= 1
    sizes = np.bincount(folds, minlength=5)
    assert sizes.max() - sizes.min() <= 1


def test_stratified_folds_reject_bad_input():
    with pytest.raises(ValueError, match="two classes"):
        stratified_folds(np.zeros(20), 5)
    with pytest.raises(ValueError, match="'rare'"):
        stratified_folds(np.array(["common"] * 20 + ["rare"] * 3), 5)


def test_classification_separable_blobs():
    X, y = blobs()
    # Linear least-squares classifier as an independent separability oracle.
    Y, _ = one_hot(y)
    sol = solve_ridge(X, Y, 0.0)
    assert np.mean(np.argmax(X @ sol.weights - sol.bias, axis=1) == y) == 1.0
    report = run_classification(X, y, folds=5, depths=(1,), width=64, cfg=FitConfig(layers=[64], seed=1))
    assert report.mean_accuracy[1] >= 0.99
    assert report.best_depth == 1
    assert len(report.rows) == 5


def test_classification_single_class_rejected():
    X, _ = blobs()
    with pytest.raises(ValueError):
        run_classification(X, np.zeros(len(X)), folds=5, depths=(1,), width=8)


def test_classification_invariant_to_label_names():
    X, y = blobs(n_per_class=40, centers=((-1, 0), (1, 0), (0, 1.5)), noise=0.6, seed=3)
    names = np.array(["zebra", "ant", "moth"])
    cfg = FitConfig(layers=[32], seed=2)
    a = run_classification(X, y, folds=4, depths=(1, 2), width=32, cfg=cfg)
    b = run_classification(X, names[y], folds=4, depths=(1, 2), width=32, cfg=cfg)
    np.testing.assert_array_equal(a.folds, b.folds)
    assert [r.value for r in a.rows] == [r.value for r in b.rows]


def test_classification_best_depth_is_argmax():
    X, y = blobs(n_per_class=30, noise=2.5, seed=5)
    report = run_classification(X, y, folds=3, depths=(1, 2, 3), width=16, cfg=FitConfig(layers=[16]))
    best = max(report.mean_accuracy.values())
    assert report.mean_accuracy[report.best_depth] == best


def test_timing_small_scale_report():
    report = timing_scaling([100], [2000, 4000, 8000], repeats=3, dim=2)
    assert report.sizes == [2000, 4000, 8000]
    assert len(report.medians) == 3 and len(report.ratios) == 2
    assert all(len(v) == 3 for v in report.samples.values())


def test_timing_rejects_bad_setup():
    with pytest.raises(ValueError):
        timing_scaling([500], [1000, 2000, 4000])
    with pytest.raises(ValueError):
        timing_scaling([10], [1000, 2000])
    with pytest.raises(ValueError):
        timing_scaling([2], [20, 40, 80], repeats=3)


def test_invariant_target_end_to_end():
    rng = np.random.default_rng(21)
    X = rng.uniform(-1, 1, size=(120, 3))
    y = np.sin(2 * X[:, 0]) + X[:, 1] * X[:, 2]
    H = RigidTransform.random(3, rng, scale=0.5)
    cfg = FitConfig(layers=[20, 15], activation="tanh", ridge_lambda=1e-8, seed=3)
    net = fit(X, y, cfg)
    moved = fit(H(X), y, cfg, pairs=net.pair_indices)
    probe = rng.uniform(-1, 1, size=(300, 3))
    assert np.max(np.abs(forward(net, probe) - forward(moved, H(probe)))) <= 1e-8
