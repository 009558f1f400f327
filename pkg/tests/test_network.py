import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swimnet.network import (
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


def constant_net(values, input_dim=1):
    """Network whose output is the constant row ``values``."""
    values = np.asarray(values, dtype=float)
    layer = LayerParams(np.ones((1, input_dim)), np.zeros(1))
    return SampledNetwork(input_dim, [layer], Activation.from_kind("relu"),
                          output_weights=np.zeros((len(values), 1)), output_bias=-values)


def test_activation_constants():
    relu, tanh, sine = (Activation.from_kind(k) for k in ("relu", "tanh", "sine"))
    assert (relu.s1, relu.s2) == (1.0, 0.0)
    assert tanh.s1 == pytest.approx(math.log(3)) and tanh.s2 == pytest.approx(math.log(3) / 2)
    assert (sine.s1, sine.s2) == (math.pi / 3, math.pi / 6)
    assert Activation.from_kind("tanh", s1=2.0).s1 == 2.0
    with pytest.raises(ValueError):
        Activation.from_kind("gelu")


def test_weight_from_pair_relu_hand_value():
    w, b = weight_from_pair([0.0, 0.0], [2.0, 0.0], Activation.from_kind("relu"))
    np.testing.assert_array_equal(w, [0.5, 0.0])
    assert b == 0.0


def test_weight_from_pair_tanh_values():
    act = Activation.from_kind("tanh")
    w, b = weight_from_pair([0.0], [1.0], act)
    assert w[0] == pytest.approx(math.log(3), abs=1e-15)
    assert b == pytest.approx(math.log(3) / 2, abs=1e-15)
    assert math.tanh(w[0] * 0 - b) == pytest.approx(-0.5, abs=1e-15)
    assert math.tanh(w[0] * 1 - b) == pytest.approx(0.5, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=6, max_size=6))
def test_relu_pair_maps_to_zero_and_one(coords):
    x1, x2 = np.array(coords[:3]), np.array(coords[3:])
    if np.linalg.norm(x2 - x1) < 1e-3:
        return
    act = Activation.from_kind("relu")
    w, b = weight_from_pair(x1, x2, act)
    assert act(w @ x1 - b) == pytest.approx(0.0, abs=1e-12)
    assert act(w @ x2 - b) == pytest.approx(1.0, abs=1e-12)


def test_weight_from_identical_pair_rejected():
    with pytest.raises(ValueError, match="identical"):
        weight_from_pair([1.0, 2.0], [1.0, 2.0], Activation.from_kind("relu"))


def test_layer_rejects_zero_row():
    with pytest.raises(ValueError, match="zero weight row"):
        LayerParams(np.array([[1.0, 0.0], [0.0, 0.0]]), np.zeros(2))


def test_network_rejects_broken_chain():
    l1 = LayerParams(np.ones((3, 2)), np.zeros(3))
    l2 = LayerParams(np.ones((2, 4)), np.zeros(2))
    with pytest.raises(ValueError, match="layer 2"):
        SampledNetwork(2, [l1, l2], Activation.from_kind("relu"))


def test_forward_hidden_layer_zero_is_identity():
    X = np.array([[1.5, -2.0], [0.25, 3.0]])
    net = SampledNetwork(2, [LayerParams(np.ones((1, 2)), [0.0])], Activation.from_kind("relu"))
    np.testing.assert_array_equal(forward_hidden(net, X, 0), X)


def test_forward_hidden_relu_clamps():
    net = SampledNetwork(2, [LayerParams([[1.0, 0.0]], [0.0])], Activation.from_kind("relu"))
    np.testing.assert_array_equal(forward_hidden(net, [[-1.0, 5.0]], 1), [[0.0]])


def test_forward_hidden_tanh_midpoint_is_zero():
    net = SampledNetwork(1, [LayerParams([[math.log(3)]], [math.log(3) / 2])], Activation.from_kind("tanh"))
    assert forward_hidden(net, [[0.5]], 1)[0, 0] == pytest.approx(0.0, abs=1e-15)


def test_forward_width_mismatch():
    net = constant_net([1.0], input_dim=2)
    with pytest.raises(ValueError, match="expected 2 input columns"):
        forward(net, np.ones((3, 3)))
    with pytest.raises(ValueError):
        forward_hidden(net, np.ones((3, 2)), 5)


def test_forward_constant_map():
    out = forward(constant_net([3.0]), np.random.default_rng(0).normal(size=(4, 1)))
    np.testing.assert_array_equal(out, np.full((4, 1), 3.0))


def test_forward_matches_manual_composition():
    rng = np.random.default_rng(1)
    l1 = LayerParams(rng.normal(size=(4, 3)), rng.normal(size=4))
    l2 = LayerParams(rng.normal(size=(2, 4)), rng.normal(size=2))
    Wo, bo = rng.normal(size=(1, 2)), rng.normal(size=1)
    net = SampledNetwork(3, [l1, l2], Activation.from_kind("tanh"), Wo, bo)
    X = rng.normal(size=(5, 3))
    h = np.tanh(X @ l1.weights.T - l1.biases)
    h = np.tanh(h @ l2.weights.T - l2.biases)
    np.testing.assert_allclose(forward(net, X), h @ Wo.T - bo, atol=1e-14)


@pytest.mark.parametrize(
    "row, expected",
    [((0.1, 0.9), 1), ((0.5, 0.5), 0), ((0.2, 0.7, 0.1), 1)],
)
def test_predict_classes(row, expected):
    assert predict_classes(constant_net(row), [[0.0]])[0] == expected


def test_predict_classes_untrained_rejected():
    net = SampledNetwork(1, [LayerParams([[1.0]], [0.0])], Activation.from_kind("relu"))
    with pytest.raises(ValueError, match="no output layer"):
        predict_classes(net, [[0.0]])


def test_predict_labels_uses_dictionary():
    net = constant_net([0.0, 2.0, 1.0])
    net.labels = ["cat", "dog", "eel"]
    assert predict_labels(net, [[0.0], [1.0]]) == ["dog", "dog"]


def test_constant_block_coefficients():
    blk = ConstantBlock(c=2.0, c1=-1.0, c2=0.5, c3=2.0)
    assert blk.a1 == pytest.approx(2.0 / 1.5)
    assert blk.a2 == pytest.approx(blk.a1 * (-3.0) / (-1.5))
    assert blk.a3 == pytest.approx(blk.a2 - blk.a1)
    # Continuity of the ramp at both ends.
    assert blk.a3 * blk.c1 + blk.d == pytest.approx(0.0, abs=1e-14)
    assert blk.a3 * blk.c2 + blk.d == pytest.approx(blk.c, abs=1e-14)


def test_constant_block_hand_value():
    # f1 = 1*relu(3-1) = 2, f3 = -1*relu(3-2) = -1, the rest vanish.
    assert constant_block_eval(ConstantBlock(1.0, 0.0, 1.0, 2.0), 3.0) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("x", [-5.0, -0.5, 0.0])
def test_constant_block_zero_below_c1(x):
    assert constant_block_eval(ConstantBlock(1.5, 0.0, 1.0, 2.0), x) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("x", [1.0001, 1.5, 2.0, 7.0])
def test_constant_block_constant_above_c2(x):
    assert constant_block_eval(ConstantBlock(1.5, 0.0, 1.0, 2.0), x) == pytest.approx(1.5, abs=1e-14)


def test_constant_block_rejects_unordered():
    with pytest.raises(ValueError):
        ConstantBlock(1.0, 0.0, 2.0, 1.0)


def test_literal_appendix_neurons_miss_the_closed_form():
    # Neurons f4 = -a2 relu(-(x-c1)) and f5 = a3 relu(x-c1), as printed, do
    # not vanish below c1; this is why the block uses the corrected pair.
    blk = ConstantBlock(1.0, 0.0, 1.0, 2.0)
    relu = lambda z: max(z, 0.0)

    def literal(x):
        return (blk.a1 * relu(x - blk.c2) + blk.a1 * relu(-(x - blk.c3)) - blk.a1 * relu(x - blk.c3)
                - blk.a2 * relu(-(x - blk.c1)) + blk.a3 * relu(x - blk.c1))

    assert abs(literal(-1.0) - blk.closed_form(-1.0)) > 0.1


@settings(max_examples=60, deadline=None)
@given(
    c=st.floats(-3, 3).filter(lambda v: abs(v) > 1e-3),
    c1=st.floats(-3, 3),
    g1=st.floats(0.2, 2),
    g2=st.floats(0.2, 2),
)
def test_constant_block_matches_closed_form(c, c1, g1, g2):
    blk = ConstantBlock(c, c1, c1 + g1, c1 + g1 + g2)
    x = np.linspace(blk.c1 - 1, blk.c3 + 1, 1000)
    assert np.max(np.abs(constant_block_eval(blk, x) - blk.closed_form(x))) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_relu_positive_homogeneity(seed):
    rng = np.random.default_rng(seed)
    W, b = rng.normal(size=(6, 3)), rng.normal(size=6)
    Wo, bo = rng.normal(size=(2, 6)), rng.normal(size=2)
    net = SampledNetwork(3, [LayerParams(W, b)], Activation.from_kind("relu"), Wo, bo)
    omega = rng.uniform(1e-3, 10, size=6)
    scaled = SampledNetwork(3, [LayerParams(W * omega[:, None], b * omega)], Activation.from_kind("relu"),
                            Wo / omega, bo)
    X = rng.uniform(-2, 2, size=(200, 3))
    np.testing.assert_allclose(forward(scaled, X), forward(net, X), rtol=0, atol=1e-12)
