import numpy as np
import pytest

from hio_framework.nn.activation import Activation
from hio_framework.nn.dense_layer import DenseLayer
from hio_framework.nn.mlp import (
    Mlp,
    forward,
    init_mlp,
    pop_last_layer,
    predict_classes,
    trace_forward,
)
from hio_framework.system.errors import ArchitectureError, ShapeError


def test_same_seed_gives_bit_identical_networks():
    a = init_mlp([11, 5, 5, 5, 3], seed=7)
    b = init_mlp([11, 5, 5, 5, 3], seed=7)
    for layer_a, layer_b in zip(a.layers, b.layers):
        assert layer_a.weights.tobytes() == layer_b.weights.tobytes()
        assert layer_a.bias.tobytes() == layer_b.bias.tobytes()


def test_single_layer_network_has_forced_shape():
    mlp = init_mlp([4, 3], seed=123)
    assert len(mlp.layers) == 1
    assert mlp.layers[0].weights.shape == (4, 3)
    assert mlp.layers[0].activation is Activation.SOFTMAX


def test_passion_network_architecture():
    mlp = init_mlp([60, 5, 5, 5, 5, 3], seed=1)
    assert mlp.layer_sizes == [60, 5, 5, 5, 5, 3]
    assert [layer.activation for layer in mlp.layers[:-1]] == [Activation.RELU] * 4


def test_weights_lie_in_scaled_uniform_range_and_biases_are_zero():
    mlp = init_mlp([20, 10, 3], seed=3)
    for layer in mlp.layers:
        limit = np.sqrt(6.0 / (layer.fan_in + layer.fan_out))
        assert np.all(np.abs(layer.weights) <= limit)
        assert np.all(layer.bias == 0)


@pytest.mark.parametrize("sizes", [[], [4], [4, 0, 3], [4, -1], [4, 2.5]])
def test_invalid_architecture_is_rejected(sizes):
    with pytest.raises(ArchitectureError):
        init_mlp(sizes, seed=0)


def test_mismatched_layers_are_rejected():
    with pytest.raises(ArchitectureError):
        Mlp(
            [
                DenseLayer(np.zeros((4, 3)), np.zeros(3)),
                DenseLayer(np.zeros((2, 3)), np.zeros(3)),
            ]
        )


def test_softmax_output_sums_to_one():
    mlp = init_mlp([6, 5, 3], seed=11)
    rng = np.random.default_rng(0)
    probs = forward(mlp, rng.normal(size=(50, 6)) * 10)
    assert np.all(np.abs(probs.sum(axis=1) - 1.0) <= 1e-9)
    assert np.all((probs >= 0) & (probs <= 1))


def test_zero_network_gives_uniform_output():
    layer = DenseLayer(np.zeros((4, 3)), np.zeros(3), Activation.SOFTMAX)
    probs = forward(Mlp([layer]), np.array([1.0, -2.0, 3.0, 0.5]))
    assert np.allclose(probs, [1 / 3, 1 / 3, 1 / 3], atol=1e-15)


def test_forward_matches_per_element_oracle():
    mlp = init_mlp([3, 4, 2], seed=5)
    x = [0.5, -1.0, 2.0]
    hidden = []
    first = mlp.layers[0]
    for j in range(4):
        z = sum(x[i] * first.weights[i, j] for i in range(3)) + first.bias[j]
        hidden.append(max(z, 0.0))
    second = mlp.layers[1]
    logits = [
        sum(hidden[i] * second.weights[i, j] for i in range(4)) + second.bias[j]
        for j in range(2)
    ]
    exps = [np.exp(v - max(logits)) for v in logits]
    expected = [e / sum(exps) for e in exps]
    assert np.allclose(forward(mlp, x), expected, rtol=1e-12, atol=1e-15)


def test_forward_rejects_wrong_width():
    mlp = init_mlp([3, 2], seed=0)
    with pytest.raises(ShapeError):
        forward(mlp, np.zeros(4))


def test_pop_last_layer_keeps_penultimate_trunk():
    mlp = init_mlp([8, 5, 5, 5, 3], seed=2)
    trunk = pop_last_layer(mlp)
    assert trunk.layer_sizes == [8, 5, 5, 5]
    assert trunk.output_width == 5
    assert trunk.output_activation is Activation.RELU


def test_trunk_output_equals_penultimate_activations():
    mlp = init_mlp([8, 5, 5, 3], seed=9)
    x = np.random.default_rng(1).normal(size=(7, 8))
    penultimate = trace_forward(mlp, x).outputs[-2]
    assert np.array_equal(forward(pop_last_layer(mlp), x), penultimate)


def test_popping_a_single_layer_network_fails():
    trunk = pop_last_layer(init_mlp([4, 5, 3], seed=0))
    with pytest.raises(ArchitectureError):
        pop_last_layer(trunk)


def test_predicted_classes_are_the_argmax_of_a_batch():
    mlp = init_mlp([6, 5, 3], seed=4)
    x = np.random.default_rng(2).normal(size=(9, 6))
    classes = predict_classes(mlp, x)
    assert classes.shape == (9,)
    assert np.array_equal(classes, np.argmax(forward(mlp, x), axis=1))
    assert predict_classes(mlp, x[0]).tolist() == [classes[0]]
