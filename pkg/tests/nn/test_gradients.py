import numpy as np
import pytest

from hio_framework.nn.gradients import backward
from hio_framework.nn.loss import cross_entropy_loss
from hio_framework.nn.mlp import forward, init_mlp
from hio_framework.system.errors import ShapeError

STEP = 1e-5


def numerical_gradient(mlp, x, y, layer_index, kind, position):
    layer = mlp.layers[layer_index]
    array = layer.weights if kind == "W" else layer.bias
    original = array[position]
    array[position] = original + STEP
    loss_plus = cross_entropy_loss(forward(mlp, x), y)
    array[position] = original - STEP
    loss_minus = cross_entropy_loss(forward(mlp, x), y)
    array[position] = original
    return (loss_plus - loss_minus) / (2 * STEP)


def relative_error(analytic, numeric):
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-6)


def test_analytic_gradients_match_central_differences():
    rng = np.random.default_rng(2024)
    mlp = init_mlp([4, 5, 3], seed=17)
    x = rng.normal(size=(5, 4))
    y = rng.integers(0, 3, size=5)
    grads = backward(mlp, x, y)
    candidates = []
    for index, layer in enumerate(mlp.layers):
        candidates += [(index, "W", pos) for pos in np.ndindex(layer.weights.shape)]
        candidates += [(index, "b", pos) for pos in np.ndindex(layer.bias.shape)]
    picks = rng.choice(len(candidates), size=20, replace=False)
    for pick in picks:
        index, kind, position = candidates[pick]
        source = grads.weight_grads if kind == "W" else grads.bias_grads
        analytic = source[index][position]
        numeric = numerical_gradient(mlp, x, y, index, kind, position)
        assert relative_error(analytic, numeric) < 1e-4, (index, kind, position)


def test_zero_input_gives_zero_first_layer_weight_gradient():
    mlp = init_mlp([4, 5, 3], seed=1)
    grads = backward(mlp, np.zeros((3, 4)), [0, 1, 2])
    assert np.all(grads.weight_grads[0] == 0)


def test_duplicated_batch_doubles_every_gradient():
    rng = np.random.default_rng(8)
    mlp = init_mlp([4, 5, 3], seed=3)
    x = rng.normal(size=(4, 4))
    y = np.array([0, 1, 2, 1])
    single = backward(mlp, x, y)
    doubled = backward(mlp, np.vstack([x, x]), np.concatenate([y, y]))
    pairs = zip(
        single.weight_grads + single.bias_grads,
        doubled.weight_grads + doubled.bias_grads,
    )
    for a, b in pairs:
        assert np.allclose(2 * a, b, rtol=1e-10, atol=1e-12)


def test_gradients_are_shape_congruent():
    mlp = init_mlp([6, 4, 4, 3], seed=0)
    grads = backward(mlp, np.ones((2, 6)), [0, 2])
    grads.check_congruent(mlp)
    assert [g.shape for g in grads.weight_grads] == [(6, 4), (4, 4), (4, 3)]


def test_backward_rejects_mismatched_labels():
    mlp = init_mlp([4, 3], seed=0)
    with pytest.raises(ShapeError):
        backward(mlp, np.ones((2, 4)), [0, 1, 2])
