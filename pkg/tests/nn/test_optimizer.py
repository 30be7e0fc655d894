import numpy as np
import pytest

from hio_framework.nn.dense_layer import DenseLayer
from hio_framework.nn.gradients import Gradients, backward
from hio_framework.nn.mlp import Mlp, init_mlp
from hio_framework.nn.optimizer import iterate_batches, sgd_step
from hio_framework.nn.snapshot import snapshot
from hio_framework.nn.train_config import TrainConfig
from hio_framework.system.errors import ConfigError, NumericError, ShapeError


def test_zero_gradients_leave_parameters_bit_identical():
    mlp = init_mlp([5, 4, 3], seed=1)
    before = snapshot(mlp)
    sgd_step(mlp, Gradients.zeros_like(mlp), 0.5)
    assert before.equals(mlp)


def test_zero_learning_rate_leaves_parameters_unchanged():
    mlp = init_mlp([5, 4, 3], seed=1)
    before = snapshot(mlp)
    grads = backward(mlp, np.ones((2, 5)), [0, 1])
    sgd_step(mlp, grads, 0.0)
    for saved, layer in zip(before.weights, mlp.layers):
        assert np.array_equal(saved, layer.weights)


def test_single_parameter_descent_arithmetic():
    mlp = Mlp([DenseLayer(np.array([[1.0]]), np.array([0.0]))])
    grads = Gradients([np.array([[2.0]])], [np.array([0.0])])
    sgd_step(mlp, grads, 0.1)
    assert mlp.layers[0].weights[0, 0] == pytest.approx(0.8)


def test_non_finite_gradient_is_rejected_without_update():
    mlp = init_mlp([3, 2], seed=0)
    before = snapshot(mlp)
    grads = Gradients.zeros_like(mlp)
    grads.weight_grads[0][0, 0] = np.nan
    with pytest.raises(NumericError):
        sgd_step(mlp, grads, 0.1)
    assert before.equals(mlp)


def test_incongruent_gradient_is_rejected():
    mlp = init_mlp([3, 2], seed=0)
    with pytest.raises(ShapeError):
        sgd_step(mlp, Gradients.zeros_like(init_mlp([3, 4, 2], seed=0)), 0.1)


def test_repeated_training_is_deterministic():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(10, 4))
    y = rng.integers(0, 3, size=10)
    trained = []
    for _ in range(2):
        mlp = init_mlp([4, 5, 3], seed=42)
        for _ in range(25):
            sgd_step(mlp, backward(mlp, x, y), 0.05)
        trained.append(snapshot(mlp))
    first, second = trained
    for a, b in zip(first.weights + first.biases, second.weights + second.biases):
        assert a.tobytes() == b.tobytes()


def test_full_batch_draws_no_randomness():
    rng = np.random.default_rng(0)
    state = rng.bit_generator.state
    batches = list(iterate_batches(7, None, rng))
    assert len(batches) == 1 and list(batches[0]) == list(range(7))
    assert rng.bit_generator.state == state


def test_mini_batches_cover_every_row_once():
    batches = list(iterate_batches(10, 3, np.random.default_rng(1)))
    assert [len(b) for b in batches] == [3, 3, 3, 1]
    assert sorted(np.concatenate(batches).tolist()) == list(range(10))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"learning_rate": 0.0},
        {"learning_rate": -1.0},
        {"checkpoint_interval_epochs": 0},
        {"batch_size": 0},
        {"rng_seed": -1},
    ],
)
def test_invalid_train_config_is_rejected(kwargs):
    with pytest.raises(ConfigError):
        TrainConfig(**kwargs)
