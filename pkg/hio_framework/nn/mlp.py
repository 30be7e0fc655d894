from dataclasses import dataclass, field

import numpy as np

from hio_framework.nn.activation import Activation, activate
from hio_framework.nn.dense_layer import DenseLayer
from hio_framework.system.errors import ArchitectureError, ShapeError


@dataclass
class Mlp:
    layers: list[DenseLayer]

    def __post_init__(self):
        if not self.layers:
            raise ArchitectureError("an Mlp needs at least one layer")
        for index, (layer, following) in enumerate(zip(self.layers, self.layers[1:])):
            if layer.fan_out != following.fan_in:
                raise ArchitectureError(
                    f"layer {index} fan_out {layer.fan_out} does not match "
                    f"layer {index + 1} fan_in {following.fan_in}"
                )

    @property
    def layer_sizes(self) -> list[int]:
        return [self.layers[0].fan_in] + [layer.fan_out for layer in self.layers]

    @property
    def input_width(self) -> int:
        return self.layers[0].fan_in

    @property
    def output_width(self) -> int:
        return self.layers[-1].fan_out

    @property
    def output_activation(self) -> Activation:
        return self.layers[-1].activation

    @property
    def parameter_count(self) -> int:
        return sum(layer.weights.size + layer.bias.size for layer in self.layers)

    def is_finite(self) -> bool:
        return all(layer.is_finite() for layer in self.layers)

    def copy(self) -> "Mlp":
        return Mlp([layer.copy() for layer in self.layers])


@dataclass
class ForwardTrace:
    inputs: list[np.ndarray] = field(default_factory=list)
    pre_activations: list[np.ndarray] = field(default_factory=list)
    outputs: list[np.ndarray] = field(default_factory=list)

    @property
    def output(self) -> np.ndarray:
        return self.outputs[-1]


def init_mlp(
    layer_sizes: list[int],
    hidden_activation: Activation = Activation.RELU,
    output_activation: Activation = Activation.SOFTMAX,
    seed: int = 0,
) -> Mlp:
    sizes = list(layer_sizes)
    if len(sizes) < 2:
        raise ArchitectureError(f"need at least input and output sizes, got {sizes}")
    if any(int(size) != size or size < 1 for size in sizes):
        raise ArchitectureError(f"layer sizes must be positive integers, got {sizes}")
    if seed < 0:
        raise ArchitectureError(f"seed must be non-negative, got {seed}")
    rng = np.random.default_rng(seed)
    layers = []
    for index, (fan_in, fan_out) in enumerate(zip(sizes, sizes[1:])):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights = rng.uniform(-limit, limit, size=(int(fan_in), int(fan_out)))
        is_last = index == len(sizes) - 2
        activation = output_activation if is_last else hidden_activation
        layers.append(DenseLayer(weights, np.zeros(int(fan_out)), activation))
    return Mlp(layers)


def as_batch(mlp: Mlp, x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = np.atleast_2d(x)
    if batch.ndim != 2 or batch.shape[1] != mlp.input_width:
        raise ShapeError(
            f"input width {batch.shape[-1]} does not match fan_in {mlp.input_width}"
        )
    return batch, single


def trace_forward(mlp: Mlp, x_batch) -> ForwardTrace:
    batch, _ = as_batch(mlp, x_batch)
    trace = ForwardTrace()
    current = batch
    for layer in mlp.layers:
        z = current @ layer.weights + layer.bias
        a = activate(layer.activation, z)
        trace.inputs.append(current)
        trace.pre_activations.append(z)
        trace.outputs.append(a)
        current = a
    return trace


def forward(mlp: Mlp, x) -> np.ndarray:
    batch, single = as_batch(mlp, x)
    current = batch
    for layer in mlp.layers:
        current = activate(layer.activation, current @ layer.weights + layer.bias)
    return current[0] if single else current


def predict_classes(mlp: Mlp, x_batch) -> np.ndarray:
    return np.argmax(np.atleast_2d(forward(mlp, x_batch)), axis=1)


def pop_last_layer(mlp: Mlp) -> Mlp:
    if len(mlp.layers) < 2:
        raise ArchitectureError("cannot pop the only layer of a network")
    return Mlp([layer.copy() for layer in mlp.layers[:-1]])
