from dataclasses import dataclass

import numpy as np

from hio_framework.nn.mlp import Mlp
from hio_framework.system.errors import ShapeError


@dataclass(frozen=True)
class Snapshot:
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]
    step: int = 0

    def shapes(self) -> list[tuple]:
        return [(w.shape, b.shape) for w, b in zip(self.weights, self.biases)]

    def equals(self, mlp: Mlp) -> bool:
        layer_shapes = [(layer.weights.shape, layer.bias.shape) for layer in mlp.layers]
        if self.shapes() != layer_shapes:
            return False
        return all(
            w.tobytes() == layer.weights.tobytes()
            and b.tobytes() == layer.bias.tobytes()
            for w, b, layer in zip(self.weights, self.biases, mlp.layers)
        )


def snapshot(mlp: Mlp, step: int = 0) -> Snapshot:
    return Snapshot(
        tuple(layer.weights.copy() for layer in mlp.layers),
        tuple(layer.bias.copy() for layer in mlp.layers),
        step,
    )


def restore(mlp: Mlp, saved: Snapshot) -> Mlp:
    current = [(layer.weights.shape, layer.bias.shape) for layer in mlp.layers]
    if current != saved.shapes():
        raise ShapeError(
            f"snapshot shapes {saved.shapes()} do not fit network {current}"
        )
    for layer, weights, bias in zip(mlp.layers, saved.weights, saved.biases):
        layer.weights = weights.copy()
        layer.bias = bias.copy()
    return mlp
