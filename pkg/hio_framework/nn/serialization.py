from pathlib import Path

import numpy as np

from hio_framework.nn.dense_layer import DenseLayer
from hio_framework.nn.mlp import Mlp
from hio_framework.system.errors import ShapeError

FORMAT_VERSION = 1


def save_mlp(mlp: Mlp, path) -> Path:
    path = Path(path)
    arrays = {
        "format_version": np.array(FORMAT_VERSION),
        "layer_sizes": np.array(mlp.layer_sizes, dtype=np.int64),
        "activations": np.array([layer.activation.value for layer in mlp.layers]),
    }
    for index, layer in enumerate(mlp.layers):
        arrays[f"W{index}"] = np.ascontiguousarray(layer.weights, dtype=np.float64)
        arrays[f"b{index}"] = np.ascontiguousarray(layer.bias, dtype=np.float64)
    with path.open("wb") as handle:
        np.savez(handle, **arrays)
    return path


def load_mlp(path) -> Mlp:
    with np.load(Path(path), allow_pickle=False) as archive:
        sizes = archive["layer_sizes"].tolist()
        activations = archive["activations"].tolist()
        layers = []
        for index, activation in enumerate(activations):
            layer = DenseLayer(archive[f"W{index}"], archive[f"b{index}"], activation)
            if (layer.fan_in, layer.fan_out) != (sizes[index], sizes[index + 1]):
                raise ShapeError(f"{path}: layer {index} does not match layer_sizes")
            layers.append(layer)
    return Mlp(layers)
