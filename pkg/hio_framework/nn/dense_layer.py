from dataclasses import dataclass

import numpy as np

from hio_framework.nn.activation import Activation
from hio_framework.system.errors import ArchitectureError, NumericError


@dataclass
class DenseLayer:
    weights: np.ndarray
    bias: np.ndarray
    activation: Activation = Activation.RELU

    def __post_init__(self):
        self.weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        self.bias = np.ascontiguousarray(self.bias, dtype=np.float64)
        self.activation = Activation(self.activation)
        if self.weights.ndim != 2:
            raise ArchitectureError("weights must be a fan_in x fan_out matrix")
        if self.bias.shape != (self.fan_out,):
            raise ArchitectureError(
                f"bias shape {self.bias.shape} does not match fan_out {self.fan_out}"
            )
        if not self.is_finite():
            raise NumericError("layer parameters must be finite")

    @property
    def fan_in(self) -> int:
        return self.weights.shape[0]

    @property
    def fan_out(self) -> int:
        return self.weights.shape[1]

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.weights).all() and np.isfinite(self.bias).all())

    def copy(self) -> "DenseLayer":
        return DenseLayer(self.weights.copy(), self.bias.copy(), self.activation)
