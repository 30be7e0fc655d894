from enum import Enum

import numpy as np


class Activation(str, Enum):
    RELU = "relu"
    SOFTMAX = "softmax"
    IDENTITY = "identity"


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    exps = np.exp(shifted)
    return exps / exps.sum(axis=-1, keepdims=True)


def activate(activation: Activation, z: np.ndarray) -> np.ndarray:
    if activation is Activation.RELU:
        return np.maximum(z, 0.0)
    if activation is Activation.SOFTMAX:
        return softmax(z)
    return z


def activation_backward(
    activation: Activation, z: np.ndarray, a: np.ndarray, grad_a: np.ndarray
) -> np.ndarray:
    if activation is Activation.RELU:
        return grad_a * (z > 0)
    if activation is Activation.SOFTMAX:
        return a * (grad_a - np.sum(grad_a * a, axis=-1, keepdims=True))
    return grad_a
