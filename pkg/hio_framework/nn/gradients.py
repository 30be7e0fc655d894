from dataclasses import dataclass

import numpy as np

from hio_framework.nn.activation import activation_backward
from hio_framework.nn.loss import output_delta
from hio_framework.nn.mlp import ForwardTrace, Mlp, trace_forward
from hio_framework.system.errors import ShapeError


@dataclass
class Gradients:
    weight_grads: list[np.ndarray]
    bias_grads: list[np.ndarray]

    def check_congruent(self, mlp: Mlp):
        if len(self.weight_grads) != len(mlp.layers) or len(self.bias_grads) != len(
            mlp.layers
        ):
            raise ShapeError(
                f"{len(self.weight_grads)} gradient layers for a "
                f"{len(mlp.layers)}-layer network"
            )
        for index, (layer, d_w, d_b) in enumerate(
            zip(mlp.layers, self.weight_grads, self.bias_grads)
        ):
            if d_w.shape != layer.weights.shape or d_b.shape != layer.bias.shape:
                raise ShapeError(f"gradient shape mismatch at layer {index}")

    def is_finite(self) -> bool:
        return all(np.isfinite(d_w).all() for d_w in self.weight_grads) and all(
            np.isfinite(d_b).all() for d_b in self.bias_grads
        )

    def scaled(self, factor: float) -> "Gradients":
        return Gradients(
            [d_w * factor for d_w in self.weight_grads],
            [d_b * factor for d_b in self.bias_grads],
        )

    def norm(self) -> float:
        squares = sum(float(np.sum(g * g)) for g in self.weight_grads + self.bias_grads)
        return float(np.sqrt(squares))

    @classmethod
    def zeros_like(cls, mlp: Mlp) -> "Gradients":
        return cls(
            [np.zeros_like(layer.weights) for layer in mlp.layers],
            [np.zeros_like(layer.bias) for layer in mlp.layers],
        )


def backprop_trace(
    mlp: Mlp, trace: ForwardTrace, grad: np.ndarray, grad_is_pre_activation=False
) -> tuple[Gradients, np.ndarray]:
    """Backpropagates grad (w.r.t. the network output, or w.r.t. the last
    pre-activation when grad_is_pre_activation) through a recorded pass.

    Returns parameter gradients and dL/dx for the network input batch.
    """
    n_layers = len(mlp.layers)
    weight_grads: list[np.ndarray] = [None] * n_layers
    bias_grads: list[np.ndarray] = [None] * n_layers
    upstream = np.asarray(grad, dtype=np.float64)
    if upstream.shape != trace.output.shape:
        raise ShapeError(
            f"gradient shape {upstream.shape} does not match "
            f"output {trace.output.shape}"
        )
    for index in reversed(range(n_layers)):
        layer = mlp.layers[index]
        if index == n_layers - 1 and grad_is_pre_activation:
            delta = upstream
        else:
            delta = activation_backward(
                layer.activation,
                trace.pre_activations[index],
                trace.outputs[index],
                upstream,
            )
        weight_grads[index] = trace.inputs[index].T @ delta
        bias_grads[index] = delta.sum(axis=0)
        upstream = delta @ layer.weights.T
    return Gradients(weight_grads, bias_grads), upstream


def backward(mlp: Mlp, x_batch, y_batch) -> Gradients:
    trace = trace_forward(mlp, x_batch)
    if trace.output.shape[0] == 0:
        raise ShapeError("cannot backpropagate an empty batch")
    delta = output_delta(
        mlp.output_activation,
        trace.pre_activations[-1],
        trace.output,
        np.atleast_1d(y_batch),
    )
    gradients, _ = backprop_trace(mlp, trace, delta, grad_is_pre_activation=True)
    return gradients
