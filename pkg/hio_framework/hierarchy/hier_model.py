from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from hio_framework.dataset.sample import Trait
from hio_framework.features.labels import N_CLASSES
from hio_framework.nn.activation import Activation
from hio_framework.nn.gradients import Gradients, backprop_trace
from hio_framework.nn.loss import cross_entropy_loss, output_delta
from hio_framework.nn.mlp import (
    Mlp,
    as_batch,
    forward,
    init_mlp,
    pop_last_layer,
    trace_forward,
)
from hio_framework.nn.optimizer import sgd_step
from hio_framework.system.errors import ArchitectureError, NumericError, ShapeError

MIN_HEAD_LAYERS = 2


class NetworkId(str, Enum):
    P = "P"
    C = "C"

    @property
    def trait(self) -> Trait:
        return Trait.PASSION if self is NetworkId.P else Trait.CREDIBILITY


def _hidden(sizes) -> tuple[int, ...]:
    sizes = tuple(int(size) for size in sizes)
    if any(size < 1 for size in sizes):
        raise ArchitectureError(f"hidden sizes must be positive, got {sizes}")
    return sizes


@dataclass(frozen=True)
class Architecture:
    intermediate_hidden: tuple[int, ...] = (5, 5, 5, 5)
    trunk_hidden: tuple[int, ...] = (5, 5, 5)
    head_hidden: tuple[int, ...] = (5, 5, 5)
    modality_hidden: tuple[int, ...] = (5, 5)
    fusion_hidden: tuple[int, ...] = (5,)
    n_classes: int = N_CLASSES

    def __post_init__(self):
        for name in (
            "intermediate_hidden",
            "trunk_hidden",
            "head_hidden",
            "modality_hidden",
            "fusion_hidden",
        ):
            object.__setattr__(self, name, _hidden(getattr(self, name)))
        if not self.trunk_hidden:
            raise ArchitectureError("the trunk network needs a hidden layer to pop to")
        if len(self.head_hidden) < MIN_HEAD_LAYERS - 1:
            raise ArchitectureError("the head needs 2 or more layers")
        if self.n_classes < 2:
            raise ArchitectureError(f"need at least 2 classes, got {self.n_classes}")

    def intermediate_sizes(self, input_width: int) -> list[int]:
        return [input_width, *self.intermediate_hidden, self.n_classes]

    def trunk_sizes(self, input_width: int) -> list[int]:
        return [input_width, *self.trunk_hidden, self.n_classes]

    def head_sizes(self) -> list[int]:
        head_input = 2 * self.n_classes + self.trunk_hidden[-1]
        return [head_input, *self.head_hidden, self.n_classes]

    def to_dict(self) -> dict:
        values = asdict(self)
        for name, value in values.items():
            if isinstance(value, tuple):
                values[name] = list(value)
        return values


@dataclass
class HierModel:
    """Persuasion network over two intermediate networks and a popped trunk.

    All three lower networks read the same fused feature vector; the head
    reads concat(P softmax, C softmax, trunk ReLU output).
    """

    passion_net: Mlp
    credibility_net: Mlp
    trunk: Mlp
    head: Mlp

    def __post_init__(self):
        inputs = {net.input_width for net in self.lower_nets}
        if len(inputs) != 1:
            raise ShapeError(f"lower networks read different widths {sorted(inputs)}")
        expected = sum(net.output_width for net in self.lower_nets)
        if self.head.input_width != expected:
            raise ShapeError(
                f"head input width {self.head.input_width} != concatenated "
                f"width {expected}"
            )
        if self.head.output_activation is not Activation.SOFTMAX:
            raise ArchitectureError("the head must end in a softmax")

    @property
    def lower_nets(self) -> tuple[Mlp, Mlp, Mlp]:
        return self.passion_net, self.credibility_net, self.trunk

    @property
    def input_width(self) -> int:
        return self.trunk.input_width

    def intermediate(self, network_id: NetworkId) -> Mlp:
        if NetworkId(network_id) is NetworkId.P:
            return self.passion_net
        return self.credibility_net

    def copy(self) -> "HierModel":
        return HierModel(
            self.passion_net.copy(),
            self.credibility_net.copy(),
            self.trunk.copy(),
            self.head.copy(),
        )

    def is_finite(self) -> bool:
        return all(net.is_finite() for net in (*self.lower_nets, self.head))


def compose(
    passion_net: Mlp, credibility_net: Mlp, pi_net: Mlp, head_sizes, seed: int
) -> HierModel:
    head_sizes = list(head_sizes)
    if len(head_sizes) < MIN_HEAD_LAYERS + 1:
        raise ArchitectureError(
            f"the head needs 2 or more layers, got sizes {head_sizes}"
        )
    trunk = pop_last_layer(pi_net)
    width = passion_net.output_width + credibility_net.output_width + trunk.output_width
    if head_sizes[0] != width:
        raise ShapeError(
            f"head input size {head_sizes[0]} != concatenated width {width}"
        )
    head = init_mlp(head_sizes, seed=seed)
    return HierModel(passion_net.copy(), credibility_net.copy(), trunk, head)


def head_input(model: HierModel, x_batch) -> np.ndarray:
    return np.hstack([forward(net, x_batch) for net in model.lower_nets])


def forward_hier(model: HierModel, x) -> np.ndarray:
    batch, single = as_batch(model.trunk, x)
    probs = forward(model.head, head_input(model, batch))
    return probs[0] if single else probs


@dataclass
class HierGradients:
    passion: Gradients
    credibility: Gradients
    trunk: Gradients
    head: Gradients

    def is_finite(self) -> bool:
        return all(
            grads.is_finite()
            for grads in (self.passion, self.credibility, self.trunk, self.head)
        )


def hier_backward(model: HierModel, x_batch, y_batch) -> tuple[HierGradients, float]:
    batch, _ = as_batch(model.trunk, x_batch)
    if batch.shape[0] == 0:
        raise ShapeError("cannot backpropagate an empty batch")
    lower_traces = [trace_forward(net, batch) for net in model.lower_nets]
    head_trace = trace_forward(model.head, np.hstack([t.output for t in lower_traces]))
    labels = np.atleast_1d(y_batch)
    loss = cross_entropy_loss(head_trace.output, labels)
    delta = output_delta(
        model.head.output_activation,
        head_trace.pre_activations[-1],
        head_trace.output,
        labels,
    )
    head_grads, input_grad = backprop_trace(
        model.head, head_trace, delta, grad_is_pre_activation=True
    )
    bounds = np.cumsum([0] + [net.output_width for net in model.lower_nets])
    lower_grads = [
        backprop_trace(net, trace, input_grad[:, bounds[i] : bounds[i + 1]])[0]
        for i, (net, trace) in enumerate(zip(model.lower_nets, lower_traces))
    ]
    return HierGradients(*lower_grads, head_grads), loss


def end_to_end_step(
    model: HierModel, x_batch, y_batch, learning_rate: float, frozen_intermediates=False
) -> float:
    """One plain SGD step on the persuasion loss through head, trunk, P and C.

    Returns the batch loss before the update. With frozen_intermediates P and
    C receive no update.
    """
    grads, loss = hier_backward(model, x_batch, y_batch)
    if not grads.is_finite():
        raise NumericError("non-finite gradient in the composed network")
    sgd_step(model.head, grads.head, learning_rate)
    sgd_step(model.trunk, grads.trunk, learning_rate)
    if not frozen_intermediates:
        sgd_step(model.passion_net, grads.passion, learning_rate)
        sgd_step(model.credibility_net, grads.credibility, learning_rate)
    return loss
