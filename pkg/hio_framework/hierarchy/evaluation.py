from dataclasses import dataclass

import numpy as np
from sklearn.metrics import accuracy_score

from hio_framework.nn.loss import cross_entropy_loss


@dataclass(frozen=True)
class Evaluation:
    loss: float
    accuracy: float


def evaluate_probs(probs: np.ndarray, labels: np.ndarray) -> Evaluation:
    probs = np.atleast_2d(probs)
    return Evaluation(
        loss=cross_entropy_loss(probs, labels),
        accuracy=float(accuracy_score(labels, np.argmax(probs, axis=1))),
    )
