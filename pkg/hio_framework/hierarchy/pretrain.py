import logging

import numpy as np

from hio_framework.dataset.sample import Trait
from hio_framework.hierarchy.checkpoint import CheckpointTracker
from hio_framework.hierarchy.evaluation import Evaluation, evaluate_probs
from hio_framework.hierarchy.task_data import TaskData
from hio_framework.nn.gradients import backward
from hio_framework.nn.mlp import Mlp, forward
from hio_framework.nn.optimizer import iterate_batches, sgd_step
from hio_framework.nn.train_config import TrainConfig
from hio_framework.system.errors import DataError

_logger = logging.getLogger(__name__)


def fit_classifier(
    net: Mlp,
    train_x: np.ndarray,
    train_y: np.ndarray,
    validation_x: np.ndarray,
    validation_y: np.ndarray,
    config: TrainConfig,
    select_by_accuracy: bool = False,
) -> tuple[Mlp, Evaluation]:
    """SGD on summed cross-entropy with checkpoint retention on the validation rows.

    Trains a copy; net itself is left untouched. The returned evaluation is the
    validation score of the retained checkpoint.
    """
    if len(train_x) == 0:
        raise DataError("cannot train on empty data")
    if len(validation_x) == 0:
        raise DataError("cannot checkpoint without validation rows")
    net = net.copy()
    if config.epochs == 0:
        return net, evaluate_probs(forward(net, validation_x), validation_y)

    rng = np.random.default_rng(config.rng_seed)
    tracker = CheckpointTracker(
        config.checkpoint_interval_epochs,
        config.epochs,
        higher_is_better=select_by_accuracy,
    )
    best = None
    for epoch in range(1, config.epochs + 1):
        for rows in iterate_batches(len(train_x), config.batch_size, rng):
            grads = backward(net, train_x[rows], train_y[rows])
            sgd_step(net, grads, config.learning_rate)
        if tracker.due(epoch):
            score = evaluate_probs(forward(net, validation_x), validation_y)
            key = score.accuracy if select_by_accuracy else score.loss
            if tracker.offer(epoch, key, net):
                best = score
    _logger.debug(
        "kept epoch %d of %d (score %.6g)",
        tracker.best_epoch,
        config.epochs,
        tracker.best_score,
    )
    return tracker.best_model, best


def pretrain_subtask(
    net: Mlp, data: TaskData, validation: TaskData, trait: Trait, config: TrainConfig
) -> tuple[Mlp, float]:
    if len(data) == 0:
        raise DataError(f"no rows to pretrain {Trait(trait).value}")
    trained, score = fit_classifier(
        net,
        data.features,
        data.labels_for(trait),
        validation.features,
        validation.labels_for(trait),
        config,
    )
    _logger.info(
        "pretrained %s: validation loss %.4f, accuracy %.3f",
        Trait(trait).value,
        score.loss,
        score.accuracy,
    )
    return trained, score.loss
