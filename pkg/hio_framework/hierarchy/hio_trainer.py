import logging
from dataclasses import replace
from typing import Callable, Optional

import numpy as np

from hio_framework.dataset.sample import Trait
from hio_framework.hierarchy.checkpoint import CheckpointTracker
from hio_framework.hierarchy.evaluation import evaluate_probs
from hio_framework.hierarchy.gate import (
    GateConfig,
    GateDataSource,
    GateDecision,
    decide,
    next_reference,
)
from hio_framework.hierarchy.hier_model import (
    Architecture,
    HierModel,
    NetworkId,
    compose,
    end_to_end_step,
    forward_hier,
)
from hio_framework.hierarchy.pretrain import pretrain_subtask
from hio_framework.hierarchy.task_data import FoldData, TaskData
from hio_framework.hierarchy.trainer_state import EpochRecord, TrainerState, TrainingRun
from hio_framework.nn.loss import cross_entropy_loss
from hio_framework.nn.mlp import Mlp, forward, init_mlp
from hio_framework.nn.optimizer import iterate_batches
from hio_framework.nn.snapshot import restore, snapshot
from hio_framework.nn.train_config import TrainConfig, derive_seed
from hio_framework.system.errors import DataError, GateError
from hio_framework.system.events import EventPublisher, TrainingEvent

_logger = logging.getLogger(__name__)

# child seed streams under TrainConfig.rng_seed
PASSION_INIT, CREDIBILITY_INIT, PI_INIT, HEAD_INIT = 1, 2, 3, 4
PASSION_BATCHES, CREDIBILITY_BATCHES, PI_BATCHES = 11, 12, 13
COMPOSED_BATCHES = 20

StepFn = Callable[[HierModel, TaskData], None]


def _log_decision(decision: GateDecision):
    _logger.debug(
        "step %d %s: %.6g vs %.6g x %.6g -> %s",
        decision.step,
        decision.network_id.value,
        decision.candidate_loss,
        decision.epsilon,
        decision.reference_loss,
        "accept" if decision.accepted else "revert",
    )


def training_events(events: Optional[EventPublisher] = None) -> EventPublisher:
    events = events if events is not None else EventPublisher()
    events.subscribe(TrainingEvent.GATE_DECISION, __name__, _log_decision)
    return events


def check_gate_labels(gate_data: TaskData):
    for network_id in NetworkId:
        if not gate_data.has(network_id.trait):
            raise GateError(f"gate data has no {network_id.trait.value} labels")
    if len(gate_data) == 0:
        raise GateError("gate data is empty")


def imaginary_loss(net: Mlp, gate_data: TaskData, trait: Trait) -> float:
    return cross_entropy_loss(forward(net, gate_data.features), gate_data.labels[trait])


def gate_intermediates(
    model: HierModel,
    gate_data: TaskData,
    gate_cfg: GateConfig,
    state: TrainerState,
    events: Optional[EventPublisher] = None,
) -> list[GateDecision]:
    decisions = []
    for network_id in NetworkId:
        net = model.intermediate(network_id)
        decision = decide(
            network_id,
            state.step,
            imaginary_loss(net, gate_data, network_id.trait),
            state.references[network_id],
            gate_cfg.epsilon,
        )
        if not decision.accepted:
            restore(net, state.window_start[network_id])
        state.references[network_id] = next_reference(
            gate_cfg.reference_mode,
            decision,
            state.pretrained_references[network_id],
        )
        decisions.append(decision)
        if events is not None:
            events.publish(TrainingEvent.GATE_DECISION, decision)
    state.window_start = {}
    state.decisions.extend(decisions)
    return decisions


def hio_step(
    model: HierModel,
    batch: TaskData,
    gate_data: TaskData,
    gate_cfg: GateConfig,
    train_cfg: TrainConfig,
    state: TrainerState,
    events: Optional[EventPublisher] = None,
) -> tuple[HierModel, TrainerState, list[GateDecision]]:
    """Snapshot P and C, take one end-to-end step, then gate P and C.

    With gate_interval_steps > 1 the snapshot is taken at the start of a
    window and the gate runs on its last step.
    """
    check_gate_labels(gate_data)
    if not state.window_start:
        state.window_start = {
            network_id: snapshot(model.intermediate(network_id), state.step)
            for network_id in NetworkId
        }
    end_to_end_step(
        model,
        batch.features,
        batch.labels_for(Trait.PERSUASION),
        train_cfg.learning_rate,
    )
    state.step += 1
    if state.step % gate_cfg.gate_interval_steps != 0:
        return model, state, []
    return model, state, gate_intermediates(model, gate_data, gate_cfg, state, events)


def epoch_record(model: HierModel, epoch: int, fold: FoldData) -> EpochRecord:
    train = fold.train
    train_loss = cross_entropy_loss(
        forward_hier(model, train.features), train.labels_for(Trait.PERSUASION)
    )
    validation = fold.validation
    persuasion = evaluate_probs(
        forward_hier(model, validation.features),
        validation.labels_for(Trait.PERSUASION),
    )
    subtasks = {}
    for network_id in NetworkId:
        trait = network_id.trait
        if validation.has(trait):
            score = evaluate_probs(
                forward(model.intermediate(network_id), validation.features),
                validation.labels[trait],
            )
            subtasks[f"{trait.value}_loss"] = score.loss
            subtasks[f"{trait.value}_accuracy"] = score.accuracy
    return EpochRecord(
        epoch=epoch,
        train_loss=train_loss,
        validation_loss=persuasion.loss,
        validation_accuracy=persuasion.accuracy,
        **subtasks,
    )


def train_composed(
    model: HierModel,
    fold: FoldData,
    train_cfg: TrainConfig,
    state: TrainerState,
    step: StepFn,
    events: EventPublisher,
    close_window: Optional[Callable[[], None]] = None,
) -> HierModel:
    rng = np.random.default_rng(derive_seed(train_cfg.rng_seed, COMPOSED_BATCHES))
    tracker = CheckpointTracker(train_cfg.checkpoint_interval_epochs, train_cfg.epochs)
    state.checkpoint = tracker
    if train_cfg.epochs == 0:
        record = epoch_record(model, 0, fold)
        state.history.append(record)
        tracker.offer(0, record.validation_accuracy, model)
        return tracker.best_model

    for epoch in range(1, train_cfg.epochs + 1):
        for rows in iterate_batches(len(fold.train), train_cfg.batch_size, rng):
            step(model, fold.train.rows(rows))
        if epoch == train_cfg.epochs and close_window is not None:
            close_window()
        record = epoch_record(model, epoch, fold)
        state.history.append(record)
        events.publish(TrainingEvent.EPOCH_END, record)
        # P and C inside an open gate window are not yet judged
        if state.window_start or not tracker.due(epoch):
            continue
        if tracker.offer(epoch, record.validation_accuracy, model):
            events.publish(TrainingEvent.CHECKPOINT, record)
    _logger.info(
        "fold %d: best validation accuracy %.3f at epoch %d",
        fold.fold_index,
        tracker.best_score,
        tracker.best_epoch,
    )
    return tracker.best_model


def pretrain_and_compose(
    fold: FoldData,
    architecture: Architecture,
    train_cfg: TrainConfig,
    pretrain_cfg: Optional[TrainConfig] = None,
) -> tuple[HierModel, dict[str, float]]:
    """Phases 1 and 2: pretrain P and C on their traits and Pi on persuasion,
    then compose them under a fresh head.
    """
    for trait in (Trait.PASSION, Trait.CREDIBILITY):
        if not fold.pretrain.has(trait):
            raise DataError(f"pretraining rows carry no {trait.value} labels")
    pretrain_cfg = pretrain_cfg or train_cfg
    base = train_cfg.rng_seed
    width = fold.width

    def pretrained(sizes, init_stream, batch_stream, data, trait):
        net = init_mlp(sizes, seed=derive_seed(base, init_stream))
        cfg = replace(pretrain_cfg, rng_seed=derive_seed(base, batch_stream))
        return pretrain_subtask(net, data, fold.validation, trait, cfg)

    intermediate_sizes = architecture.intermediate_sizes(width)
    passion_net, passion_loss = pretrained(
        intermediate_sizes, PASSION_INIT, PASSION_BATCHES, fold.pretrain, Trait.PASSION
    )
    credibility_net, credibility_loss = pretrained(
        intermediate_sizes,
        CREDIBILITY_INIT,
        CREDIBILITY_BATCHES,
        fold.pretrain,
        Trait.CREDIBILITY,
    )
    pi_net, pi_loss = pretrained(
        architecture.trunk_sizes(width),
        PI_INIT,
        PI_BATCHES,
        fold.train,
        Trait.PERSUASION,
    )
    model = compose(
        passion_net,
        credibility_net,
        pi_net,
        architecture.head_sizes(),
        seed=derive_seed(base, HEAD_INIT),
    )
    losses = {
        Trait.PASSION.value: passion_loss,
        Trait.CREDIBILITY.value: credibility_loss,
        Trait.PERSUASION.value: pi_loss,
    }
    return model, losses


def train_hio(
    fold: FoldData,
    gate_cfg: GateConfig,
    train_cfg: TrainConfig,
    architecture: Architecture = Architecture(),
    events: Optional[EventPublisher] = None,
    pretrain_cfg: Optional[TrainConfig] = None,
) -> tuple[HierModel, TrainingRun]:
    events = training_events(events)
    model, pretrain_losses = pretrain_and_compose(
        fold, architecture, train_cfg, pretrain_cfg
    )
    if gate_cfg.gate_data is GateDataSource.VALIDATION:
        gate_data = fold.validation
    else:
        gate_data = fold.train
    check_gate_labels(gate_data)
    state = TrainerState(
        references={
            network_id: imaginary_loss(
                model.intermediate(network_id), gate_data, network_id.trait
            )
            for network_id in NetworkId
        }
    )

    def step(current: HierModel, batch: TaskData):
        hio_step(current, batch, gate_data, gate_cfg, train_cfg, state, events)

    def close_window():
        if state.window_start:
            gate_intermediates(model, gate_data, gate_cfg, state, events)

    best = train_composed(model, fold, train_cfg, state, step, events, close_window)
    summary = state.gate_summary()
    if not gate_cfg.is_unbounded and state.decisions:
        if all(counts["reverted"] == 0 for counts in summary.values()):
            _logger.warning(
                "fold %d: gate at epsilon %g never reverted an update",
                fold.fold_index,
                gate_cfg.epsilon,
            )
    _logger.info("fold %d: gate summary %s", fold.fold_index, summary)
    return best, state.to_run(pretrain_losses)


def train_end_to_end(
    fold: FoldData,
    train_cfg: TrainConfig,
    architecture: Architecture = Architecture(),
    events: Optional[EventPublisher] = None,
    frozen_intermediates: bool = False,
    pretrain_cfg: Optional[TrainConfig] = None,
) -> tuple[HierModel, TrainingRun]:
    events = training_events(events)
    model, pretrain_losses = pretrain_and_compose(
        fold, architecture, train_cfg, pretrain_cfg
    )
    state = TrainerState(references={})

    def step(current: HierModel, batch: TaskData):
        end_to_end_step(
            current,
            batch.features,
            batch.labels_for(Trait.PERSUASION),
            train_cfg.learning_rate,
            frozen_intermediates=frozen_intermediates,
        )
        state.step += 1

    best = train_composed(model, fold, train_cfg, state, step, events)
    return best, state.to_run(pretrain_losses)
