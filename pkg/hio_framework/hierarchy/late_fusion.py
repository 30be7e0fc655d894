import logging
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from hio_framework.dataset.sample import Trait
from hio_framework.hierarchy.hier_model import Architecture
from hio_framework.hierarchy.pretrain import fit_classifier
from hio_framework.hierarchy.task_data import FoldData
from hio_framework.hierarchy.trainer_state import TrainingRun
from hio_framework.nn.mlp import Mlp, forward, init_mlp
from hio_framework.nn.train_config import TrainConfig, derive_seed
from hio_framework.system.errors import ConfigError, DataError, ShapeError

_logger = logging.getLogger(__name__)

FUSION_STREAM = 100


@dataclass
class LateFusionModel:
    modality_nets: dict[str, Mlp]
    fusion: Mlp

    def __post_init__(self):
        if not self.modality_nets:
            raise ConfigError("late fusion needs at least one modality")
        self.modality_nets = dict(sorted(self.modality_nets.items()))
        width = sum(net.output_width for net in self.modality_nets.values())
        if self.fusion.input_width != width:
            raise ShapeError(f"fusion input width {self.fusion.input_width} != {width}")

    @property
    def modalities(self) -> tuple[str, ...]:
        return tuple(self.modality_nets)

    def copy(self) -> "LateFusionModel":
        return LateFusionModel(
            {name: net.copy() for name, net in self.modality_nets.items()},
            self.fusion.copy(),
        )


def build_late_fusion(
    modality_dims: Mapping[str, int],
    seed: int,
    architecture: Architecture = Architecture(),
) -> LateFusionModel:
    if not modality_dims:
        raise ConfigError("late fusion needs at least one modality")
    n_classes = architecture.n_classes
    nets = {
        name: init_mlp(
            [width, *architecture.modality_hidden, n_classes],
            seed=derive_seed(seed, index),
        )
        for index, (name, width) in enumerate(sorted(modality_dims.items()))
    }
    fusion = init_mlp(
        [n_classes * len(nets), *architecture.fusion_hidden, n_classes],
        seed=derive_seed(seed, FUSION_STREAM),
    )
    return LateFusionModel(nets, fusion)


def _blocks(model: LateFusionModel, blocks: Mapping[str, np.ndarray]):
    missing = [name for name in model.modalities if name not in blocks]
    if missing:
        raise DataError(f"no features for modalities {missing}")
    return [blocks[name] for name in model.modalities]


def fusion_input(model: LateFusionModel, blocks: Mapping[str, np.ndarray]):
    outputs = [
        np.atleast_2d(forward(net, block))
        for net, block in zip(model.modality_nets.values(), _blocks(model, blocks))
    ]
    return np.hstack(outputs)


def forward_late_fusion(model: LateFusionModel, blocks: Mapping[str, np.ndarray]):
    return forward(model.fusion, fusion_input(model, blocks))


def train_late_fusion(
    fold: FoldData,
    train_cfg: TrainConfig,
    architecture: Architecture = Architecture(),
) -> tuple[LateFusionModel, TrainingRun]:
    train, validation = fold.train, fold.validation
    if not train.blocks:
        raise DataError("late fusion needs per-modality feature blocks")
    y_train = train.labels_for(Trait.PERSUASION)
    y_validation = validation.labels_for(Trait.PERSUASION)
    base = train_cfg.rng_seed
    model = build_late_fusion(
        {name: block.shape[1] for name, block in train.blocks.items()},
        seed=base,
        architecture=architecture,
    )

    trained = {}
    for index, (name, net) in enumerate(model.modality_nets.items()):
        cfg = replace(train_cfg, rng_seed=derive_seed(base, 1000 + index))
        trained[name], score = fit_classifier(
            net,
            train.blocks[name],
            y_train,
            validation.blocks[name],
            y_validation,
            cfg,
        )
        _logger.info("modality %s: validation accuracy %.3f", name, score.accuracy)
    model = LateFusionModel(trained, model.fusion)

    fusion_cfg = replace(train_cfg, rng_seed=derive_seed(base, 1000 + FUSION_STREAM))
    fusion, score = fit_classifier(
        model.fusion,
        fusion_input(model, train.blocks),
        y_train,
        fusion_input(model, validation.blocks),
        y_validation,
        fusion_cfg,
        select_by_accuracy=True,
    )
    _logger.info("fusion: validation accuracy %.3f", score.accuracy)
    return LateFusionModel(model.modality_nets, fusion), TrainingRun(
        best_validation_accuracy=score.accuracy
    )