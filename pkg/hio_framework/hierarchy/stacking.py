from enum import Enum
from typing import Optional

from hio_framework.hierarchy.gate import INFINITY, GateConfig
from hio_framework.hierarchy.hier_model import Architecture, HierModel
from hio_framework.hierarchy.hio_trainer import train_end_to_end, train_hio
from hio_framework.hierarchy.task_data import FoldData
from hio_framework.hierarchy.trainer_state import TrainingRun
from hio_framework.nn.train_config import TrainConfig
from hio_framework.system.events import EventPublisher


class StackingMode(str, Enum):
    # intermediates keep learning from the persuasion loss, gate never rejects
    UNBOUNDED_GATE = "unbounded_gate"
    # classical stacking: intermediates receive no gradient in Phase 3
    FROZEN_INTERMEDIATES = "frozen_intermediates"


FROZEN_INTERMEDIATES = StackingMode.FROZEN_INTERMEDIATES


def train_stacking(
    fold: FoldData,
    train_cfg: TrainConfig,
    architecture: Architecture = Architecture(),
    mode: StackingMode = StackingMode.UNBOUNDED_GATE,
    events: Optional[EventPublisher] = None,
    pretrain_cfg: Optional[TrainConfig] = None,
) -> tuple[HierModel, TrainingRun]:
    if StackingMode(mode) is StackingMode.FROZEN_INTERMEDIATES:
        return train_end_to_end(
            fold,
            train_cfg,
            architecture,
            events=events,
            frozen_intermediates=True,
            pretrain_cfg=pretrain_cfg,
        )
    return train_hio(
        fold,
        GateConfig(epsilon=INFINITY),
        train_cfg,
        architecture,
        events=events,
        pretrain_cfg=pretrain_cfg,
    )
