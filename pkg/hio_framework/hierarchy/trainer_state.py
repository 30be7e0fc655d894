from dataclasses import asdict, dataclass, field
from typing import Optional

from hio_framework.hierarchy.checkpoint import CheckpointTracker
from hio_framework.hierarchy.gate import GateDecision
from hio_framework.hierarchy.hier_model import NetworkId
from hio_framework.nn.snapshot import Snapshot


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    validation_loss: float
    validation_accuracy: float
    passion_loss: float = float("nan")
    passion_accuracy: float = float("nan")
    credibility_loss: float = float("nan")
    credibility_accuracy: float = float("nan")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrainerState:
    references: dict[NetworkId, float]
    pretrained_references: dict[NetworkId, float] = field(default_factory=dict)
    step: int = 0
    decisions: list[GateDecision] = field(default_factory=list)
    history: list[EpochRecord] = field(default_factory=list)
    checkpoint: Optional[CheckpointTracker] = None
    window_start: dict[NetworkId, Snapshot] = field(default_factory=dict)

    def __post_init__(self):
        self.references = {NetworkId(k): float(v) for k, v in self.references.items()}
        if not self.pretrained_references:
            self.pretrained_references = dict(self.references)

    def decisions_for(self, network_id: NetworkId) -> list[GateDecision]:
        network_id = NetworkId(network_id)
        return [d for d in self.decisions if d.network_id is network_id]

    def gate_summary(self) -> dict[str, dict[str, int]]:
        return summarize_decisions(self.decisions)

    def to_run(self, pretrain_losses=None) -> "TrainingRun":
        tracker = self.checkpoint
        return TrainingRun(
            history=list(self.history),
            decisions=list(self.decisions),
            best_epoch=tracker.best_epoch if tracker else None,
            best_validation_accuracy=tracker.best_score if tracker else None,
            pretrain_losses=dict(pretrain_losses or {}),
        )


def summarize_decisions(decisions) -> dict[str, dict[str, int]]:
    summary = {}
    for network_id in NetworkId:
        mine = [d for d in decisions if d.network_id is network_id]
        accepted = sum(d.accepted for d in mine)
        summary[network_id.value] = {
            "accepted": accepted,
            "reverted": len(mine) - accepted,
        }
    return summary


@dataclass
class TrainingRun:
    history: list[EpochRecord] = field(default_factory=list)
    decisions: list[GateDecision] = field(default_factory=list)
    best_epoch: Optional[int] = None
    best_validation_accuracy: Optional[float] = None
    pretrain_losses: dict[str, float] = field(default_factory=dict)

    def gate_summary(self) -> dict[str, dict[str, int]]:
        return summarize_decisions(self.decisions)
