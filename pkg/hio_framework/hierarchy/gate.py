import json
import math
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from hio_framework.hierarchy.hier_model import NetworkId
from hio_framework.system.errors import ConfigError, GateError, ReportError

INFINITY = math.inf


class ReferenceMode(str, Enum):
    PRETRAINED_FIXED = "pretrained_fixed"
    LAST_ACCEPTED = "last_accepted"
    RUNNING_BEST = "running_best"


class GateDataSource(str, Enum):
    VALIDATION = "validation"
    TRAINING = "training"


@dataclass(frozen=True)
class GateConfig:
    epsilon: float = 1.0
    reference_mode: ReferenceMode = ReferenceMode.LAST_ACCEPTED
    gate_interval_steps: int = 1
    gate_data: GateDataSource = GateDataSource.VALIDATION

    def __post_init__(self):
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "reference_mode", ReferenceMode(self.reference_mode))
        object.__setattr__(self, "gate_data", GateDataSource(self.gate_data))
        if math.isnan(self.epsilon) or self.epsilon < 0:
            raise ConfigError(f"epsilon must be >= 0 or infinity, got {self.epsilon}")
        if self.gate_interval_steps < 1:
            raise ConfigError("gate_interval_steps must be >= 1")

    @property
    def is_unbounded(self) -> bool:
        return math.isinf(self.epsilon)

    def to_dict(self) -> dict:
        values = asdict(self)
        values["reference_mode"] = self.reference_mode.value
        values["gate_data"] = self.gate_data.value
        return values


def gate_accepts(candidate_loss: float, reference_loss: float, epsilon: float) -> bool:
    if math.isinf(epsilon):
        return True
    return candidate_loss <= epsilon * reference_loss


@dataclass(frozen=True)
class GateDecision:
    step: int
    network_id: NetworkId
    reference_loss: float
    candidate_loss: float
    epsilon: float
    accepted: bool

    def __post_init__(self):
        object.__setattr__(self, "network_id", NetworkId(self.network_id))
        for name in ("reference_loss", "candidate_loss", "epsilon"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "accepted", bool(self.accepted))
        object.__setattr__(self, "step", int(self.step))
        expected = gate_accepts(self.candidate_loss, self.reference_loss, self.epsilon)
        if self.accepted != expected:
            raise GateError(
                f"step {self.step} {self.network_id.value}: accepted={self.accepted} "
                f"contradicts candidate {self.candidate_loss} vs "
                f"{self.epsilon} x {self.reference_loss}"
            )

    def to_record(self) -> dict:
        return {
            "step": self.step,
            "network": self.network_id.value,
            "reference_loss": self.reference_loss,
            "candidate_loss": self.candidate_loss,
            "epsilon": self.epsilon,
            "accepted": self.accepted,
        }

    @classmethod
    def from_record(cls, record: dict) -> "GateDecision":
        return cls(
            step=int(record["step"]),
            network_id=NetworkId(record["network"]),
            reference_loss=float(record["reference_loss"]),
            candidate_loss=float(record["candidate_loss"]),
            epsilon=float(record["epsilon"]),
            accepted=bool(record["accepted"]),
        )


def decide(
    network_id: NetworkId, step: int, candidate: float, reference: float, epsilon
) -> GateDecision:
    return GateDecision(
        step=step,
        network_id=network_id,
        reference_loss=reference,
        candidate_loss=candidate,
        epsilon=epsilon,
        accepted=gate_accepts(candidate, reference, epsilon),
    )


def next_reference(
    mode: ReferenceMode, decision: GateDecision, pretrained_loss: float
) -> float:
    if mode is ReferenceMode.PRETRAINED_FIXED:
        return pretrained_loss
    if not decision.accepted:
        return decision.reference_loss
    if mode is ReferenceMode.RUNNING_BEST:
        return min(decision.reference_loss, decision.candidate_loss)
    return decision.candidate_loss


def write_decision_log(decisions: Iterable[GateDecision], path, append=False) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("a" if append else "w", encoding="utf-8") as handle:
            for decision in decisions:
                handle.write(json.dumps(decision.to_record()) + "\n")
    except OSError as error:
        raise ReportError(path, error) from error
    return path


def read_decision_log(path) -> list[GateDecision]:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
        return [GateDecision.from_record(json.loads(line)) for line in lines if line]
    except (OSError, KeyError, ValueError) as error:
        raise ReportError(path, error) from error
