from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from hio_framework.hierarchy.gate import GateDecision
from hio_framework.hierarchy.hier_model import NetworkId
from hio_framework.hierarchy.trainer_state import EpochRecord, summarize_decisions
from hio_framework.system.errors import DataError


@dataclass
class FoldResult:
    fold_index: int
    validation_fold: int
    test_accuracy: float
    confusion: np.ndarray
    test_ids: tuple[str, ...]
    validation_ids: tuple[str, ...]
    train_ids: tuple[str, ...]
    pretrain_folds: tuple[int, ...] = ()
    wall_clock_seconds: float = 0.0
    best_epoch: Optional[int] = None
    n_features: int = 0
    history: list[EpochRecord] = field(default_factory=list)
    decisions: list[GateDecision] = field(default_factory=list)

    def __post_init__(self):
        self.confusion = np.asarray(self.confusion, dtype=np.int64)
        if self.confusion.ndim != 2 or len(set(self.confusion.shape)) != 1:
            raise DataError(f"fold {self.fold_index}: confusion matrix is not square")
        if self.confusion.sum() != len(self.test_ids):
            raise DataError(
                f"fold {self.fold_index}: confusion matrix counts "
                f"{self.confusion.sum()} of {len(self.test_ids)} test samples"
            )
        if not 0.0 <= self.test_accuracy <= 1.0:
            raise DataError(f"fold {self.fold_index}: accuracy {self.test_accuracy}")
        self.test_ids = tuple(self.test_ids)
        self.validation_ids = tuple(self.validation_ids)
        self.train_ids = tuple(self.train_ids)
        self.pretrain_folds = tuple(self.pretrain_folds)

    @property
    def n_test(self) -> int:
        return len(self.test_ids)

    def gate_summary(self) -> dict[str, dict[str, int]]:
        return summarize_decisions(self.decisions)

    def to_dict(self) -> dict:
        return {
            "fold_index": self.fold_index,
            "validation_fold": self.validation_fold,
            "test_accuracy": self.test_accuracy,
            "confusion": self.confusion.tolist(),
            "test_ids": list(self.test_ids),
            "validation_ids": list(self.validation_ids),
            "train_ids": list(self.train_ids),
            "pretrain_folds": list(self.pretrain_folds),
            "wall_clock_seconds": self.wall_clock_seconds,
            "best_epoch": self.best_epoch,
            "n_features": self.n_features,
            "history": [record.to_dict() for record in self.history],
            "decisions": [decision.to_record() for decision in self.decisions],
        }

    @classmethod
    def from_dict(cls, values: dict) -> "FoldResult":
        values = dict(values)
        values["history"] = [EpochRecord(**r) for r in values.get("history", [])]
        values["decisions"] = [
            GateDecision.from_record(r) for r in values.get("decisions", [])
        ]
        return cls(**values)


@dataclass
class RunReport:
    config: dict
    folds: list[FoldResult]

    def __post_init__(self):
        self.folds = sorted(self.folds, key=lambda fold: fold.fold_index)

    @property
    def label(self) -> str:
        semi = self.config.get("semisupervised_folds")
        variant = self.config.get("variant", "")
        return variant if semi is None else f"{variant}_semi{semi}"

    @property
    def fold_accuracies(self) -> list[float]:
        return [fold.test_accuracy for fold in self.folds]

    @property
    def mean_accuracy(self) -> float:
        if not self.folds:
            return float("nan")
        return float(np.mean(self.fold_accuracies))

    @property
    def std_accuracy(self) -> float:
        if not self.folds:
            return float("nan")
        return float(np.std(self.fold_accuracies))

    @property
    def wall_clock_seconds(self) -> float:
        return float(sum(fold.wall_clock_seconds for fold in self.folds))

    def gate_summary(self) -> dict[str, dict[str, int]]:
        total = {nid.value: {"accepted": 0, "reverted": 0} for nid in NetworkId}
        for fold in self.folds:
            for network, counts in fold.gate_summary().items():
                for key, count in counts.items():
                    total[network][key] += count
        return total

    def confusion_total(self) -> np.ndarray:
        return np.sum([fold.confusion for fold in self.folds], axis=0)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "mean_accuracy": self.mean_accuracy,
            "gate_summary": self.gate_summary(),
            "folds": [fold.to_dict() for fold in self.folds],
        }

    @classmethod
    def from_dict(cls, values: dict) -> "RunReport":
        return cls(
            config=values["config"],
            folds=[FoldResult.from_dict(fold) for fold in values["folds"]],
        )
