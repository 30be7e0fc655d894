import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from hio_framework.dataset.folds import split_folds
from hio_framework.harness.cross_validation import resolve_dataset, run_cv
from hio_framework.harness.experiment_config import ExperimentConfig
from hio_framework.harness.run_report import RunReport
from hio_framework.system.errors import ComparisonError

_logger = logging.getLogger(__name__)


@dataclass
class ComparisonTable:
    labels: list[str]
    reports: list[RunReport]

    def __post_init__(self):
        if len(self.labels) != len(self.reports):
            raise ComparisonError("one label is needed per report")
        if len(set(self.labels)) != len(self.labels):
            raise ComparisonError(f"duplicate variant labels {self.labels}")
        if not self.reports:
            raise ComparisonError("nothing to compare")
        check_paired(self.reports)

    @property
    def reference(self) -> str:
        return self.labels[0]

    @property
    def mean_accuracies(self) -> dict[str, float]:
        return {
            label: report.mean_accuracy
            for label, report in zip(self.labels, self.reports)
        }

    def paired_differences(self, label: str) -> np.ndarray:
        mine = self.reports[self.labels.index(label)].fold_accuracies
        return np.asarray(mine) - np.asarray(self.reports[0].fold_accuracies)

    def gate_summaries(self) -> dict[str, dict]:
        return {
            label: report.gate_summary()
            for label, report in zip(self.labels, self.reports)
        }

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"fold": [f.fold_index for f in self.reports[0].folds]})
        for label, report in zip(self.labels, self.reports):
            frame[label] = report.fold_accuracies
        for label in self.labels[1:]:
            frame[f"{label}-{self.reference}"] = self.paired_differences(label)
        return frame

    def summary_frame(self) -> pd.DataFrame:
        rows = []
        for label, report in zip(self.labels, self.reports):
            gate = report.gate_summary()
            rows.append(
                {
                    "variant": label,
                    "mean_accuracy": report.mean_accuracy,
                    "std_accuracy": report.std_accuracy,
                    "mean_difference": float(np.mean(self.paired_differences(label))),
                    "P_reverted": gate["P"]["reverted"],
                    "C_reverted": gate["C"]["reverted"],
                }
            )
        return pd.DataFrame(rows)


def check_paired(reports: Sequence[RunReport]):
    reference = reports[0]
    for report in reports[1:]:
        if len(report.folds) != len(reference.folds):
            raise ComparisonError(
                f"{report.label} has {len(report.folds)} folds, "
                f"{reference.label} has {len(reference.folds)}"
            )
        for mine, theirs in zip(report.folds, reference.folds):
            for role in ("test_ids", "validation_ids", "train_ids"):
                if getattr(mine, role) != getattr(theirs, role):
                    raise ComparisonError(
                        f"fold {theirs.fold_index}: {report.label} and "
                        f"{reference.label} differ in {role.replace('_', ' ')}"
                    )


def _shared_setting(cfgs: Sequence[ExperimentConfig]):
    first = cfgs[0]
    for cfg in cfgs[1:]:
        same = (
            cfg.dataset_path == first.dataset_path
            and cfg.synthetic == first.synthetic
            and cfg.n_folds == first.n_folds
            and cfg.seed == first.seed
        )
        if not same:
            raise ComparisonError(
                f"{cfg.label} does not share dataset, folds and seed with {first.label}"
            )


def compare_variants(
    cfgs: Sequence[ExperimentConfig], labels: Optional[Sequence[str]] = None
) -> ComparisonTable:
    if not cfgs:
        raise ComparisonError("nothing to compare")
    _shared_setting(cfgs)
    labels = list(labels) if labels is not None else [cfg.label for cfg in cfgs]
    dataset = resolve_dataset(cfgs[0])
    plan = split_folds(dataset, cfgs[0].n_folds, cfgs[0].seed)
    reports = [run_cv(cfg, dataset=dataset, plan=plan) for cfg in cfgs]
    table = ComparisonTable(labels, reports)
    for label, accuracy in table.mean_accuracies.items():
        _logger.info("%s: mean accuracy %.4f", label, accuracy)
    return table
