import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hio_framework.dataset.dataset import Dataset
from hio_framework.system.errors import DatasetLoadError, PlanError, SplitError

_logger = logging.getLogger(__name__)

DEFAULT_N_FOLDS = 10
MIN_FOLDS = 3


@dataclass(frozen=True)
class FoldRoles:
    test_fold: int
    validation_fold: int
    training_folds: tuple[int, ...]

    def __post_init__(self):
        if self.validation_fold == self.test_fold:
            raise PlanError("validation fold must differ from the test fold")
        if {self.test_fold, self.validation_fold} & set(self.training_folds):
            raise PlanError("training folds overlap the test or validation fold")


@dataclass(frozen=True)
class FoldPlan:
    n_folds: int
    assignment: dict[str, int]
    speakers: dict[str, str]

    def __post_init__(self):
        if self.n_folds < MIN_FOLDS:
            raise SplitError(f"need at least {MIN_FOLDS} folds, got {self.n_folds}")
        bad = [i for i in self.assignment.values() if not 0 <= i < self.n_folds]
        if bad:
            raise SplitError(f"fold index {bad[0]} outside [0, {self.n_folds})")
        if self.assignment.keys() != self.speakers.keys():
            raise SplitError("assignment and speaker maps cover different samples")
        check_speaker_disjoint(self)

    def fold_ids(self, fold: int) -> list[str]:
        return sorted(sid for sid, index in self.assignment.items() if index == fold)

    def ids_in(self, folds) -> list[str]:
        wanted = set(folds)
        return sorted(sid for sid, index in self.assignment.items() if index in wanted)

    @property
    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.n_folds
        for index in self.assignment.values():
            sizes[index] += 1
        return sizes

    def roles(self, test_fold: int, seed: int) -> FoldRoles:
        if not 0 <= test_fold < self.n_folds:
            raise PlanError(f"test fold {test_fold} outside [0, {self.n_folds})")
        candidates = [fold for fold in range(self.n_folds) if fold != test_fold]
        rng = np.random.default_rng([seed, test_fold])
        validation_fold = int(candidates[rng.integers(len(candidates))])
        training = tuple(f for f in candidates if f != validation_fold)
        return FoldRoles(test_fold, validation_fold, training)


def check_speaker_disjoint(plan: FoldPlan):
    folds_of = {}
    for sample_id, fold in plan.assignment.items():
        folds_of.setdefault(plan.speakers[sample_id], set()).add(fold)
    for speaker, folds in folds_of.items():
        if len(folds) > 1:
            raise SplitError(f"speaker {speaker!r} appears in folds {sorted(folds)}")


def split_folds(dataset: Dataset, n_folds: int = DEFAULT_N_FOLDS, seed: int = 0):
    by_speaker: dict[str, list[str]] = {}
    for sample in dataset.samples:
        by_speaker.setdefault(sample.speaker_id, []).append(sample.sample_id)
    if n_folds < MIN_FOLDS:
        raise SplitError(f"need at least {MIN_FOLDS} folds, got {n_folds}")
    if len(by_speaker) < n_folds:
        raise SplitError(f"{len(by_speaker)} speakers cannot fill {n_folds} folds")

    speakers = sorted(by_speaker)
    order = np.random.default_rng(seed).permutation(len(speakers))
    sizes = [0] * n_folds
    assignment = {}
    for position in order:
        speaker = speakers[position]
        fold = int(np.argmin(sizes))
        for sample_id in by_speaker[speaker]:
            assignment[sample_id] = fold
        sizes[fold] += len(by_speaker[speaker])

    _logger.info("split %d samples into %d folds: %s", len(dataset), n_folds, sizes)
    return FoldPlan(
        n_folds=n_folds,
        assignment=assignment,
        speakers={sample.sample_id: sample.speaker_id for sample in dataset.samples},
    )


def semisupervised_plan(
    plan: FoldPlan, roles: FoldRoles, n_pretrain_folds: int, seed: int
) -> tuple[int, ...]:
    available = len(roles.training_folds)
    if n_pretrain_folds < 1 or n_pretrain_folds > plan.n_folds - 2:
        raise PlanError(
            f"n_pretrain_folds must be in [1, {plan.n_folds - 2}], "
            f"got {n_pretrain_folds}"
        )
    if n_pretrain_folds > available:
        raise PlanError(f"only {available} training folds are available")
    rng = np.random.default_rng([seed, roles.test_fold, n_pretrain_folds])
    chosen = rng.choice(available, size=n_pretrain_folds, replace=False)
    return tuple(sorted(roles.training_folds[i] for i in chosen))


def save_fold_plan(plan: FoldPlan, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        handle.write(json.dumps({"n_folds": plan.n_folds}) + "\n")
        for sample_id in sorted(plan.assignment):
            record = {
                "sample_id": sample_id,
                "speaker_id": plan.speakers[sample_id],
                "fold": plan.assignment[sample_id],
            }
            handle.write(json.dumps(record) + "\n")
    return path


def load_fold_plan(path) -> FoldPlan:
    path = Path(path)
    try:
        lines = [line for line in path.read_text("utf-8").splitlines() if line]
        header = json.loads(lines[0])
        records = [json.loads(line) for line in lines[1:]]
        return FoldPlan(
            n_folds=int(header["n_folds"]),
            assignment={r["sample_id"]: int(r["fold"]) for r in records},
            speakers={r["sample_id"]: r["speaker_id"] for r in records},
        )
    except (OSError, IndexError, KeyError, json.JSONDecodeError) as error:
        raise DatasetLoadError(f"{path}: malformed fold plan ({error})") from error
