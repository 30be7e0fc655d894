from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from hio_framework.dataset.sample import Trait
from hio_framework.system.errors import DataError, ShapeError


@dataclass
class TaskData:
    features: np.ndarray
    labels: dict[Trait, np.ndarray]
    sample_ids: tuple[str, ...] = ()
    blocks: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.features = np.atleast_2d(np.asarray(self.features, dtype=np.float64))
        n_rows = self.features.shape[0]
        self.labels = {
            Trait(trait): np.asarray(values, dtype=np.int64)
            for trait, values in self.labels.items()
        }
        self.blocks = {
            name: np.asarray(values, dtype=np.float64)
            for name, values in sorted(self.blocks.items())
        }
        self.sample_ids = tuple(self.sample_ids)
        for trait, values in self.labels.items():
            if values.shape != (n_rows,):
                raise ShapeError(
                    f"{trait.value} labels of shape {values.shape} for {n_rows} rows"
                )
        for name, values in self.blocks.items():
            if values.ndim != 2 or values.shape[0] != n_rows:
                raise ShapeError(f"modality block {name!r} does not have {n_rows} rows")
        if self.sample_ids and len(self.sample_ids) != n_rows:
            raise ShapeError(f"{len(self.sample_ids)} sample ids for {n_rows} rows")

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def width(self) -> int:
        return self.features.shape[1]

    def has(self, trait: Trait) -> bool:
        return Trait(trait) in self.labels

    def labels_for(self, trait: Trait) -> np.ndarray:
        trait = Trait(trait)
        if trait not in self.labels:
            raise DataError(f"no {trait.value} labels in this data")
        return self.labels[trait]

    def rows(self, indices) -> "TaskData":
        indices = np.asarray(indices, dtype=np.int64)
        return TaskData(
            features=self.features[indices],
            labels={trait: values[indices] for trait, values in self.labels.items()},
            sample_ids=tuple(self.sample_ids[i] for i in indices)
            if self.sample_ids
            else (),
            blocks={name: values[indices] for name, values in self.blocks.items()},
        )

    def balanced(self, trait: Trait, rng: np.random.Generator) -> "TaskData":
        labels = self.labels_for(trait)
        classes, counts = np.unique(labels, return_counts=True)
        picked = [np.arange(len(self))]
        for label, count in zip(classes, counts):
            members = np.flatnonzero(labels == label)
            if count < counts.max():
                picked.append(rng.choice(members, size=counts.max() - count))
        return self.rows(np.concatenate(picked))


@dataclass
class FoldData:
    fold_index: int
    train: TaskData
    validation: TaskData
    test: Optional[TaskData] = None
    pretrain: Optional[TaskData] = None

    def __post_init__(self):
        if self.pretrain is None:
            self.pretrain = self.train
        if len(self.train) == 0:
            raise DataError(f"fold {self.fold_index} has no training rows")
        if len(self.validation) == 0:
            raise DataError(f"fold {self.fold_index} has no validation rows")
        widths = {data.width for data in self._parts()}
        if len(widths) != 1:
            raise ShapeError(f"fold {self.fold_index} mixes feature widths {widths}")

    def _parts(self) -> list[TaskData]:
        parts = [self.train, self.validation, self.pretrain]
        return parts + ([self.test] if self.test is not None else [])

    @property
    def width(self) -> int:
        return self.train.width
