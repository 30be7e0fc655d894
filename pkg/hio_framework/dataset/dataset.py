import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from hio_framework.dataset.sample import Sample, Trait
from hio_framework.features.pooling import FrameSequence, pool_temporal
from hio_framework.system.errors import (
    DataError,
    DatasetLoadError,
    HioError,
    RatingRangeError,
)

_logger = logging.getLogger(__name__)

RECORD_FIELDS = ("sample_id", "speaker_id", "modalities", "ratings")


@dataclass
class Dataset:
    samples: list[Sample]
    _index: dict[str, int] = field(init=False, default_factory=dict)

    def __post_init__(self):
        if not self.samples:
            raise DataError("a dataset needs at least one sample")
        widths = self.samples[0].modality_widths
        for position, sample in enumerate(self.samples):
            if sample.sample_id in self._index:
                raise DataError(f"duplicate sample_id {sample.sample_id!r}")
            if sample.modality_widths != widths:
                raise DataError(
                    f"sample {sample.sample_id}: modality widths "
                    f"{sample.modality_widths} differ from {widths}"
                )
            self._index[sample.sample_id] = position

    def __len__(self) -> int:
        return len(self.samples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.samples == other.samples

    @property
    def sample_ids(self) -> list[str]:
        return [sample.sample_id for sample in self.samples]

    @property
    def speaker_ids(self) -> list[str]:
        return [sample.speaker_id for sample in self.samples]

    @property
    def modality_names(self) -> tuple[str, ...]:
        return tuple(self.samples[0].modality_features)

    @property
    def modality_widths(self) -> dict[str, int]:
        return self.samples[0].modality_widths

    @property
    def has_transcripts(self) -> bool:
        return all(sample.transcript is not None for sample in self.samples)

    def _rows(self, ids: Optional[Iterable[str]]) -> list[Sample]:
        if ids is None:
            return self.samples
        try:
            return [self.samples[self._index[sample_id]] for sample_id in ids]
        except KeyError as error:
            raise DataError(f"unknown sample_id {error.args[0]!r}") from error

    def subset(self, ids: Iterable[str]) -> "Dataset":
        return Dataset(self._rows(list(ids)))

    def modality_matrix(self, name: str, ids=None) -> np.ndarray:
        if name not in self.modality_widths:
            raise DataError(f"unknown modality {name!r}")
        rows = self._rows(ids)
        if not rows:
            return np.zeros((0, self.modality_widths[name]))
        return np.vstack([sample.modality_features[name] for sample in rows])

    def blocks(self, ids=None, modalities=None) -> dict[str, np.ndarray]:
        names = self.modality_names if modalities is None else modalities
        return {
            name: self.modality_matrix(name, ids)
            for name in names
            if name in self.modality_widths
        }

    def fused_features(self, ids=None, modalities=None) -> np.ndarray:
        return np.hstack(list(self.blocks(ids, modalities).values()))

    def labels(self, trait: Trait, ids=None) -> np.ndarray:
        trait = Trait(trait)
        rows = self._rows(ids)
        if any(trait not in sample.trait_labels for sample in rows):
            raise DataError(f"trait {trait.value!r} is not rated for every sample")
        return np.array([int(s.trait_labels[trait]) for s in rows], dtype=np.int64)

    def ratings(self, trait: Trait, ids=None) -> np.ndarray:
        trait = Trait(trait)
        return np.array([s.trait_ratings[trait] for s in self._rows(ids)])

    def transcripts(self, ids=None) -> Optional[list[str]]:
        rows = self._rows(ids)
        if any(sample.transcript is None for sample in rows):
            return None
        return [sample.transcript for sample in rows]


def _modality_vector(values) -> np.ndarray:
    array = np.asarray(values, dtype=np.float64)
    if array.ndim == 2:
        return pool_temporal(FrameSequence(array))
    if array.ndim != 1:
        raise DatasetLoadError("modality must be a vector or a list of frames")
    return array


def sample_from_record(record: dict) -> Sample:
    missing = [name for name in RECORD_FIELDS if name not in record]
    if missing:
        raise DatasetLoadError(f"record is missing fields {missing}")
    if not isinstance(record["modalities"], dict) or not record["modalities"]:
        raise DatasetLoadError("modalities must be a non-empty object")
    return Sample(
        sample_id=str(record["sample_id"]),
        speaker_id=str(record["speaker_id"]),
        modality_features={
            name: _modality_vector(values)
            for name, values in record["modalities"].items()
        },
        trait_ratings=record["ratings"],
        transcript=record.get("transcript"),
    )


def sample_to_record(sample: Sample) -> dict:
    record = {
        "sample_id": sample.sample_id,
        "speaker_id": sample.speaker_id,
        "modalities": {
            name: values.tolist() for name, values in sample.modality_features.items()
        },
        "ratings": {
            trait.value: rating for trait, rating in sample.trait_ratings.items()
        },
    }
    if sample.transcript is not None:
        record["transcript"] = sample.transcript
    return record


def load_dataset(path) -> Dataset:
    path = Path(path)
    samples = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as error:
        raise DatasetLoadError(f"{path}: {error}") from error
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            samples.append(sample_from_record(json.loads(line)))
        except RatingRangeError as error:
            raise RatingRangeError(f"{path}:{line_number}: {error}") from error
        except (json.JSONDecodeError, HioError, TypeError, ValueError) as error:
            raise DatasetLoadError(f"{path}:{line_number}: {error}") from error
    try:
        dataset = Dataset(samples)
    except DataError as error:
        raise DatasetLoadError(f"{path}: {error}") from error
    _logger.info("loaded %d samples from %s", len(dataset), path)
    return dataset


def save_dataset(dataset: Dataset, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for sample in dataset.samples:
            handle.write(json.dumps(sample_to_record(sample)) + "\n")
    return path
