from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from hio_framework.features.labels import TraitClass, ternary_label
from hio_framework.system.errors import DataError, RatingRangeError


class Trait(str, Enum):
    PASSION = "passion"
    CREDIBILITY = "credibility"
    PERSUASION = "persuasion"
    CONFIDENCE = "confidence"
    DOMINANCE = "dominance"
    HUMOR = "humor"


REQUIRED_TRAITS = (Trait.PASSION, Trait.CREDIBILITY, Trait.PERSUASION)


@dataclass(eq=False)
class Sample:
    sample_id: str
    speaker_id: str
    modality_features: dict[str, np.ndarray]
    trait_ratings: dict[Trait, float]
    transcript: Optional[str] = None
    trait_labels: dict[Trait, TraitClass] = field(init=False, default_factory=dict)

    def __post_init__(self):
        self.modality_features = {
            name: np.asarray(values, dtype=np.float64).reshape(-1)
            for name, values in sorted(self.modality_features.items())
        }
        self.trait_ratings = {
            Trait(trait): float(rating) for trait, rating in self.trait_ratings.items()
        }
        missing = [t.value for t in REQUIRED_TRAITS if t not in self.trait_ratings]
        if missing:
            raise DataError(f"sample {self.sample_id}: missing traits {missing}")
        try:
            self.trait_labels = {
                trait: ternary_label(rating)
                for trait, rating in self.trait_ratings.items()
            }
        except RatingRangeError as error:
            raise RatingRangeError(f"sample {self.sample_id}: {error}") from error

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sample):
            return NotImplemented
        return (
            self.sample_id == other.sample_id
            and self.speaker_id == other.speaker_id
            and self.transcript == other.transcript
            and self.trait_ratings == other.trait_ratings
            and self.modality_features.keys() == other.modality_features.keys()
            and all(
                np.array_equal(values, other.modality_features[name])
                for name, values in self.modality_features.items()
            )
        )

    @property
    def modality_widths(self) -> dict[str, int]:
        return {name: values.size for name, values in self.modality_features.items()}
