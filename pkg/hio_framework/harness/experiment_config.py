import logging
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Optional

import yaml

from hio_framework.dataset.folds import DEFAULT_N_FOLDS, MIN_FOLDS
from hio_framework.dataset.synthetic import SyntheticConfig
from hio_framework.features.pipeline import TEXT_MODALITY, FeatureConfig
from hio_framework.hierarchy.gate import GateConfig
from hio_framework.hierarchy.hier_model import Architecture
from hio_framework.nn.train_config import TrainConfig
from hio_framework.system.errors import ConfigError

_logger = logging.getLogger(__name__)


class ModelVariant(str, Enum):
    LATE_FUSION_BASELINE = "late_fusion_baseline"
    STACKING = "stacking"
    HIO = "hio"
    FROZEN_STACKING = "frozen_stacking"
    TEXT_ONLY = "text_only"
    END_TO_END = "end_to_end"
    TEXT_ONLY_STACKING = "text_only_stacking"

    @property
    def uses_gate(self) -> bool:
        return self in (ModelVariant.HIO, ModelVariant.TEXT_ONLY)

    @property
    def is_hierarchical(self) -> bool:
        return self is not ModelVariant.LATE_FUSION_BASELINE

    @property
    def modalities(self) -> Optional[tuple[str, ...]]:
        if self in (ModelVariant.TEXT_ONLY, ModelVariant.TEXT_ONLY_STACKING):
            return (TEXT_MODALITY,)
        return None


def default_train_config() -> TrainConfig:
    # full batch over a few hundred rows, so the per-sample rate stays small
    return TrainConfig(learning_rate=0.001, epochs=150)


@dataclass(frozen=True)
class ExperimentConfig:
    variant: ModelVariant = ModelVariant.HIO
    dataset_path: Optional[Path] = None
    synthetic: Optional[SyntheticConfig] = None
    gate: Optional[GateConfig] = field(default_factory=GateConfig)
    train: TrainConfig = field(default_factory=default_train_config)
    features: FeatureConfig = field(default_factory=FeatureConfig)
    architecture: Architecture = field(default_factory=Architecture)
    n_folds: int = DEFAULT_N_FOLDS
    seed: int = 0
    semisupervised_folds: Optional[int] = None
    n_jobs: int = 1
    resample_training: bool = False
    record_wall_clock: bool = True

    def __post_init__(self):
        try:
            variant = ModelVariant(self.variant)
        except ValueError:
            names = ", ".join(v.value for v in ModelVariant)
            raise ConfigError(
                f"unknown variant {self.variant!r}; use one of {names}"
            ) from None
        object.__setattr__(self, "variant", variant)

        if self.dataset_path is not None:
            if self.synthetic is not None:
                raise ConfigError("give either dataset_path or synthetic, not both")
            object.__setattr__(self, "dataset_path", Path(self.dataset_path))
        elif self.synthetic is None:
            object.__setattr__(self, "synthetic", SyntheticConfig())

        if variant.uses_gate and self.gate is None:
            raise ConfigError(f"variant {variant.value} needs a gate config")
        if not variant.uses_gate and self.gate is not None:
            object.__setattr__(self, "gate", None)

        if self.n_folds < MIN_FOLDS:
            raise ConfigError(f"n_folds must be >= {MIN_FOLDS}, got {self.n_folds}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.n_jobs == 0:
            raise ConfigError("n_jobs must be positive, or negative to count from all")
        if self.semisupervised_folds is not None:
            if not variant.is_hierarchical:
                raise ConfigError(
                    "semi-supervised pretraining needs a hierarchical variant"
                )
            if not 1 <= self.semisupervised_folds <= self.n_folds - 2:
                raise ConfigError(
                    f"semisupervised_folds must be in [1, {self.n_folds - 2}], "
                    f"got {self.semisupervised_folds}"
                )

    @property
    def label(self) -> str:
        if self.semisupervised_folds is None:
            return self.variant.value
        return f"{self.variant.value}_semi{self.semisupervised_folds}"

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "dataset_path": str(self.dataset_path) if self.dataset_path else None,
            "synthetic": self.synthetic.to_dict() if self.synthetic else None,
            "gate": self.gate.to_dict() if self.gate else None,
            "train": self.train.to_dict(),
            "features": self.features.to_dict(),
            "architecture": self.architecture.to_dict(),
            "n_folds": self.n_folds,
            "seed": self.seed,
            "semisupervised_folds": self.semisupervised_folds,
            "n_jobs": self.n_jobs,
            "resample_training": self.resample_training,
            "record_wall_clock": self.record_wall_clock,
        }

    @classmethod
    def from_dict(cls, values: dict) -> "ExperimentConfig":
        values = dict(values or {})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"unknown config fields {unknown}")
        nested = {
            "synthetic": SyntheticConfig,
            "gate": GateConfig,
            "train": TrainConfig,
            "features": FeatureConfig,
            "architecture": Architecture,
        }
        for name, config_type in nested.items():
            if isinstance(values.get(name), dict):
                values[name] = _build(config_type, name, values[name])
        return cls(**values)

    @classmethod
    def from_yaml(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            with path.open(encoding="utf-8") as handle:
                values = yaml.safe_load(handle)
        except OSError as error:
            raise ConfigError(f"{path}: {error}") from error
        except yaml.YAMLError as error:
            raise ConfigError(f"{path}: invalid YAML: {error}") from error
        if values is not None and not isinstance(values, dict):
            raise ConfigError(f"{path}: expected a mapping at the top level")
        _logger.info("loaded experiment config from %s", path)
        return cls.from_dict(values)

    def to_yaml(self, path) -> Path:
        path = Path(path)
        path.write_text(yaml.safe_dump(self.to_dict(), sort_keys=False))
        return path


def _build(config_type, name: str, values: dict):
    try:
        return config_type(**values)
    except TypeError as error:
        raise ConfigError(f"{name}: {error}") from error


def apply_overrides(values: dict, overrides: dict[str, Any]) -> dict:
    """Sets dotted keys such as "gate.epsilon" on a nested config dict.

    None values are skipped so unset command-line flags keep the file's value.
    """
    merged = {
        key: dict(value) if isinstance(value, dict) else value
        for key, value in values.items()
    }
    for dotted, value in overrides.items():
        if value is None:
            continue
        *parents, leaf = dotted.split(".")
        target = merged
        for parent in parents:
            if not isinstance(target.get(parent), dict):
                target[parent] = {}
            target = target[parent]
        target[leaf] = value
    return merged
