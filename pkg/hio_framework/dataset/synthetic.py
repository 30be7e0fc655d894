import logging
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from hio_framework.dataset.dataset import Dataset
from hio_framework.dataset.sample import Sample, Trait
from hio_framework.features.labels import RATING_MAX, RATING_MIN, TraitClass
from hio_framework.system.errors import ConfigError, DataError

_logger = logging.getLogger(__name__)

DEFAULT_MODALITIES = ("acoustic", "text", "visual")

# Global feature columns cycle through these roles (index modulo 7).
PASSION_COLUMNS = (0, 1)
CREDIBILITY_COLUMNS = (2, 3)
DIRECT_COLUMNS = (4,)
ROLE_CYCLE = 7


@dataclass(frozen=True)
class SyntheticConfig:
    n_samples: int = 1000
    n_speakers: int = 100
    modality_widths: tuple[int, ...] = (20, 20, 20)
    modality_names: Optional[tuple[str, ...]] = None
    noise_level: float = 0.3
    passion_correlation: float = 0.55
    credibility_correlation: float = 0.73
    direct_weight: float = 0.25
    speaker_effect: float = 0.5
    rater_bias: float = 0.8
    min_class_fraction: float = 0.05
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(self, "modality_widths", tuple(self.modality_widths))
        names = self.modality_names
        if names is None:
            names = DEFAULT_MODALITIES[: len(self.modality_widths)]
            if len(names) < len(self.modality_widths):
                names = tuple(f"m{i}" for i in range(len(self.modality_widths)))
        object.__setattr__(self, "modality_names", tuple(names))

        if not self.modality_widths or any(w < 1 for w in self.modality_widths):
            raise ConfigError(
                f"modality widths must be positive: {self.modality_widths}"
            )
        if len(self.modality_names) != len(self.modality_widths):
            raise ConfigError("one name is needed per modality width")
        if len(set(self.modality_names)) != len(self.modality_names):
            raise ConfigError(f"duplicate modality names {self.modality_names}")
        if sum(self.modality_widths) < max(DIRECT_COLUMNS) + 1:
            raise ConfigError(
                f"at least {max(DIRECT_COLUMNS) + 1} feature columns are needed "
                "to plant passion, credibility and direct signals"
            )
        if not 1 <= self.n_speakers <= self.n_samples:
            raise ConfigError("need 1 <= n_speakers <= n_samples")
        if not 0.0 <= self.noise_level <= 1.0:
            raise ConfigError(f"noise_level {self.noise_level} outside [0, 1]")
        rho_p, rho_c = self.passion_correlation, self.credibility_correlation
        if not (-1 <= rho_p <= 1 and -1 <= rho_c <= 1):
            raise ConfigError("correlation targets must lie in [-1, 1]")
        if rho_p**2 + rho_c**2 >= 1:
            raise ConfigError(
                "passion and credibility correlations leave no residual variance"
            )
        if self.direct_weight < 0 or self.speaker_effect < 0:
            raise ConfigError("direct_weight and speaker_effect must be non-negative")
        if not 0.0 <= self.rater_bias <= 1.0:
            raise ConfigError(f"rater_bias {self.rater_bias} outside [0, 1]")

    def to_dict(self) -> dict:
        values = asdict(self)
        values["modality_widths"] = list(self.modality_widths)
        values["modality_names"] = list(self.modality_names)
        return values


@dataclass(frozen=True)
class PlantedStructure:
    passion: np.ndarray
    credibility: np.ndarray
    persuasion: np.ndarray
    passion_weight: float
    credibility_weight: float
    residual_scale: float

    def persuasion_score(self, passion, credibility, residual=0.0):
        return combine_latents(
            passion,
            credibility,
            self.passion_weight,
            self.credibility_weight,
            self.residual_scale * residual,
        )

    def persuasion_rating(self, score):
        return to_ratings(score, reference=self.persuasion)


def combine_latents(passion, credibility, passion_weight, credibility_weight, residual):
    return passion_weight * passion + credibility_weight * credibility + residual


def _zscore(values: np.ndarray) -> np.ndarray:
    spread = values.std()
    if spread == 0:
        return np.zeros_like(values)
    return (values - values.mean()) / spread


def to_ratings(scores: np.ndarray, reference: Optional[np.ndarray] = None):
    reference = scores if reference is None else reference
    low, high = reference.min(), reference.max()
    if high == low:
        return np.full(np.shape(scores), (RATING_MIN + RATING_MAX) / 2)
    ratings = RATING_MIN + (RATING_MAX - RATING_MIN) * (scores - low) / (high - low)
    return np.clip(ratings, RATING_MIN, RATING_MAX)


def _role_columns(total_width: int, roles: tuple[int, ...]) -> np.ndarray:
    return np.array([j for j in range(total_width) if j % ROLE_CYCLE in roles])


def _speakers(cfg: SyntheticConfig, rng) -> np.ndarray:
    extra = rng.integers(cfg.n_speakers, size=cfg.n_samples - cfg.n_speakers)
    return rng.permutation(np.concatenate([np.arange(cfg.n_speakers), extra]))


def _subtask_latent(features, columns, noise_level, rng) -> np.ndarray:
    weights = rng.normal(size=columns.size)
    signal = _zscore(features[:, columns] @ weights)
    noise = rng.normal(size=features.shape[0])
    return np.sqrt(1.0 - noise_level**2) * signal + noise_level * noise


def gen_synthetic_with_structure(cfg: SyntheticConfig):
    rng = np.random.default_rng(cfg.seed)
    total_width = sum(cfg.modality_widths)
    speakers = _speakers(cfg, rng)
    offsets = rng.normal(size=(cfg.n_speakers, total_width))
    features = rng.normal(size=(cfg.n_samples, total_width))
    features += cfg.speaker_effect * offsets[speakers]

    passion = _subtask_latent(
        features, _role_columns(total_width, PASSION_COLUMNS), cfg.noise_level, rng
    )
    credibility = _subtask_latent(
        features, _role_columns(total_width, CREDIBILITY_COLUMNS), cfg.noise_level, rng
    )
    direct = _zscore(features[:, _role_columns(total_width, DIRECT_COLUMNS)].sum(1))
    residual_noise = rng.normal(size=cfg.n_samples)
    # Persuasion raters judge each speaker with a shared offset. It is part of
    # the residual, so the correlation targets hold, and it does not carry
    # over to unseen speakers.
    speaker_bias = rng.normal(size=cfg.n_speakers)[speakers]
    residual_noise = (
        np.sqrt(1.0 - cfg.rater_bias) * residual_noise
        + np.sqrt(cfg.rater_bias) * speaker_bias
    )

    # Residual variance left by the two correlation targets, shared between the
    # direct feature term and pure noise; absent when noise_level is zero.
    rho_p, rho_c = cfg.passion_correlation, cfg.credibility_correlation
    residual_scale = 0.0
    if cfg.noise_level > 0:
        residual_scale = np.sqrt((1 - rho_p**2 - rho_c**2) / (cfg.direct_weight**2 + 1))
    residual = cfg.direct_weight * direct + residual_noise
    persuasion = combine_latents(
        passion, credibility, rho_p, rho_c, residual_scale * residual
    )
    structure = PlantedStructure(
        passion=passion,
        credibility=credibility,
        persuasion=persuasion,
        passion_weight=rho_p,
        credibility_weight=rho_c,
        residual_scale=float(residual_scale),
    )

    ratings = {
        Trait.PASSION: to_ratings(passion),
        Trait.CREDIBILITY: to_ratings(credibility),
        Trait.PERSUASION: to_ratings(persuasion),
    }
    bounds = np.cumsum((0,) + cfg.modality_widths)
    samples = [
        Sample(
            sample_id=f"s{i:05d}",
            speaker_id=f"spk{speakers[i]:03d}",
            modality_features={
                name: features[i, bounds[m] : bounds[m + 1]]
                for m, name in enumerate(cfg.modality_names)
            },
            trait_ratings={trait: float(r[i]) for trait, r in ratings.items()},
        )
        for i in range(cfg.n_samples)
    ]
    dataset = Dataset(samples)
    check_class_support(dataset, cfg.min_class_fraction)
    _logger.info(
        "generated %d samples from %d speakers (seed %d)",
        cfg.n_samples,
        cfg.n_speakers,
        cfg.seed,
    )
    return dataset, structure


def gen_synthetic(cfg: SyntheticConfig) -> Dataset:
    return gen_synthetic_with_structure(cfg)[0]


def check_class_support(dataset: Dataset, min_fraction: float):
    labels = dataset.labels(Trait.PERSUASION)
    counts = np.bincount(labels, minlength=len(TraitClass))
    for trait_class, count in zip(TraitClass, counts):
        if count < min_fraction * labels.size:
            raise DataError(
                f"persuasion class {trait_class.name.lower()} has {count} of "
                f"{labels.size} samples, below {min_fraction:.0%}"
            )
