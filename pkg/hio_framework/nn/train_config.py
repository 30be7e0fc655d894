from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from hio_framework.system.errors import ConfigError

FULL_BATCH = None


@dataclass(frozen=True)
class TrainConfig:
    """SGD settings. Losses are sums over samples, so learning_rate is per-sample."""

    learning_rate: float = 0.01
    epochs: int = 200
    batch_size: Optional[int] = FULL_BATCH
    checkpoint_interval_epochs: int = 10
    rng_seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 0:
            raise ConfigError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size is not FULL_BATCH and self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.checkpoint_interval_epochs < 1:
            raise ConfigError("checkpoint_interval_epochs must be >= 1")
        if not 0 <= self.rng_seed < 2**64:
            raise ConfigError(
                f"rng_seed must be a 64-bit unsigned integer, got {self.rng_seed}"
            )

    def to_dict(self) -> dict:
        return asdict(self)


def derive_seed(base: int, *path: int) -> int:
    return int(np.random.SeedSequence([base, *path]).generate_state(1, np.uint64)[0])
