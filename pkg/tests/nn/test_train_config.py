import pytest

from hio_framework.nn.train_config import FULL_BATCH, TrainConfig, derive_seed
from hio_framework.system.errors import ConfigError


def test_defaults():
    cfg = TrainConfig()
    assert cfg.batch_size is FULL_BATCH
    assert cfg.checkpoint_interval_epochs == 10


@pytest.mark.parametrize(
    "overrides",
    [
        {"learning_rate": 0.0},
        {"epochs": -1},
        {"batch_size": 0},
        {"checkpoint_interval_epochs": 0},
        {"rng_seed": -1},
        {"rng_seed": 2**64},
    ],
)
def test_invalid_train_configs(overrides):
    with pytest.raises(ConfigError):
        TrainConfig(**overrides)


def test_derived_seeds_are_stable_and_distinct():
    assert derive_seed(7, 1) == derive_seed(7, 1)
    seeds = {derive_seed(7, stream) for stream in range(50)}
    assert len(seeds) == 50
    assert derive_seed(7, 1) != derive_seed(8, 1)
    assert all(0 <= seed < 2**64 for seed in seeds)
