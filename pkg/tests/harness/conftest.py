import pytest

from hio_framework.dataset.synthetic import SyntheticConfig
from hio_framework.features.pipeline import FeatureConfig
from hio_framework.harness.experiment_config import ExperimentConfig
from hio_framework.nn.train_config import TrainConfig

SMALL = SyntheticConfig(n_samples=120, n_speakers=30, modality_widths=(4, 3, 3), seed=5)


@pytest.fixture
def experiment():
    def build(**overrides) -> ExperimentConfig:
        values = dict(
            synthetic=SMALL,
            train=TrainConfig(
                learning_rate=0.002, epochs=4, checkpoint_interval_epochs=2
            ),
            features=FeatureConfig(k=6),
            n_folds=4,
            seed=1,
            record_wall_clock=False,
        )
        values.update(overrides)
        return ExperimentConfig(**values)

    return build
