import pytest

from hio_framework.dataset.sample import Trait
from hio_framework.dataset.synthetic import SyntheticConfig, gen_synthetic
from hio_framework.hierarchy.hier_model import Architecture, compose
from hio_framework.hierarchy.task_data import FoldData, TaskData
from hio_framework.nn.mlp import init_mlp
from hio_framework.nn.train_config import TrainConfig

TRAITS = (Trait.PASSION, Trait.CREDIBILITY, Trait.PERSUASION)


def task_data(dataset, ids):
    return TaskData(
        features=dataset.fused_features(ids),
        labels={trait: dataset.labels(trait, ids) for trait in TRAITS},
        sample_ids=ids,
        blocks=dataset.blocks(ids),
    )


@pytest.fixture(scope="session")
def toy_dataset():
    cfg = SyntheticConfig(n_samples=150, n_speakers=15, modality_widths=(4, 3), seed=3)
    return gen_synthetic(cfg)


@pytest.fixture
def fold(toy_dataset):
    ids = toy_dataset.sample_ids
    return FoldData(
        fold_index=0,
        train=task_data(toy_dataset, ids[:100]),
        validation=task_data(toy_dataset, ids[100:125]),
        test=task_data(toy_dataset, ids[125:]),
    )


@pytest.fixture
def model():
    width = 7
    architecture = Architecture()
    return compose(
        init_mlp(architecture.intermediate_sizes(width), seed=1),
        init_mlp(architecture.intermediate_sizes(width), seed=2),
        init_mlp(architecture.trunk_sizes(width), seed=3),
        architecture.head_sizes(),
        seed=4,
    )


@pytest.fixture
def quick_config():
    return TrainConfig(learning_rate=0.005, epochs=12, checkpoint_interval_epochs=4)
