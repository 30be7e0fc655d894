import numpy as np
import pytest

from hio_framework.features.pipeline import FeatureConfig, FeaturePipeline
from hio_framework.system.errors import ConfigError, FeatureError

TRANSCRIPTS = [
    "great great movie",
    "great acting",
    "boring plot",
    "boring boring movie",
    "fine movie",
    "great plot",
]
LABELS = np.array([2, 2, 0, 0, 1, 2])


def blocks(rows=6):
    rng = np.random.default_rng(0)
    return {
        "visual": rng.normal(size=(rows, 4)),
        "acoustic": rng.normal(size=(rows, 3)),
    }


def test_selects_k_columns_and_standardizes_on_training_rows():
    pipeline = FeaturePipeline(FeatureConfig(k=5), ("visual", "acoustic"))
    fused = pipeline.fit_transform(blocks(), LABELS)
    assert fused.shape == (6, 5)
    assert np.allclose(fused.mean(axis=0), 0.0)
    assert pipeline.modalities == ("acoustic", "visual")


def test_text_modality_is_built_from_transcripts():
    pipeline = FeaturePipeline(FeatureConfig(k=3, standardize=False), ("text",))
    fused = pipeline.fit_transform({}, LABELS, transcripts=TRANSCRIPTS)
    assert fused.shape == (6, 3)
    assert np.all(fused >= 0)


def test_text_modality_without_transcripts_fails():
    pipeline = FeaturePipeline(FeatureConfig(k=3), ("text",))
    with pytest.raises(FeatureError):
        pipeline.fit({}, LABELS)


def test_transform_before_fit_fails():
    with pytest.raises(FeatureError):
        FeaturePipeline(FeatureConfig(), ("visual",)).transform(blocks())


def test_non_positive_k_is_rejected():
    with pytest.raises(ConfigError):
        FeatureConfig(k=0)
