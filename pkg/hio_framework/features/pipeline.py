import logging
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from sklearn.preprocessing import StandardScaler

from hio_framework.features.tfidf import (
    TfidfVocabulary,
    tfidf_fit,
    tfidf_transform_many,
)
from hio_framework.features.tokenizer import tokenize
from hio_framework.features.ttest import Grouping, SelectionResult, ttest_select
from hio_framework.system.errors import ConfigError, FeatureError

_logger = logging.getLogger(__name__)

TEXT_MODALITY = "text"


@dataclass(frozen=True)
class FeatureConfig:
    k: int = 100
    grouping: Grouping = Grouping.TOP_VS_BOTTOM
    standardize: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"feature-selection k must be positive, got {self.k}")
        object.__setattr__(self, "grouping", Grouping(self.grouping))

    def to_dict(self) -> dict:
        values = asdict(self)
        values["grouping"] = self.grouping.value
        return values


@dataclass
class FeaturePipeline:
    config: FeatureConfig
    modalities: tuple[str, ...]

    _vocabulary: Optional[TfidfVocabulary] = field(init=False, default=None)
    _selection: Optional[SelectionResult] = field(init=False, default=None)
    _scaler: Optional[StandardScaler] = field(init=False, default=None)

    def __post_init__(self):
        if not self.modalities:
            raise ConfigError("at least one modality is required")
        self.modalities = tuple(sorted(self.modalities))

    @property
    def selection(self) -> Optional[SelectionResult]:
        return self._selection

    @property
    def is_fitted(self) -> bool:
        return self._selection is not None

    def _needs_text(self, blocks: dict[str, np.ndarray]) -> bool:
        return TEXT_MODALITY in self.modalities and TEXT_MODALITY not in blocks

    def _assemble(self, blocks: dict[str, np.ndarray], transcripts) -> np.ndarray:
        columns = []
        for name in self.modalities:
            if name in blocks:
                columns.append(np.asarray(blocks[name], dtype=np.float64))
            elif name == TEXT_MODALITY and self._vocabulary is not None:
                if transcripts is None:
                    raise FeatureError("text modality needs transcripts")
                docs = [tokenize(text) for text in transcripts]
                columns.append(tfidf_transform_many(self._vocabulary, docs).toarray())
            else:
                raise FeatureError(f"modality {name!r} is not available")
        return np.hstack(columns)

    def fit(self, blocks: dict[str, np.ndarray], labels, transcripts=None):
        if self._needs_text(blocks):
            if transcripts is None:
                raise FeatureError("text modality needs transcripts")
            self._vocabulary = tfidf_fit([tokenize(text) for text in transcripts])
            _logger.info("TF-IDF vocabulary of %d terms", len(self._vocabulary))
        fused = self._assemble(blocks, transcripts)
        self._selection = ttest_select(
            fused, labels, k=self.config.k, grouping=self.config.grouping
        )
        selected = self._selection.apply(fused)
        if self.config.standardize:
            self._scaler = StandardScaler().fit(selected)
        _logger.debug("selected %d of %d features", selected.shape[1], fused.shape[1])
        return self

    def transform(self, blocks: dict[str, np.ndarray], transcripts=None) -> np.ndarray:
        if not self.is_fitted:
            raise FeatureError("feature pipeline used before fit")
        selected = self._selection.apply(self._assemble(blocks, transcripts))
        if self._scaler is not None:
            selected = self._scaler.transform(selected)
        return selected

    def fit_transform(self, blocks, labels, transcripts=None) -> np.ndarray:
        return self.fit(blocks, labels, transcripts).transform(blocks, transcripts)
