from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from sklearn.feature_extraction.text import TfidfVectorizer

from hio_framework.system.errors import EmptyInputError, FeatureError


def _pretokenized(tokens):
    return list(tokens)


@dataclass
class TfidfVocabulary:
    """Fitted raw-count x (ln(N/df) + 1) weighting, no length normalization.

    Terms are ordered lexicographically.
    """

    vectorizer: TfidfVectorizer
    document_frequencies: dict[str, int] = field(default_factory=dict)
    n_documents: int = 0

    @property
    def terms(self) -> list[str]:
        return self.vectorizer.get_feature_names_out().tolist()

    @property
    def idf(self) -> np.ndarray:
        return self.vectorizer.idf_

    def __len__(self) -> int:
        return len(self.vectorizer.vocabulary_)


def tfidf_fit(corpus: list[list[str]]) -> TfidfVocabulary:
    if not corpus:
        raise EmptyInputError("cannot fit TF-IDF on an empty corpus")
    vectorizer = TfidfVectorizer(
        analyzer=_pretokenized,
        smooth_idf=False,
        sublinear_tf=False,
        norm=None,
        dtype=np.float64,
    )
    try:
        vectorizer.fit(corpus)
    except ValueError as error:
        raise FeatureError(f"TF-IDF fit failed: {error}") from error
    frequencies = Counter(term for doc in corpus for term in set(doc))
    return TfidfVocabulary(vectorizer, dict(sorted(frequencies.items())), len(corpus))


def tfidf_transform_many(vocab: TfidfVocabulary, docs: list[list[str]]):
    if not docs:
        return sparse.csr_matrix((0, len(vocab)), dtype=np.float64)
    return vocab.vectorizer.transform(docs)


def tfidf_transform(vocab: TfidfVocabulary, doc: list[str]):
    return tfidf_transform_many(vocab, [doc])[0]
