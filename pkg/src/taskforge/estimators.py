"""Scikit-learn style wrappers so the pipeline composes with the ecosystem.

The stages are transformers over lists of Documents: KeyphraseAnnotator
attaches keyphrases (fit learns the background counts), MixtureForge turns
annotated documents into task samples (fit builds the corruption pool), and
FewShotSampler deterministically subsamples.
"""

from __future__ import annotations

from typing import Optional

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import analysis
from .corpus import Document
from .negatives import build_pool
from .sampling import subsample
from .tasks import ALL_KINDS, MixtureSpec, TaskKind, forge_corpus


class KeyphraseAnnotator(BaseEstimator, TransformerMixin):
    """Attach topic-signature keyphrases to documents.

    fit() learns the background word counts (the union of all targets unless
    an external background is given); transform() returns annotated copies.
    """

    def __init__(self, threshold=10.83, max_phrase_len=5,
                 grouping="per_document", stopword_path=None,
                 background_counts=None):
        self.threshold = threshold
        self.max_phrase_len = max_phrase_len
        self.grouping = grouping
        self.stopword_path = stopword_path
        self.background_counts = background_counts

    def fit(self, X: list[Document], y=None):
        self.stopwords_ = analysis.load_stopwords(self.stopword_path)
        if self.background_counts is not None:
            self.background_counts_ = dict(self.background_counts)
        else:
            self.background_counts_ = dict(analysis.corpus_counts(X))
        return self

    def transform(self, X: list[Document]) -> list[Document]:
        if not hasattr(self, "stopwords_"):
            raise NotFittedError("KeyphraseAnnotator is not fitted")
        return analysis.annotate_keyphrases(
            X,
            stopwords=self.stopwords_,
            threshold=self.threshold,
            max_len=self.max_phrase_len,
            grouping=self.grouping,
            background_counts=self.background_counts_,
        )


class MixtureForge(BaseEstimator, TransformerMixin):
    """Forge the multi-task training mixture from annotated documents.

    fit() builds the corpus-wide keyphrase pool used for corruptions;
    transform() returns the shuffled sample list and stores the run report
    on `report_`.
    """

    def __init__(self, seed=0, kinds=None, distinguish_positive_rate=0.5,
                 shuffle_fallback="skip", corrupt_fraction=1.0,
                 plan_source_includes_keyphrases=False, workers=1):
        self.seed = seed
        self.kinds = kinds
        self.distinguish_positive_rate = distinguish_positive_rate
        self.shuffle_fallback = shuffle_fallback
        self.corrupt_fraction = corrupt_fraction
        self.plan_source_includes_keyphrases = plan_source_includes_keyphrases
        self.workers = workers

    def _mixture_spec(self) -> MixtureSpec:
        if self.kinds is None:
            enabled = frozenset(ALL_KINDS)
        else:
            enabled = frozenset(TaskKind(k) for k in self.kinds)
        return MixtureSpec(
            enabled=enabled,
            distinguish_positive_rate=self.distinguish_positive_rate,
            shuffle_fallback=self.shuffle_fallback,
            corrupt_fraction=self.corrupt_fraction,
            plan_source_includes_keyphrases=self.plan_source_includes_keyphrases,
        )

    def fit(self, X: list[Document], y=None):
        self.pool_ = build_pool((doc, doc.keyphrases) for doc in X)
        return self

    def transform(self, X: list[Document]):
        if not hasattr(self, "pool_"):
            raise NotFittedError("MixtureForge is not fitted")
        samples, report = forge_corpus(
            X, seed=self.seed, spec=self._mixture_spec(),
            workers=self.workers, pool=self.pool_,
        )
        self.report_ = report
        return samples


class FewShotSampler(BaseEstimator, TransformerMixin):
    """Seeded fraction subsampling, stateless apart from its parameters."""

    def __init__(self, fraction=1.0, seed=0):
        self.fraction = fraction
        self.seed = seed

    def fit(self, X=None, y=None):
        return self

    def transform(self, X: list[Document]) -> list[Document]:
        return subsample(X, self.fraction, self.seed)
