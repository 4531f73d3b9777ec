"""Plain K-nearest-neighbor style recognizer over the full training set."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..features.normalization import normalize, normalize_with
from ..features.types import NOISE_CODE, STYLES, Dataset, Extrema, FeatureVector, StyleLabel
from ..utils.validators import DataError, ValidationError, validate_choice, validate_neighbors
from .scan import VOTE_EPSILON, VOTE_RULES, knn_scan

logger = logging.getLogger(__name__)


def sim(a: np.ndarray, b: np.ndarray) -> float:
    """Squared Euclidean distance between two normalized vectors; smaller is more similar."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValidationError(f"Dimension mismatch: {a.shape} vs {b.shape}")
    return float(((a - b) ** 2).sum())


@dataclass(frozen=True, eq=False)
class Recognition:
    """Batch recognition output.

    ``labels`` are style indices into ``STYLES``; ``scores`` has one column per style.
    """

    labels: np.ndarray
    scores: np.ndarray
    distance_evals: int
    candidates: Optional[np.ndarray] = None

    @property
    def style_labels(self) -> list[StyleLabel]:
        return [STYLES[i] for i in self.labels]


def vote_rule_index(vote: str) -> int:
    return VOTE_RULES.index(validate_choice(vote, VOTE_RULES, "vote rule"))


def training_labels(data: Dataset) -> np.ndarray:
    """Style indices of a labeled training set; noise samples are rejected."""
    if data.labels is None:
        raise DataError("Training data must be labeled")
    if np.any(data.labels == NOISE_CODE):
        raise DataError("Training data contains noise samples; drop them before training")
    return np.ascontiguousarray(data.labels, dtype=np.int64)


def prepare_queries(features: np.ndarray, extrema: Extrema) -> np.ndarray:
    """Normalize physical queries with training extrema, clipped to [0, 1]."""
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    return np.ascontiguousarray(normalize_with(features, extrema, clip=True))


@dataclass(frozen=True, eq=False)
class KnnModel:
    train_features: np.ndarray  # physical units
    train_normalized: np.ndarray
    train_labels: np.ndarray
    extrema: Extrema
    K: int

    def __len__(self) -> int:
        return len(self.train_labels)


def knn_fit(data: Dataset, K: Optional[int] = None) -> KnnModel:
    """Store the normalized training set; K defaults to floor(sqrt(N))."""
    labels = training_labels(data)
    K = validate_neighbors(K, len(data))
    return KnnModel(
        train_features=data.features,
        train_normalized=np.ascontiguousarray(normalize(data)),
        train_labels=labels,
        extrema=data.extrema,
        K=K,
    )


def knn_classify_batch(
    model: KnnModel, features: np.ndarray, vote: str = "weighted"
) -> Recognition:
    """Classify physical-unit queries (Q, 3) by exhaustive scan."""
    if len(model) == 0:
        raise ValidationError("Model is empty")
    queries = prepare_queries(features, model.extrema)
    labels, scores, evals = knn_scan(
        queries,
        model.train_normalized,
        model.train_labels,
        model.K,
        len(STYLES),
        vote_rule_index(vote),
        VOTE_EPSILON,
    )
    return Recognition(labels=labels, scores=scores, distance_evals=int(evals))


def knn_classify(
    model: KnnModel, x: FeatureVector, vote: str = "weighted"
) -> tuple[StyleLabel, dict[StyleLabel, float]]:
    """Style of one sample plus the vote score of every style."""
    result = knn_classify_batch(model, x.as_array(), vote)
    scores = {style: float(result.scores[0, i]) for i, style in enumerate(STYLES)}
    return result.style_labels[0], scores
