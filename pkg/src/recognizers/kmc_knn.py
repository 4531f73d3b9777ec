"""kMC-KNN: per-style k-means sub-clusters prune the KNN candidate set.

Training splits each style's samples into k sub-clusters. A query is compared with
every sub-cluster center, keeps the nearest sub-cluster of each style, and runs the
KNN vote over those members only.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..clustering.kmeans import kmeans_fit
from ..features.normalization import normalize, normalize_with
from ..features.types import STYLES, Dataset, Extrema, FeatureVector, StyleLabel
from ..utils.validators import ValidationError, validate_neighbors, validate_positive_int
from .knn import Recognition, prepare_queries, training_labels, vote_rule_index
from .scan import VOTE_EPSILON, kmc_scan

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SubCluster:
    """Members of one style that share a k-means center."""

    style: StyleLabel
    center: np.ndarray  # normalized
    member_index: np.ndarray  # training-set indices, ascending
    members: np.ndarray  # physical units, (M, 3)

    def __len__(self) -> int:
        return len(self.member_index)


@dataclass(frozen=True, eq=False)
class KmcKnnModel:
    """Sub-clusters grouped by style (in ``STYLES`` order), k per style."""

    subclusters: list[SubCluster]
    extrema: Extrema
    k: int
    K: int
    _packed: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if not self.subclusters:
            raise ValidationError("Model has no sub-clusters")
        for sub in self.subclusters:
            if len(sub) == 0:
                raise ValidationError(f"Empty sub-cluster for style {sub.style.value}")
        object.__setattr__(self, "_packed", self._pack())

    def _pack(self) -> tuple:
        """Flat arrays in the layout ``kmc_scan`` expects."""
        styles = [sub.style for sub in self.subclusters]
        if styles != sorted(styles, key=STYLES.index):
            raise ValidationError("Sub-clusters must be grouped by style")
        for style in STYLES:
            count = styles.count(style)
            if count != self.k:
                raise ValidationError(
                    f"Style {style.value} has {count} sub-clusters, expected k={self.k}"
                )
        class_offsets = [0]
        for style in STYLES:
            class_offsets.append(class_offsets[-1] + styles.count(style))
        centers = np.ascontiguousarray([sub.center for sub in self.subclusters], dtype=np.float64)
        member_offsets = np.concatenate(([0], np.cumsum([len(sub) for sub in self.subclusters])))
        member_index = np.concatenate([sub.member_index for sub in self.subclusters])
        if not np.array_equal(np.sort(member_index), np.arange(len(member_index))):
            raise ValidationError("Sub-cluster members must cover each training index exactly once")
        physical = np.concatenate([sub.members for sub in self.subclusters])
        members = normalize_with(physical, self.extrema)
        labels = np.empty(len(member_index), dtype=np.int64)
        for sub in self.subclusters:
            labels[sub.member_index] = STYLES.index(sub.style)
        return (
            centers,
            np.asarray(class_offsets, dtype=np.int64),
            member_offsets.astype(np.int64),
            np.ascontiguousarray(members),
            member_index.astype(np.int64),
            labels,
        )

    @property
    def n_train(self) -> int:
        return sum(len(sub) for sub in self.subclusters)

    def for_style(self, style: StyleLabel) -> list[SubCluster]:
        return [sub for sub in self.subclusters if sub.style == style]


def kmcknn_train(
    data: Dataset, k: int, seed: int = 0, K: Optional[int] = None, max_iter: int = 300
) -> KmcKnnModel:
    """Normalize over the whole training set and run k-means within each style."""
    validate_positive_int(k, "k")
    labels = training_labels(data)
    K = validate_neighbors(K, len(data))
    normalized = normalize(data)

    subclusters = []
    for code, style in enumerate(STYLES):
        index = np.flatnonzero(labels == code)
        distinct = len(np.unique(normalized[index], axis=0)) if len(index) else 0
        if distinct < k:
            raise ValidationError(
                f"Style {style.value} has {distinct} distinct samples, fewer than k={k}"
            )
        model = kmeans_fit(normalized[index], k, seed=seed, max_iter=max_iter)
        for eta in range(k):
            members = index[model.assignments == eta]
            subclusters.append(
                SubCluster(
                    style=style,
                    center=model.centers[eta],
                    member_index=members,
                    members=data.features[members],
                )
            )
    logger.info(f"Trained kMC-KNN: {len(subclusters)} sub-clusters over {len(data)} samples, K={K}")
    return KmcKnnModel(subclusters=subclusters, extrema=data.extrema, k=k, K=K)


def kmcknn_select(model: KmcKnnModel, x: FeatureVector) -> list[SubCluster]:
    """Nearest sub-cluster of each style; ties go to the lowest sub-cluster index."""
    query = prepare_queries(x.as_array(), model.extrema)[0]
    selected = []
    for style in STYLES:
        candidates = model.for_style(style)
        distances = [((sub.center - query) ** 2).sum() for sub in candidates]
        selected.append(candidates[int(np.argmin(distances))])
    return selected


def kmcknn_recognize_batch(
    model: KmcKnnModel, features: np.ndarray, vote: str = "weighted"
) -> Recognition:
    """Recognize physical-unit queries (Q, 3) over their pruned candidate sets."""
    queries = prepare_queries(features, model.extrema)
    labels, scores, evals, candidates = kmc_scan(
        queries,
        *model._packed,
        model.K,
        len(STYLES),
        vote_rule_index(vote),
        VOTE_EPSILON,
    )
    return Recognition(
        labels=labels, scores=scores, distance_evals=int(evals), candidates=candidates
    )


def kmcknn_recognize(
    model: KmcKnnModel, x: FeatureVector, vote: str = "weighted"
) -> tuple[StyleLabel, dict[StyleLabel, float]]:
    """Style of one sample plus the vote score of every style."""
    result = kmcknn_recognize_batch(model, x.as_array(), vote)
    scores = {style: float(result.scores[0, i]) for i, style in enumerate(STYLES)}
    return result.style_labels[0], scores
