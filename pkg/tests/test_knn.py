"""Test the plain KNN recognizer against an exhaustive-scan oracle."""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.features.normalization import normalize_with
from src.features.types import STYLES, Dataset, FeatureVector, StyleLabel
from src.recognizers.knn import knn_classify, knn_classify_batch, knn_fit, sim
from src.recognizers.scan import VOTE_EPSILON
from src.utils.validators import DataError, ValidationError


def _labeled(seed: int, n: int = 120) -> Dataset:
    rng = np.random.default_rng(seed)
    features = rng.random((n, 3)) * [20.0, 2.0, 0.2]
    return Dataset(features, rng.integers(0, 3, n))


def _oracle(data: Dataset, query: np.ndarray, K: int, vote: str) -> int:
    """Sort every training sample by (distance, index) and vote over the first K."""
    train = normalize_with(data.features, data.extrema)
    q = normalize_with(query[None, :], data.extrema, clip=True)[0]
    distances = []
    for i, row in enumerate(train):
        d = 0.0
        for k in range(3):
            diff = row[k] - q[k]
            d += diff * diff
        distances.append((d, i))
    distances.sort()

    scores = [0.0] * len(STYLES)
    counts = [0] * len(STYLES)
    for d, i in distances[:K]:
        label = int(data.labels[i])
        counts[label] += 1
        if vote == "weighted":
            scores[label] += 1.0 / (d + VOTE_EPSILON)
        elif vote == "count":
            scores[label] += 1.0
        else:
            scores[label] += d
    candidates = [c for c in range(len(STYLES)) if counts[c] > 0]
    return max(candidates, key=lambda c: (scores[c], counts[c], -c))


def test_sim():
    """sim is the squared Euclidean distance."""
    assert sim(np.zeros(3), np.array([1.0, 2.0, 2.0])) == 9.0
    assert sim(np.array([0.5, 0.5, 0.5]), np.array([0.5, 0.5, 0.5])) == 0.0
    with pytest.raises(ValidationError):
        sim(np.zeros(3), np.zeros(2))


def test_default_neighbors():
    """K defaults to floor(sqrt(N))."""
    assert knn_fit(_labeled(0, 120)).K == 10
    assert knn_fit(_labeled(0, 99)).K == 9
    assert knn_fit(_labeled(0, 120), K=3).K == 3
    with pytest.raises(ValidationError):
        knn_fit(_labeled(0, 20), K=21)


def test_matches_oracle():
    """40 queries on 5 seeded datasets agree with the exhaustive oracle for every vote rule."""
    for seed in range(5):
        data = _labeled(seed)
        rng = np.random.default_rng(100 + seed)
        queries = rng.random((40, 3)) * [22.0, 2.2, 0.22]
        for vote in ("weighted", "count", "literal"):
            model = knn_fit(data)
            result = knn_classify_batch(model, queries, vote)
            expected = [_oracle(data, q, model.K, vote) for q in queries]
            assert result.labels.tolist() == expected, f"seed {seed}, vote {vote}"
            assert result.distance_evals == 40 * len(data)


def test_exact_match_wins():
    """A query equal to a training sample gets a large weighted score for its label."""
    features = np.array(
        [[0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [0.1, 0.1, 0.1], [0.9, 0.9, 0.9], [0.5, 0.5, 0.5]]
    )
    data = Dataset(features, np.array([0, 2, 0, 2, 1]))
    model = knn_fit(data, K=3)

    label, scores = knn_classify(model, FeatureVector(0.5, 0.5, 0.5))
    assert label is StyleLabel.VAGUE
    assert set(scores) == set(STYLES)
    assert scores[StyleLabel.VAGUE] == pytest.approx(1.0 / VOTE_EPSILON)


def test_count_vote_tie_goes_to_lower_label():
    """Equal counts and scores pick the lower label index."""
    features = np.array([[0.0, 0.0, 0.0], [2.0, 2.0, 2.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    data = Dataset(features, np.array([2, 1, 1, 2]))
    model = knn_fit(data, K=2)
    label, scores = knn_classify(model, FeatureVector(0.0, 0.0, 0.5), vote="count")
    assert scores[StyleLabel.AGGRESSIVE] == 2.0
    assert label is StyleLabel.AGGRESSIVE

    model = knn_fit(data, K=4)
    label, _ = knn_classify(model, FeatureVector(1.0, 1.0, 1.0), vote="count")
    assert label is StyleLabel.VAGUE


def test_out_of_range_query_is_clipped():
    """Queries beyond the training extrema behave like the nearest boundary point."""
    data = _labeled(4)
    model = knn_fit(data)
    far = knn_classify_batch(model, np.array([[100.0, 10.0, 1.0]]))
    edge = knn_classify_batch(model, data.extrema.upper[None, :])
    assert far.labels.tolist() == edge.labels.tolist()
    assert np.array_equal(far.scores, edge.scores)


def test_training_data_checks():
    """Training needs labels and rejects noise samples."""
    features = np.random.default_rng(0).random((10, 3))
    with pytest.raises(DataError):
        knn_fit(Dataset(features))
    with pytest.raises(DataError):
        knn_fit(Dataset(features, np.array([0, 1, 2, 3, 0, 1, 2, 0, 1, 2])))


def test_unknown_vote_rule():
    """Only the known vote rules are accepted."""
    model = knn_fit(_labeled(1))
    with pytest.raises(ValidationError):
        knn_classify_batch(model, np.ones((1, 3)), vote="median")


def test_isqrt_default():
    """The default K is the integer square root."""
    assert knn_fit(_labeled(2, 2484 * 3)).K == math.isqrt(2484 * 3)


def test_training_order_does_not_matter():
    """Shuffling the training samples leaves every recognition unchanged."""
    data = _labeled(9, n=300)
    perm = np.random.default_rng(4).permutation(len(data))
    shuffled = Dataset(data.features[perm], data.labels[perm])
    queries = np.random.default_rng(5).random((200, 3)) * [20.0, 2.0, 0.2]

    for vote in ("weighted", "count", "literal"):
        before = knn_classify_batch(knn_fit(data, K=9), queries, vote)
        after = knn_classify_batch(knn_fit(shuffled, K=9), queries, vote)
        assert np.array_equal(before.labels, after.labels)
        assert np.allclose(before.scores, after.scores, rtol=1e-12)
        assert before.distance_evals == after.distance_evals
