"""Test the kMC-KNN recognizer."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.datagen.generator import generate_features
from src.features.normalization import normalize_with
from src.features.types import STYLES, Dataset, FeatureVector
from src.recognizers.kmc_knn import (
    KmcKnnModel,
    SubCluster,
    kmcknn_recognize,
    kmcknn_recognize_batch,
    kmcknn_select,
    kmcknn_train,
)
from src.recognizers.knn import knn_classify_batch, knn_fit
from src.utils.validators import DataError, ValidationError


@pytest.fixture(scope="module")
def data() -> Dataset:
    return generate_features(n=1500, seed=11)


def _queries(data: Dataset, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(data.extrema.lower, data.extrema.upper, (count, 3))


def test_single_subcluster_equals_knn(data):
    """With one sub-cluster per style the recognizer reproduces plain KNN exactly."""
    queries = _queries(data, 1000, 1)
    for vote in ("weighted", "count", "literal"):
        kmc = kmcknn_recognize_batch(kmcknn_train(data, 1), queries, vote)
        knn = knn_classify_batch(knn_fit(data), queries, vote)
        mismatches = int((kmc.labels != knn.labels).sum())
        assert mismatches == 0, f"{mismatches} mismatches with vote {vote}"
        assert np.array_equal(kmc.scores, knn.scores)


def test_subcluster_bookkeeping(data):
    """Sub-clusters partition each style's training samples."""
    model = kmcknn_train(data, 3, seed=2)
    assert len(model.subclusters) == 9
    assert model.n_train == len(data)

    seen = np.concatenate([sub.member_index for sub in model.subclusters])
    assert np.array_equal(np.sort(seen), np.arange(len(data)))
    normalized = normalize_with(data.features, data.extrema)
    for sub in model.subclusters:
        assert np.all(data.labels[sub.member_index] == sub.style.code)
        assert np.array_equal(sub.members, data.features[sub.member_index])
        assert np.allclose(sub.center, normalized[sub.member_index].mean(axis=0))
    for style in STYLES:
        assert len(model.for_style(style)) == 3


def test_select_nearest_center_per_style(data):
    """Selection keeps the nearest sub-cluster of every style."""
    model = kmcknn_train(data, 4, seed=0)
    for query in _queries(data, 50, 3):
        x = FeatureVector.from_array(query)
        selected = kmcknn_select(model, x)
        normalized = normalize_with(query[None, :], model.extrema, clip=True)[0]
        assert [sub.style for sub in selected] == list(STYLES)
        for style, chosen in zip(STYLES, selected):
            distances = [((sub.center - normalized) ** 2).sum() for sub in model.for_style(style)]
            assert ((chosen.center - normalized) ** 2).sum() == min(distances)


def test_candidates_and_distance_evaluations(data):
    """Each query costs one evaluation per center plus one per candidate."""
    model = kmcknn_train(data, 4, seed=0)
    queries = _queries(data, 30, 4)
    result = kmcknn_recognize_batch(model, queries)

    expected = []
    for query in queries:
        selected = kmcknn_select(model, FeatureVector.from_array(query))
        expected.append(sum(len(sub) for sub in selected))
    assert result.candidates.tolist() == expected
    assert result.distance_evals == 30 * len(model.subclusters) + sum(expected)
    assert result.distance_evals < 30 * len(data)


def test_neighbors_clipped_to_candidates():
    """K larger than the candidate set still votes over every candidate."""
    rng = np.random.default_rng(6)
    features = rng.random((30, 3))
    data = Dataset(features, np.repeat(np.arange(3), 10))
    model = kmcknn_train(data, 5, K=25)
    result = kmcknn_recognize_batch(model, _queries(data, 10, 7))
    assert np.all(result.candidates < 25)
    assert set(result.labels.tolist()) <= {0, 1, 2}


def test_single_query(data):
    """The single-sample form returns a style and a score per style."""
    model = kmcknn_train(data, 2)
    x = FeatureVector.from_array(data.features[0])
    label, scores = kmcknn_recognize(model, x)
    assert label in STYLES
    assert set(scores) == set(STYLES)


def test_too_few_samples_for_k():
    """Every style needs at least k distinct samples."""
    features = np.random.default_rng(0).random((9, 3))
    data = Dataset(features, np.array([0, 0, 0, 0, 1, 1, 1, 1, 2]))
    with pytest.raises(ValidationError, match="aggressive"):
        kmcknn_train(data, 2)


def test_training_rejects_noise():
    """Noise labels never reach the recognizer."""
    features = np.random.default_rng(0).random((8, 3))
    data = Dataset(features, np.array([0, 1, 2, 3, 0, 1, 2, 0]))
    with pytest.raises(DataError):
        kmcknn_train(data, 1)


def test_model_structure_checks(data):
    """Sub-clusters must be grouped by style and cover every training index once."""
    model = kmcknn_train(data, 2)
    reordered = [model.subclusters[2], model.subclusters[0]] + model.subclusters[1:2]
    with pytest.raises(ValidationError):
        KmcKnnModel(subclusters=reordered + model.subclusters[3:], extrema=model.extrema, k=2, K=5)

    duplicated = list(model.subclusters)
    duplicated[1] = SubCluster(
        style=duplicated[1].style,
        center=duplicated[1].center,
        member_index=duplicated[0].member_index,
        members=duplicated[0].members,
    )
    with pytest.raises(ValidationError):
        KmcKnnModel(subclusters=duplicated, extrema=model.extrema, k=2, K=5)

    with pytest.raises(ValidationError):
        KmcKnnModel(subclusters=[], extrema=model.extrema, k=2, K=5)


def test_evaluations_fall_as_k_grows(data):
    """More sub-clusters per style means fewer distance evaluations per query."""
    queries = _queries(data, 500, 6)
    evals = [
        kmcknn_recognize_batch(kmcknn_train(data, k, seed=0), queries).distance_evals
        for k in (1, 2, 3, 4, 6, 8)
    ]
    assert evals[0] == len(queries) * (len(STYLES) + len(data))
    assert all(later < earlier for earlier, later in zip(evals, evals[1:])), evals
