"""Test cross-validation, benchmarking and report rendering."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.clustering.ahc import ahc_fit
from src.clustering.morphology import morph_cluster
from src.datagen.generator import generate_features
from src.evaluation.benchmark import benchmark, compare
from src.evaluation.crossval import accuracy, kfold_split
from src.evaluation.report import (
    EVAL_COLUMNS,
    render_cluster_comparison,
    render_eval_csv,
    render_eval_table,
)
from src.features.types import Dataset, StyleLabel
from src.utils.validators import ValidationError


@pytest.fixture(scope="module")
def data():
    return generate_features(n=600, seed=2)


@pytest.fixture(scope="module")
def reports(data):
    knn = benchmark("knn", data, p=4, repeats=2)
    kmc = benchmark("kmcknn", data, p=4, k=3, repeats=2)
    return knn, kmc


def test_kfold_split():
    """Folds are disjoint, exhaustive, sorted and balanced."""
    folds = kfold_split(103, 4, seed=1)
    assert len(folds) == 4
    joined = np.concatenate(folds)
    assert np.array_equal(np.sort(joined), np.arange(103))
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1
    assert all(np.all(np.diff(f) > 0) for f in folds)

    again = kfold_split(103, 4, seed=1)
    assert all(np.array_equal(a, b) for a, b in zip(folds, again))


def test_kfold_split_limits():
    """Fold count must be between 2 and N."""
    with pytest.raises(ValidationError):
        kfold_split(10, 1)
    with pytest.raises(ValidationError):
        kfold_split(3, 4)
    assert [len(f) for f in kfold_split(4, 4)] == [1, 1, 1, 1]


def test_accuracy():
    """Per-style share of correct predictions; absent styles give None."""
    truth = np.array([0, 0, 0, 0, 1, 1])
    predicted = np.array([0, 0, 1, 0, 1, 2])
    result = accuracy(predicted, truth)
    assert result[StyleLabel.MODERATE] == 0.75
    assert result[StyleLabel.VAGUE] == 0.5
    assert result[StyleLabel.AGGRESSIVE] is None

    assert all(v == 1.0 for v in accuracy(truth, truth).values() if v is not None)


def test_accuracy_checks():
    """Mismatched lengths and noise ground truth are refused."""
    with pytest.raises(ValidationError):
        accuracy(np.array([0, 1]), np.array([0]))
    with pytest.raises(ValidationError):
        accuracy(np.array([0, 1]), np.array([0, 3]))


def test_knn_benchmark_counts(data, reports):
    """Plain KNN scores every test point against every training point."""
    knn, _ = reports
    assert knn.method == "knn" and knn.k is None
    assert len(knn.folds) == 4
    assert knn.n_points == len(data)
    for fold in knn.folds:
        assert fold.n_train + fold.n_test == len(data)
        assert fold.distance_evals == fold.n_train * fold.n_test
        assert len(fold.times) == 2
        assert fold.time_s == min(fold.times)
    assert knn.K == sorted({int(np.sqrt(f.n_train)) for f in knn.folds})


def test_kmcknn_benchmark_saves_evaluations(reports):
    """kMC-KNN evaluates fewer distances than plain KNN on the same folds."""
    knn, kmc = reports
    assert [f.n_test for f in kmc.folds] == [f.n_test for f in knn.folds]
    assert kmc.distance_evals < knn.distance_evals
    comparison = compare(kmc, knn)
    assert 0 < comparison.eval_reduction < 1
    assert comparison.time_reduction == pytest.approx(1 - 1 / comparison.speedup)
    for style in (StyleLabel.MODERATE, StyleLabel.VAGUE, StyleLabel.AGGRESSIVE):
        mean, low, high = kmc.style_accuracy(style)
        assert low <= mean <= high
        assert mean > 0.8


def test_benchmark_rejects_unknown_method(data):
    """Only knn and kmcknn are benchmarked."""
    with pytest.raises(ValidationError):
        benchmark("svm", data)


def test_eval_csv(reports):
    """Per-fold rows plus one mean row per report."""
    text = render_eval_csv(reports)
    lines = text.splitlines()
    assert lines[0] == ",".join(EVAL_COLUMNS)
    assert len(lines) == 1 + 2 * (4 + 1)
    assert lines[5].startswith("knn,,mean,")
    assert lines[6].startswith("kmcknn,3,0,")


def test_eval_table(reports):
    """The text table carries speedup columns only with a baseline."""
    knn, kmc = reports
    plain = render_eval_table([knn, kmc])
    assert "speedup" not in plain
    assert "kmcknn(k=3)" in plain
    assert plain.startswith("p=4 folds, seed=0, vote=weighted")

    compared = render_eval_table([knn, kmc], baseline=knn)
    assert "speedup" in compared
    assert "1.00x" in compared


def test_cluster_comparison_table():
    """Morphology and AHC centers are listed pair by pair."""
    rng = np.random.default_rng(4)
    centers = np.array([[4.0, 0.4, 0.04], [4.5, 0.4, 0.12], [15.0, 0.8, 0.10]])
    half = np.array([1.0, 0.1, 0.008])
    data = Dataset(np.concatenate([rng.uniform(c - half, c + half, (400, 3)) for c in centers]))
    morph = morph_cluster(data, q=(50, 50, 50), r=3, noise_fraction=0.02)
    ahc = ahc_fit(data, target_clusters=3)
    text = render_cluster_comparison(morph, ahc, data.features.std(axis=0))
    lines = text.splitlines()
    assert "morph_dd" in lines[0] and "ahc_dd" in lines[0] and "sed" in lines[0]
    assert len(lines) == 4
    assert lines[1].split()[0] == "moderate"
