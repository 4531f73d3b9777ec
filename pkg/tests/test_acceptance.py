"""Full-size runs on N = 9936 synthetic samples: recovery, agreement and speed.

Run with ``pytest -m slow``.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.clustering.ahc import ahc_fit, cluster_proximity
from src.clustering.morphology import morph_cluster
from src.datagen.generator import generate_features
from src.datagen.profiles import DEFAULT_PROFILES, with_noise_clump
from src.evaluation.benchmark import benchmark, compare
from src.features.types import STYLES, Dataset

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def full() -> Dataset:
    return generate_features(n=9936, seed=0)


@pytest.fixture(scope="module")
def reports(full):
    knn = benchmark("knn", full, p=4, repeats=3)
    kmc = {k: benchmark("kmcknn", full, p=4, k=k, repeats=3) for k in (2, 3, 4)}
    return knn, kmc


def test_morphology_recovers_profiles(full):
    """Three clusters whose centers sit near the generating means."""
    result = morph_cluster(full, q=(100, 100, 100), r=10, noise_fraction=0.02)
    assert result.J == 3
    names = result.style_names
    span = full.extrema.span

    for j, name in enumerate(names):
        mean = next(p.mean.as_array() for p in DEFAULT_PROFILES if p.label == name)
        assert np.all(np.abs(result.centers[j] - mean) / span < 0.10), f"{name.value} center"

    kept = result.labels >= 0
    recovered = np.array([names[j].code for j in result.labels[kept]])
    share = np.mean(recovered == full.labels[kept])
    assert share >= 0.95, f"only {share:.3f} of samples recovered"


def test_morphology_agrees_with_ahc():
    """Matched main-cluster centers of both methods lie within 15% of the span."""
    data = generate_features(with_noise_clump(), n=3000, seed=0)
    morph = morph_cluster(data, q=(100, 100, 100), r=10, noise_fraction=0.03)
    ahc = ahc_fit(data, target_clusters=4, method="ward")
    assert morph.J == 3

    span = data.extrema.span
    pairs = cluster_proximity(morph.centers, ahc.centers, data.features.std(axis=0))
    assert len(pairs) == 3
    for i, j, _ in pairs:
        gap = np.abs(morph.centers[i] - ahc.centers[j]) / span
        assert np.all(gap < 0.15), f"cluster {i} vs {j}: {gap}"


def test_kmcknn_is_faster(reports):
    """k = 4 cuts per-point time by 60% and distance evaluations by 70%."""
    knn, kmc = reports
    comparison = compare(kmc[4], knn)
    assert comparison.eval_reduction >= 0.70
    assert comparison.time_reduction >= 0.60


def test_kmcknn_keeps_accuracy(reports):
    """Every style stays within 5 points of plain KNN and above 85%."""
    knn, kmc = reports
    for k, report in kmc.items():
        for style in STYLES:
            reference = knn.style_accuracy(style)[0]
            value = report.style_accuracy(style)[0]
            assert value >= 0.85, f"k={k} {style.value}: {value:.4f}"
            assert abs(value - reference) <= 0.05, f"k={k} {style.value}: {value} vs {reference}"
