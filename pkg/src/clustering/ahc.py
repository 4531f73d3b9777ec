"""Agglomerative hierarchical clustering baseline and center-set comparison."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.cluster.hierarchy import DisjointSet, linkage
from scipy.optimize import linear_sum_assignment

from ..features.normalization import normalize
from ..features.types import Dataset, Extrema, StyleLabel
from ..utils.validators import ValidationError, validate_choice, validate_positive_int
from .summary import canonical_order, cluster_ranges, name_styles

logger = logging.getLogger(__name__)

LINKAGES = ("ward", "single", "complete", "average")


@dataclass(frozen=True)
class Merge:
    """One merge step: node ids follow scipy's linkage numbering."""

    node_a: int
    node_b: int
    distance: float


@dataclass(frozen=True, eq=False)
class AhcResult:
    labels: np.ndarray
    centers: np.ndarray  # physical units, lexicographic order
    ranges: np.ndarray
    counts: np.ndarray
    merge_trace: list[Merge]
    linkage_matrix: np.ndarray
    extrema: Extrema
    method: str

    @property
    def n_clusters(self) -> int:
        return len(self.centers)

    @property
    def style_names(self) -> Optional[list[StyleLabel]]:
        """Style names of the three largest clusters, or None when fewer than three.

        Smaller clusters are named noise.
        """
        if self.n_clusters < 3:
            return None
        largest = np.sort(np.argsort(-self.counts, kind="stable")[:3])
        names = name_styles(self.centers[largest])
        result = [StyleLabel.NOISE] * self.n_clusters
        for j, name in zip(largest, names):
            result[j] = name
        return result


def replay_merges(linkage_matrix: np.ndarray, n_samples: int, n_merges: int) -> np.ndarray:
    """Cluster index per sample after replaying the first ``n_merges`` merges."""
    sets = DisjointSet(range(n_samples))
    representative = list(range(n_samples))
    for row in linkage_matrix[:n_merges]:
        a, b = representative[int(row[0])], representative[int(row[1])]
        sets.merge(a, b)
        representative.append(a)
    roots = [sets[i] for i in range(n_samples)]
    _, labels = np.unique(roots, return_inverse=True)
    return labels.reshape(-1)


def ahc_fit(data: Dataset, target_clusters: int = 4, method: str = "ward") -> AhcResult:
    """Merge the normalized samples bottom-up until ``target_clusters`` remain.

    Centers and ranges are reported in physical units, sorted lexicographically.
    """
    validate_positive_int(target_clusters, "target_clusters")
    validate_choice(method, LINKAGES, "linkage")
    n = len(data)
    if target_clusters > n:
        raise ValidationError(f"target_clusters={target_clusters} exceeds sample count {n}")

    if n == 1:
        Z = np.empty((0, 4))
    else:
        Z = linkage(normalize(data), method=method)
    n_merges = n - target_clusters
    labels = replay_merges(Z, n, n_merges)

    centers = np.array([data.features[labels == j].mean(axis=0) for j in range(target_clusters)])
    order = canonical_order(centers)
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    labels = remap[labels]
    centers = centers[order]

    trace = [Merge(int(a), int(b), float(d)) for a, b, d, _ in Z[:n_merges]]
    logger.info(f"AHC ({method}) on {n} samples cut at {target_clusters} clusters")
    return AhcResult(
        labels=labels,
        centers=centers,
        ranges=cluster_ranges(data.features, labels, target_clusters),
        counts=np.bincount(labels, minlength=target_clusters),
        merge_trace=trace,
        linkage_matrix=Z,
        extrema=data.extrema,
        method=method,
    )


def cluster_proximity(
    centers_a: np.ndarray, centers_b: np.ndarray, std: np.ndarray
) -> list[tuple[int, int, float]]:
    """Standardized Euclidean distance between one-to-one matched centers.

    Pairs are chosen to minimize the total distance; returns (index_a, index_b,
    distance) sorted by index_a.
    """
    centers_a = np.atleast_2d(np.asarray(centers_a, dtype=np.float64))
    centers_b = np.atleast_2d(np.asarray(centers_b, dtype=np.float64))
    std = np.asarray(std, dtype=np.float64)
    if centers_a.shape[1] != centers_b.shape[1] or std.shape != (centers_a.shape[1],):
        raise ValidationError(
            f"Dimension mismatch: centers {centers_a.shape[1]} and {centers_b.shape[1]}, "
            f"std {std.shape}"
        )
    if np.any(~(std > 0)):
        raise ValidationError("Per-dimension std must be > 0")

    scaled = (centers_a[:, None, :] - centers_b[None, :, :]) / std
    cost = np.sqrt((scaled**2).sum(axis=2))
    rows, cols = linear_sum_assignment(cost)
    return [(int(i), int(j), float(cost[i, j])) for i, j in zip(rows, cols)]
