"""Cluster centers, ranges, style naming and the cluster report CSV."""

import logging
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ..features.types import FEATURE_NAMES, StyleLabel

logger = logging.getLogger(__name__)

REPORT_COLUMNS = [
    "cluster",
    "center_dd",
    "center_dv",
    "center_da",
    "min_dd",
    "max_dd",
    "min_dv",
    "max_dv",
    "min_da",
    "max_da",
    "count",
]


def canonical_order(centers: np.ndarray) -> np.ndarray:
    """Permutation sorting centers lexicographically by (dd, dv, da)."""
    centers = np.asarray(centers)
    # np.lexsort sorts by the last key first
    return np.lexsort(centers.T[::-1])


def cluster_ranges(features: np.ndarray, labels: np.ndarray, n_clusters: int) -> np.ndarray:
    """Per-cluster (min, max) of each feature, shape (J, 3, 2); NaN for empty clusters."""
    ranges = np.full((n_clusters, features.shape[1], 2), np.nan)
    for j in range(n_clusters):
        members = features[labels == j]
        if len(members):
            ranges[j, :, 0] = members.min(axis=0)
            ranges[j, :, 1] = members.max(axis=0)
    return ranges


def name_styles(centers: np.ndarray) -> Optional[list[StyleLabel]]:
    """Name three clusters after the styles their centers describe.

    The cluster with the largest dd center is aggressive; of the other two the one
    with the smaller da center is moderate and the remaining one vague. Returns None
    unless there are exactly three clusters.
    """
    centers = np.asarray(centers)
    if len(centers) != 3:
        logger.warning(f"Found {len(centers)} clusters; style names need exactly 3")
        return None
    aggressive = int(np.argmax(centers[:, 0]))
    rest = [j for j in range(3) if j != aggressive]
    moderate, vague = sorted(rest, key=lambda j: (centers[j, 2], j))
    names: list[StyleLabel] = [StyleLabel.NOISE] * 3
    names[aggressive] = StyleLabel.AGGRESSIVE
    names[moderate] = StyleLabel.MODERATE
    names[vague] = StyleLabel.VAGUE
    return names


def render_cluster_report(
    centers: np.ndarray,
    ranges: np.ndarray,
    counts: Sequence[int],
    names: Optional[Sequence[str]] = None,
) -> str:
    """Render centers and ranges as CSV, one row per cluster."""
    rows = []
    for j, center in enumerate(centers):
        row = {"cluster": names[j] if names is not None else j}
        for i, feature in enumerate(FEATURE_NAMES):
            row[f"center_{feature}"] = float(center[i])
        for i, feature in enumerate(FEATURE_NAMES):
            row[f"min_{feature}"] = float(ranges[j, i, 0])
            row[f"max_{feature}"] = float(ranges[j, i, 1])
        row["count"] = int(counts[j])
        rows.append(row)
    return pd.DataFrame(rows, columns=REPORT_COLUMNS).to_csv(index=False, lineterminator="\n")
