"""Lloyd's k-means on normalized feature samples."""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..utils.validators import NumericError, ValidationError, validate_positive_int

logger = logging.getLogger(__name__)

# Relative slack for the SSE monotonicity check (floating-point summation order).
SSE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class KMeansModel:
    """Fitted k-means: centers, per-sample assignments and the SSE after each update."""

    centers: np.ndarray
    assignments: np.ndarray
    iterations: int
    converged: bool
    sse_history: list[float] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.centers)

    @property
    def sse(self) -> float:
        return self.sse_history[-1] if self.sse_history else float("nan")


def squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """(N, k) squared Euclidean distances."""
    diffs = points[:, None, :] - centers[None, :, :]
    return (diffs**2).sum(axis=2)


def within_cluster_sse(points: np.ndarray, centers: np.ndarray, assignments: np.ndarray) -> float:
    return float(((points - centers[assignments]) ** 2).sum())


def _repair_empty(
    points: np.ndarray, centers: np.ndarray, assignments: np.ndarray, k: int
) -> np.ndarray:
    """Move the farthest point of a multi-member cluster into each empty cluster."""
    assignments = assignments.copy()
    counts = np.bincount(assignments, minlength=k)
    for empty in np.flatnonzero(counts == 0):
        distances = ((points - centers[assignments]) ** 2).sum(axis=1)
        distances[counts[assignments] < 2] = -1.0
        donor = int(np.argmax(distances))
        counts[assignments[donor]] -= 1
        assignments[donor] = empty
        counts[empty] = 1
        centers[empty] = points[donor]
        logger.debug(f"Re-seeded empty cluster {empty} from sample {donor}")
    return assignments


def kmeans_fit(data: np.ndarray, k: int, seed: int = 0, max_iter: int = 300) -> KMeansModel:
    """Alternate nearest-center assignment and mean update until assignments stop changing.

    Initial centers are k distinct samples chosen at random. ``converged`` is False
    when ``max_iter`` passes run out first.
    """
    points = np.asarray(data, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    validate_positive_int(k, "k")
    validate_positive_int(max_iter, "max_iter")
    distinct = np.unique(points, axis=0)
    if k > len(distinct):
        raise ValidationError(f"k={k} exceeds the {len(distinct)} distinct samples")

    rng = np.random.default_rng(seed)
    centers = distinct[np.sort(rng.choice(len(distinct), size=k, replace=False))].copy()
    assignments = np.full(len(points), -1, dtype=np.int64)
    history: list[float] = []
    converged = False
    iterations = max_iter

    for it in range(1, max_iter + 1):
        new_assignments = np.argmin(squared_distances(points, centers), axis=1)
        if np.array_equal(new_assignments, assignments):
            converged = True
            iterations = it - 1
            break
        assignments = _repair_empty(points, centers, new_assignments, k)
        for j in range(k):
            centers[j] = points[assignments == j].mean(axis=0)

        sse = within_cluster_sse(points, centers, assignments)
        if history and sse > history[-1] * (1 + SSE_TOLERANCE) + SSE_TOLERANCE:
            raise NumericError(f"k-means SSE increased at iteration {it}: {history[-1]} -> {sse}")
        history.append(sse)

    if not converged:
        logger.warning(f"k-means (k={k}) did not converge within {max_iter} iterations")
    return KMeansModel(
        centers=centers,
        assignments=assignments,
        iterations=iterations,
        converged=converged,
        sse_history=history,
    )


def kmeans_assign(model: KMeansModel, x: np.ndarray) -> int:
    """Index of the nearest center; ties go to the lowest index."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return int(np.argmin(((model.centers - x) ** 2).sum(axis=1)))
