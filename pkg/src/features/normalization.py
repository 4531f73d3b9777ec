"""Min-max normalization and integer quantization of feature samples."""

from typing import Sequence, Union

import numpy as np

from ..utils.validators import NumericError, ValidationError, validate_positive_int
from .types import FEATURE_NAMES, Dataset, Extrema


class DegenerateDimensionError(NumericError):
    """Raised when a feature dimension has no spread to normalize over."""

    pass


def check_spread(extrema: Extrema) -> None:
    """Reject extrema with max == min in any dimension."""
    for i, name in enumerate(FEATURE_NAMES):
        if not extrema.upper[i] > extrema.lower[i]:
            raise DegenerateDimensionError(
                f"Dimension {name} is degenerate: min == max == {extrema.lower[i]}"
            )


def normalize_with(features: np.ndarray, extrema: Extrema, clip: bool = False) -> np.ndarray:
    """Normalize physical features with given extrema.

    Points outside the extrema (test points) are clipped to [0, 1] when ``clip`` is set.
    """
    check_spread(extrema)
    normalized = (np.asarray(features, dtype=np.float64) - extrema.lower) / extrema.span
    if clip:
        np.clip(normalized, 0.0, 1.0, out=normalized)
    return normalized


def normalize(data: Dataset) -> np.ndarray:
    """Normalize a dataset with its own cached extrema; result lies in [0, 1]^3."""
    return normalize_with(data.features, data.extrema)


def denormalize(normalized: np.ndarray, extrema: Extrema) -> np.ndarray:
    """Map normalized features back to physical units."""
    return np.asarray(normalized, dtype=np.float64) * extrema.span + extrema.lower


def quantize(
    normalized: Union[float, np.ndarray], q: Union[int, Sequence[int]]
) -> Union[int, np.ndarray]:
    """Map normalized values to grid coordinates fix(x * q) + 1 in [1, q + 1].

    ``q`` may be a single level or one level per trailing dimension.
    """
    values = np.asarray(normalized, dtype=np.float64)
    if np.any(~np.isfinite(values)) or np.any(values < 0.0) or np.any(values > 1.0):
        raise ValidationError("Quantization input must lie in [0, 1]")
    levels = np.asarray(q)
    if levels.ndim == 0:
        validate_positive_int(int(levels), "q")
    else:
        for level in levels:
            validate_positive_int(int(level), "q")
    coords = np.trunc(values * levels).astype(np.int64) + 1
    if coords.ndim == 0:
        return int(coords)
    return coords


def quantize_dataset(data: Dataset, q: Sequence[int]) -> np.ndarray:
    """Quantize every sample of a dataset to 1-based grid coordinates, shape (N, 3)."""
    return quantize(normalize(data), tuple(q))
