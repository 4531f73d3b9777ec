"""p-fold splitting and per-style recognition accuracy."""

from typing import Optional

import numpy as np

from ..datagen.generator import Seed
from ..features.types import NOISE_CODE, STYLES, StyleLabel
from ..utils.validators import ValidationError, validate_folds


def kfold_split(n: int, p: int, seed: Seed = 0) -> list[np.ndarray]:
    """Random, disjoint, exhaustive folds whose sizes differ by at most one.

    Indices inside each fold are sorted.
    """
    validate_folds(n, p)
    rng = np.random.default_rng(seed)
    return [np.sort(fold) for fold in np.array_split(rng.permutation(n), p)]


def accuracy(predicted: np.ndarray, truth: np.ndarray) -> dict[StyleLabel, Optional[float]]:
    """Fraction of each style's samples recognized correctly; None when a style is absent."""
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ValidationError(f"Got {len(predicted)} predictions for {len(truth)} samples")
    if np.any(truth == NOISE_CODE):
        raise ValidationError("Ground truth must not contain noise labels")

    result: dict[StyleLabel, Optional[float]] = {}
    for code, style in enumerate(STYLES):
        in_style = truth == code
        total = int(in_style.sum())
        result[style] = None if total == 0 else int((predicted[in_style] == code).sum()) / total
    return result
