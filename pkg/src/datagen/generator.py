"""Labeled synthetic feature samples drawn from style profiles."""

import logging
from typing import Sequence, Union

import numpy as np
from scipy.stats import truncnorm

from ..features.types import Dataset
from ..utils.validators import ValidationError, validate_positive_int
from .profiles import DEFAULT_PROFILES, StyleProfile, validate_profiles

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.Generator, None]


def _truncated(
    center: np.ndarray, spread: float, low: np.ndarray, high: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    if np.any(low > high):
        raise ValidationError(f"Empty draw range: [{low.max()}, {high.min()}]")
    if spread == 0:
        return np.clip(center, low, high)
    a = (low - center) / spread
    b = (high - center) / spread
    return truncnorm.rvs(a, b, loc=center, scale=spread, size=len(center), random_state=rng)


def draw_profile(profile: StyleProfile, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` feature rows (count, 3) from one profile."""
    spread = profile.spread.as_array()
    centers = np.tile(profile.mean.as_array(), (count, 1))
    if profile.da_modes is not None:
        centers[:, 2] = rng.choice(np.asarray(profile.da_modes, dtype=np.float64), size=count)

    low, high = profile.bounds(centers)
    rows = np.empty((count, 3), dtype=np.float64)
    for j in range(3):
        rows[:, j] = _truncated(centers[:, j], spread[j], low[:, j], high[:, j], rng)
    return rows


def generate_features(
    profiles: Sequence[StyleProfile] = DEFAULT_PROFILES, n: int = 9936, seed: Seed = 0
) -> Dataset:
    """Draw ``n`` samples; each sample's profile is picked by weight and labels it."""
    validate_positive_int(n, "n")
    profiles = validate_profiles(profiles)
    rng = np.random.default_rng(seed)

    weights = np.array([p.weight for p in profiles])
    choice = rng.choice(len(profiles), size=n, p=weights / weights.sum())
    features = np.empty((n, 3), dtype=np.float64)
    labels = np.empty(n, dtype=np.int64)
    for i, profile in enumerate(profiles):
        index = np.flatnonzero(choice == i)
        if len(index):
            features[index] = draw_profile(profile, len(index), rng)
        labels[index] = profile.label.code
    logger.info(
        f"Generated {n} samples from {len(profiles)} profiles: "
        + ", ".join(f"{p.label.value}={int((choice == i).sum())}" for i, p in enumerate(profiles))
    )
    return Dataset(features, labels)
