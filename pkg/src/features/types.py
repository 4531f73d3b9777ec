"""Feature-space domain types."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from ..utils.validators import DataError, ValidationError

FEATURE_NAMES = ("dd", "dv", "da")


class StyleLabel(str, Enum):
    """Decision-making style of a lane-change sample."""

    MODERATE = "moderate"
    VAGUE = "vague"
    AGGRESSIVE = "aggressive"
    NOISE = "noise"

    @property
    def code(self) -> int:
        return ALL_LABELS.index(self)

    @classmethod
    def parse(cls, text: str) -> "StyleLabel":
        try:
            return cls(text)
        except ValueError:
            raise ValidationError(f"Unknown style label: {text!r}")


ALL_LABELS = (StyleLabel.MODERATE, StyleLabel.VAGUE, StyleLabel.AGGRESSIVE, StyleLabel.NOISE)
# Labels a recognizer may be trained on, in label-index order.
STYLES = ALL_LABELS[:3]
NOISE_CODE = StyleLabel.NOISE.code


@dataclass(frozen=True)
class FeatureVector:
    """One lane-change decision point in physical units."""

    dd: float  # m
    dv: float  # m/s
    da: float  # m/s^2

    def __post_init__(self):
        for name in FEATURE_NAMES:
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"Feature {name} must be finite and >= 0, got {value}")

    def as_array(self) -> np.ndarray:
        return np.array([self.dd, self.dv, self.da], dtype=np.float64)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "FeatureVector":
        return cls(float(values[0]), float(values[1]), float(values[2]))


@dataclass(frozen=True, eq=False)
class Extrema:
    """Per-dimension normalization bounds in physical units."""

    lower: np.ndarray
    upper: np.ndarray

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower


@dataclass(frozen=True, eq=False)
class Dataset:
    """Ordered feature samples, optionally labeled, with cached extrema.

    ``features`` is an (N, 3) float array in (dd, dv, da) order; ``labels`` holds
    label indices (see ``ALL_LABELS``) or is None for unlabeled data.
    """

    features: np.ndarray
    labels: Optional[np.ndarray] = None
    extrema: Extrema = field(init=False)

    def __post_init__(self):
        features = np.ascontiguousarray(self.features, dtype=np.float64)
        if features.ndim != 2 or features.shape[1] != len(FEATURE_NAMES):
            raise DataError(f"Expected an (N, 3) feature array, got shape {features.shape}")
        if len(features) == 0:
            raise DataError("Dataset is empty")
        if not np.all(np.isfinite(features)) or np.any(features < 0):
            bad = int(np.argmax(~np.isfinite(features).all(axis=1) | (features < 0).any(axis=1)))
            raise DataError(f"Sample {bad} has a negative or non-finite feature")
        features.setflags(write=False)
        object.__setattr__(self, "features", features)

        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (len(features),):
                raise DataError(f"Got {len(labels)} labels for {len(features)} samples")
            if np.any((labels < 0) | (labels >= len(ALL_LABELS))):
                raise DataError("Label index out of range")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

        extrema = Extrema(features.min(axis=0), features.max(axis=0))
        object.__setattr__(self, "extrema", extrema)

    def __len__(self) -> int:
        return len(self.features)

    @property
    def samples(self) -> list[FeatureVector]:
        return [FeatureVector.from_array(row) for row in self.features]

    @property
    def style_labels(self) -> Optional[list[StyleLabel]]:
        if self.labels is None:
            return None
        return [ALL_LABELS[i] for i in self.labels]

    @classmethod
    def from_vectors(
        cls, vectors: Iterable[FeatureVector], labels: Optional[Iterable[StyleLabel]] = None
    ) -> "Dataset":
        features = np.array([v.as_array() for v in vectors], dtype=np.float64).reshape(-1, 3)
        codes = None if labels is None else np.array([label.code for label in labels])
        return cls(features, codes)

    def subset(self, indices: np.ndarray) -> "Dataset":
        labels = None if self.labels is None else self.labels[indices]
        return Dataset(self.features[indices], labels)

    def without_noise(self) -> "Dataset":
        """Drop samples labeled noise; unlabeled data is returned unchanged."""
        if self.labels is None:
            return self
        return self.subset(np.flatnonzero(self.labels != NOISE_CODE))


@dataclass(frozen=True)
class ScenarioFrame:
    """One simulator frame of the three-vehicle lane-change scenario."""

    t: float  # s
    dA: float  # gap to front vehicle A, m
    dB: float  # gap to side vehicle B, m
    vA: float
    vB: float
    vC: float
    aA: float
    aB: float
    aC: float
    vLatC: float  # lateral velocity of subject vehicle C, m/s

    def __post_init__(self):
        if not (self.dA > 0 and self.dB > 0):
            raise ValidationError(
                f"Gaps must be positive at t={self.t}: dA={self.dA}, dB={self.dB}"
            )


TRAJECTORY_COLUMNS = ("t", "dA", "dB", "vA", "vB", "vC", "aA", "aB", "aC", "vLatC")
