"""Style profiles: the per-style distributions synthetic samples are drawn from."""

from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pydantic
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..features.types import FeatureVector, StyleLabel
from ..utils.validators import DataError, ValidationError

# Truncation half-width of each draw, in spreads.
TRUNCATION = 2.5
WEIGHT_TOLERANCE = 1e-6


class Triple(BaseModel):
    """Per-feature values in physical units."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dd: float = Field(ge=0)
    dv: float = Field(ge=0)
    da: float = Field(ge=0)

    def as_array(self) -> np.ndarray:
        return np.array([self.dd, self.dv, self.da], dtype=np.float64)


class StyleProfile(BaseModel):
    """Truncated-normal draws around ``mean``, limited to ``mean +- 2.5 * spread``
    and to the optional ``lower``/``upper`` ranges; features never go below zero.

    ``da_modes`` replaces the single da mean by an equal mixture over the listed modes.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    label: StyleLabel
    mean: Triple
    spread: Triple
    weight: float = Field(gt=0, le=1)
    lower: Optional[Triple] = None
    upper: Optional[Triple] = None
    da_modes: Optional[list[float]] = None

    @model_validator(mode="after")
    def _check_ranges(self) -> "StyleProfile":
        if self.lower is not None and self.upper is not None:
            if np.any(self.lower.as_array() > self.upper.as_array()):
                raise ValueError("lower range exceeds upper range")
        if self.da_modes is not None and (
            not self.da_modes or any(mode < 0 for mode in self.da_modes)
        ):
            raise ValueError("da_modes must be a non-empty list of values >= 0")
        return self

    @property
    def mean_vector(self) -> FeatureVector:
        return FeatureVector(self.mean.dd, self.mean.dv, self.mean.da)

    def bounds(self, center: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Draw limits around ``center``, an array whose last axis is (dd, dv, da)."""
        spread = self.spread.as_array()
        low = np.maximum(center - TRUNCATION * spread, 0.0)
        high = center + TRUNCATION * spread
        if self.lower is not None:
            low = np.maximum(low, self.lower.as_array())
        if self.upper is not None:
            high = np.minimum(high, self.upper.as_array())
        return low, high


def _profile(label, mean, spread, weight, lower=None, upper=None) -> StyleProfile:
    def triple(values):
        return None if values is None else Triple(dd=values[0], dv=values[1], da=values[2])

    return StyleProfile(
        label=label,
        mean=triple(mean),
        spread=triple(spread),
        weight=weight,
        lower=triple(lower),
        upper=triple(upper),
    )


# Centers and ranges of the three styles found in the simulator study.
DEFAULT_PROFILES = (
    _profile(
        StyleLabel.MODERATE,
        (4.6597, 0.4779, 0.0470),
        (1.0, 0.2, 0.00585),
        1 / 3,
        (0.009, 0.0036, 0.002),
        (12.446, 1.1273, 0.0831),
    ),
    _profile(
        StyleLabel.VAGUE,
        (4.4702, 0.5335, 0.1153),
        (1.0, 0.2, 0.00585),
        1 / 3,
        (0.009, 0.036, 0.085),
        (11.5193, 1.2958, 0.1951),
    ),
    _profile(
        StyleLabel.AGGRESSIVE,
        (15.727, 0.6962, 0.1012),
        (1.15, 0.2, 0.006),
        1 / 3,
        (6.2681, 0.0223, 0.0444),
        (30.9796, 1.8764, 0.1854),
    ),
)

# A small tight group far from the styles, standing in for outlying drivers.
NOISE_CLUMP = _profile(StyleLabel.NOISE, (17.0, 1.6, 0.04), (0.5, 0.04, 0.002), 0.019)


def with_noise_clump(
    profiles: Sequence[StyleProfile] = DEFAULT_PROFILES, clump: StyleProfile = NOISE_CLUMP
) -> list[StyleProfile]:
    """Profiles plus the noise clump, with the other weights scaled to keep the sum at 1."""
    scale = 1.0 - clump.weight
    scaled = [p.model_copy(update={"weight": p.weight * scale}) for p in profiles]
    return scaled + [clump]


def validate_profiles(profiles: Sequence[StyleProfile]) -> list[StyleProfile]:
    """Check a profile set: non-empty and weights summing to 1."""
    profiles = list(profiles)
    if not profiles:
        raise ValidationError("At least one style profile is required")
    total = sum(p.weight for p in profiles)
    if abs(total - 1.0) > WEIGHT_TOLERANCE:
        raise ValidationError(f"Profile weights must sum to 1, got {total}")
    return profiles


def load_profiles(path: Union[str, Path]) -> list[StyleProfile]:
    """Read profiles from a YAML file with a top-level ``profiles`` list."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"Profile file not found: {path}")
    try:
        with open(path) as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise DataError(f"{path}: {e}")
    if not isinstance(raw, dict) or not isinstance(raw.get("profiles"), list):
        raise DataError(f"{path}: expected a top-level 'profiles' list")

    profiles = []
    for i, entry in enumerate(raw["profiles"]):
        try:
            profiles.append(StyleProfile.model_validate(entry))
        except pydantic.ValidationError as e:
            raise DataError(f"{path}: profile {i + 1}: {e}")
    try:
        return validate_profiles(profiles)
    except ValidationError as e:
        raise DataError(f"{path}: {e}")
