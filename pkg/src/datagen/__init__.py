"""Synthetic lane-change data: feature samples and kinematic scenarios."""

from .generator import draw_profile, generate_features
from .profiles import (
    DEFAULT_PROFILES,
    NOISE_CLUMP,
    StyleProfile,
    load_profiles,
    validate_profiles,
    with_noise_clump,
)
from .simulator import Trajectory, generate_scenarios, simulate_scenario

__all__ = [
    "DEFAULT_PROFILES",
    "NOISE_CLUMP",
    "StyleProfile",
    "Trajectory",
    "draw_profile",
    "generate_features",
    "generate_scenarios",
    "load_profiles",
    "simulate_scenario",
    "validate_profiles",
    "with_noise_clump",
]
