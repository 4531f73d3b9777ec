"""Decision-moment feature extraction from lane-change trajectories."""

from typing import Sequence

from ..utils.validators import DataError, ValidationError
from .types import FeatureVector, ScenarioFrame

# Lateral velocity (m/s) marking the start of a discretionary lane change.
DECISION_THRESHOLD = 0.21


class NoLaneChangeError(DataError):
    """Raised when a trajectory never reaches the decision threshold."""

    pass


def frame_features(frame: ScenarioFrame) -> FeatureVector:
    """Relative distance, speed and acceleration differences at one frame."""
    return FeatureVector(
        dd=abs(frame.dA - frame.dB),
        dv=abs(abs(frame.vA - frame.vC) - abs(frame.vB - frame.vC)),
        da=abs(abs(frame.aA - frame.aC) - abs(frame.aB - frame.aC)),
    )


def find_decision_frame(
    trajectory: Sequence[ScenarioFrame], threshold: float = DECISION_THRESHOLD
) -> int:
    """Index of the first frame whose lateral velocity reaches ``threshold``."""
    if not trajectory:
        raise ValidationError("Trajectory is empty")
    for i in range(1, len(trajectory)):
        if trajectory[i].t < trajectory[i - 1].t:
            raise ValidationError(f"Trajectory time decreases at frame {i}")
    for i, frame in enumerate(trajectory):
        if frame.vLatC >= threshold:
            return i
    raise NoLaneChangeError(
        f"No lane-change executed: lateral velocity never reaches {threshold} m/s"
    )


def extract_decision_point(
    trajectory: Sequence[ScenarioFrame], threshold: float = DECISION_THRESHOLD
) -> FeatureVector:
    """Features of the decision moment (first frame with vLatC >= threshold)."""
    return frame_features(trajectory[find_decision_frame(trajectory, threshold)])
