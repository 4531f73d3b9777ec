"""Kinematic three-vehicle lane-change scenario.

Front vehicle A drives ahead of the subject vehicle C in C's lane; side vehicle B
drives behind C in the target lane. A and B regulate the gap between them toward
30 m (A brakes and B accelerates while the gap is larger). C keeps its speed and
moves over one lane along a half-cosine lateral profile. The state at the decision
moment is built so that the decision-point features hit a requested target.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from ..features.extraction import DECISION_THRESHOLD, extract_decision_point
from ..features.types import Dataset, FeatureVector, ScenarioFrame
from ..utils.validators import NumericError
from .generator import Seed, draw_profile
from .profiles import StyleProfile, validate_profiles

logger = logging.getLogger(__name__)

FRAME_RATE = 50.0  # Hz
LANE_WIDTH = 3.75  # m
LANE_CHANGE_DURATION = 4.0  # s
GAP_SETPOINT = 30.0  # m
GAP_RANGE = (20.0, 40.0)  # m, A-B gap at the decision moment
GAP_EXCLUSION = 4.0  # m, keeps the regulation error away from zero
MIN_VEHICLE_GAP = 10.0  # m, smallest C-A or C-B gap at the decision moment
SPEED_RANGE = (42.0, 58.0)  # km/h
SPEED_OFFSET = 0.5  # m/s, extra A-B speed difference so C sits between them
FRONT_GAIN = 0.02  # 1/s^2
MAX_ACCEL = 1.5  # m/s^2
PRE_ROLL = (1.5, 2.0)  # s before the decision moment
POST_ROLL = 0.5  # s after the maneuver completes
MAX_ATTEMPTS = 20
ODE_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class Trajectory:
    frames: list[ScenarioFrame]
    lateral_offsets: np.ndarray  # subject vehicle, m from its starting lane center
    target: FeatureVector
    decision_time: float

    def __len__(self) -> int:
        return len(self.frames)


def lateral_profile(t: np.ndarray, start: float) -> tuple[np.ndarray, np.ndarray]:
    """Lateral offset and velocity of a half-cosine lane change beginning at ``start``."""
    phase = np.clip((np.asarray(t) - start) / LANE_CHANGE_DURATION, 0.0, 1.0)
    offset = LANE_WIDTH / 2 * (1 - np.cos(np.pi * phase))
    velocity = LANE_WIDTH * np.pi / (2 * LANE_CHANGE_DURATION) * np.sin(np.pi * phase)
    return offset, velocity


def _accelerations(gap: float, front_gain: float, side_gain: float) -> tuple[float, float]:
    error = gap - GAP_SETPOINT
    a_front = float(np.clip(-front_gain * error, -MAX_ACCEL, MAX_ACCEL))
    a_side = float(np.clip(side_gain * error, -MAX_ACCEL, MAX_ACCEL))
    return a_front, a_side


def _draw_gap(dd: float, rng: np.random.Generator) -> float:
    low = max(GAP_RANGE[0], dd + 2 * MIN_VEHICLE_GAP)
    high = max(GAP_RANGE[1], low)
    pieces = [
        (low, min(high, GAP_SETPOINT - GAP_EXCLUSION)),
        (max(low, GAP_SETPOINT + GAP_EXCLUSION), high),
    ]
    pieces = [(a, b) for a, b in pieces if b > a]
    if not pieces:
        return max(low, GAP_SETPOINT + GAP_EXCLUSION)
    lengths = np.array([b - a for a, b in pieces])
    a, b = pieces[rng.choice(len(pieces), p=lengths / lengths.sum())]
    return float(rng.uniform(a, b))


def _decision_state(target: FeatureVector, rng: np.random.Generator):
    """State [xA, vA, xB, vB, xC, vC] and gains reproducing ``target`` at the decision moment."""
    gap = _draw_gap(target.dd, rng)
    near, far = (gap - target.dd) / 2, (gap + target.dd) / 2
    d_front, d_side = (far, near) if rng.random() < 0.5 else (near, far)

    v_front = rng.uniform(*SPEED_RANGE) / 3.6
    v_side = v_front + rng.choice([-1.0, 1.0]) * (target.dv + SPEED_OFFSET)
    v_subject = (v_front + v_side) / 2 + rng.choice([-1.0, 1.0]) * target.dv / 2

    extra = target.da / abs(gap - GAP_SETPOINT)
    if rng.random() < 0.5:
        front_gain, side_gain = FRONT_GAIN, FRONT_GAIN + extra
    else:
        front_gain, side_gain = FRONT_GAIN + extra, FRONT_GAIN

    state = np.array([d_front, v_front, -d_side, v_side, 0.0, v_subject])
    return state, front_gain, side_gain


def _rollout(target: FeatureVector, rng: np.random.Generator) -> Optional[Trajectory]:
    dt = 1.0 / FRAME_RATE
    decision_time = round(rng.uniform(*PRE_ROLL) * FRAME_RATE) / FRAME_RATE
    peak = LANE_WIDTH * math.pi / (2 * LANE_CHANGE_DURATION)
    ramp = LANE_CHANGE_DURATION / math.pi * math.asin(DECISION_THRESHOLD / peak)
    # the threshold is crossed a quarter frame before the decision frame
    start = decision_time - ramp - dt / 4
    end = start + LANE_CHANGE_DURATION + POST_ROLL

    state, front_gain, side_gain = _decision_state(target, rng)

    def dynamics(t, y):
        a_front, a_side = _accelerations(y[0] - y[2], front_gain, side_gain)
        return [y[1], a_front, y[3], a_side, y[5], 0.0]

    backward = solve_ivp(
        dynamics, (decision_time, 0.0), state, rtol=ODE_TOLERANCE, atol=ODE_TOLERANCE
    )
    if not backward.success:
        raise NumericError(f"Scenario integration failed: {backward.message}")
    times = np.arange(int(math.ceil(end * FRAME_RATE)) + 1) / FRAME_RATE
    forward = solve_ivp(
        dynamics,
        (0.0, times[-1]),
        backward.y[:, -1],
        t_eval=times,
        rtol=ODE_TOLERANCE,
        atol=ODE_TOLERANCE,
    )
    if not forward.success:
        raise NumericError(f"Scenario integration failed: {forward.message}")

    offsets, lateral_speed = lateral_profile(times, start)
    frames = []
    for i, t in enumerate(times):
        x_front, v_front, x_side, v_side, x_subject, v_subject = forward.y[:, i]
        d_front, d_side = x_front - x_subject, x_subject - x_side
        if d_front <= 0 or d_side <= 0:
            return None
        a_front, a_side = _accelerations(x_front - x_side, front_gain, side_gain)
        frames.append(
            ScenarioFrame(
                t=float(t),
                dA=float(d_front),
                dB=float(d_side),
                vA=float(v_front),
                vB=float(v_side),
                vC=float(v_subject),
                aA=a_front,
                aB=a_side,
                aC=0.0,
                vLatC=float(lateral_speed[i]),
            )
        )
    return Trajectory(
        frames=frames, lateral_offsets=offsets, target=target, decision_time=decision_time
    )


def simulate_scenario(
    profile: StyleProfile, seed: Seed = 0, target: Optional[FeatureVector] = None
) -> Trajectory:
    """Roll out one lane change whose decision-point features approximate ``target``.

    ``target`` defaults to the profile mean. Draws that would let two vehicles touch
    are redrawn.
    """
    rng = np.random.default_rng(seed)
    target = profile.mean_vector if target is None else target
    for _ in range(MAX_ATTEMPTS):
        trajectory = _rollout(target, rng)
        if trajectory is not None:
            return trajectory
    raise NumericError(f"No collision-free scenario for target {target} in {MAX_ATTEMPTS} tries")


def generate_scenarios(
    profiles: Sequence[StyleProfile], n: int, seed: Seed = 0
) -> tuple[Dataset, list[Trajectory]]:
    """Simulate ``n`` lane changes and extract their decision points.

    Each scenario's target is a feature draw from a profile picked by weight.
    """
    profiles = validate_profiles(profiles)
    rng = np.random.default_rng(seed)
    weights = np.array([p.weight for p in profiles])
    choice = rng.choice(len(profiles), size=n, p=weights / weights.sum())

    trajectories, vectors, labels = [], [], []
    for i in choice:
        profile = profiles[i]
        target = FeatureVector.from_array(draw_profile(profile, 1, rng)[0])
        trajectory = simulate_scenario(profile, rng, target)
        trajectories.append(trajectory)
        vectors.append(extract_decision_point(trajectory.frames))
        labels.append(profile.label)
    logger.info(f"Simulated {n} lane-change scenarios")
    return Dataset.from_vectors(vectors, labels), trajectories
