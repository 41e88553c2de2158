"""Human motion models and unicycle robot kinematics."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Pose, Vec2, heading_vector, wrap_angle

WAYPOINT_CAPTURE = 0.2

HUMAN_VARIANTS = ("waypoint_follower", "constant_velocity", "crossing", "erratic_script", "robot_driven")


@dataclass(frozen=True)
class HumanModel:
    variant: str = "constant_velocity"
    speed: float = 1.0
    waypoints: tuple[Vec2, ...] = ()
    # (time, heading) pairs, sorted by time
    script: tuple[tuple[float, float], ...] = ()
    cooperative: bool = False
    turn_rate_max: float = 3.0

    def __post_init__(self) -> None:
        if self.variant not in HUMAN_VARIANTS:
            raise ValueError(f"HumanModel.variant must be one of {HUMAN_VARIANTS}, got {self.variant!r}")
        if not (math.isfinite(self.speed) and self.speed >= 0):
            raise ValueError(f"HumanModel.speed must be >= 0 (got {self.speed!r})")
        if self.variant == "waypoint_follower" and not self.waypoints:
            raise ValueError("HumanModel.waypoints must be non-empty for a waypoint follower")
        if self.turn_rate_max <= 0:
            raise ValueError("HumanModel.turn_rate_max must be > 0")
        times = [t for t, _ in self.script]
        if times != sorted(times):
            raise ValueError("HumanModel.script must be sorted by time")


@dataclass(frozen=True)
class HumanState:
    pose: Pose
    waypoint_index: int = 0


@dataclass(frozen=True)
class RobotState:
    pose: Pose
    v: float = 0.0


def _advance(pose: Pose, heading: float, speed: float, dt: float) -> Pose:
    heading = wrap_angle(heading)
    d = heading_vector(heading)
    return Pose(Vec2(pose.position.x + speed * d.x * dt, pose.position.y + speed * d.y * dt), heading)


def _turn_toward(current: float, target: float, max_step: float) -> float:
    err = wrap_angle(target - current)
    return current + max(-max_step, min(max_step, err))


def human_step(model: HumanModel, state: HumanState, t: float, dt: float) -> HumanState:
    """Advance one scripted human by ``dt`` seconds starting at time ``t``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    pose = state.pose
    if model.variant == "robot_driven":
        raise ValueError("robot-driven agents are stepped by their own controller")
    if model.speed == 0.0:
        return state
    if model.variant in ("constant_velocity", "crossing"):
        return HumanState(_advance(pose, pose.heading, model.speed, dt), state.waypoint_index)
    if model.variant == "erratic_script":
        heading = pose.heading
        for ts, h in model.script:
            if ts <= t:
                heading = h
            else:
                break
        heading = _turn_toward(pose.heading, heading, model.turn_rate_max * dt)
        return HumanState(_advance(pose, heading, model.speed, dt), state.waypoint_index)
    # waypoint follower
    idx = state.waypoint_index
    if not model.waypoints:
        raise ValueError("waypoint follower has no waypoints")
    while idx < len(model.waypoints) - 1 and pose.position.distance_to(model.waypoints[idx]) <= WAYPOINT_CAPTURE:
        idx += 1
    target = model.waypoints[idx]
    to_target = target - pose.position
    dist = to_target.norm()
    if idx == len(model.waypoints) - 1 and dist <= WAYPOINT_CAPTURE:
        return HumanState(pose, idx)
    heading = _turn_toward(pose.heading, to_target.angle(), model.turn_rate_max * dt)
    return HumanState(_advance(pose, heading, min(model.speed, dist / dt), dt), idx)


def robot_step(state: RobotState, cmd, dt: float) -> RobotState:
    """Unicycle Euler step: heading first, then position along the new heading.

    ``cmd`` is anything with ``omega`` and ``v`` attributes.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    v = cmd.v
    heading = wrap_angle(state.pose.heading + cmd.omega * dt)
    p = state.pose.position
    d = heading_vector(heading)
    return RobotState(Pose(Vec2(p.x + v * d.x * dt, p.y + v * d.y * dt), heading), v)
