"""Navigation policies: opinion + vortex field, and the two single-method baselines.

All three read the same scene (robot pose, human poses, goal) and return a
unicycle command. Conventions shared by every policy:

* the perceived human opinion uses the human's bearing measured clockwise
  (positive when the human is on the robot's right), so ``z > 0`` means the
  robot passes on the left and keeps the human on its right;
* ``gamma = -1`` is the default rotation sense of the vortex field, chosen
  for ``z >= 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .fields import FieldParams, OvalSpec, attractive_force, build_oval_frame, robot_rho, vortex_force
from .geometry import OvalFrame, Pose, Vec2, relative_bearing, wrap_angle
from .opinion import (
    CCW,
    OpinionParams,
    OpinionState,
    opinion_to_gamma,
    perceived_human_opinion,
    reset_neutral,
    step_opinion,
)

CONTROLLER_KINDS = ("combined", "opinion_only", "apf_only", "none")
PERCEPTION_MODES = ("bearing", "heading")


@dataclass(frozen=True)
class ControlCommand:
    omega: float
    v: float


@dataclass(frozen=True)
class ControllerConfig:
    kind: str = "combined"
    omega_max: float = 2.0
    v_nominal: float = 1.0
    beta_r: float = math.pi / 4
    fov_cos_threshold: float = 0.5
    goal_radius: float = 0.75
    perception: str = "bearing"
    # rotation sense used when the opinion is exactly neutral
    tie_gamma: int = CCW

    def __post_init__(self) -> None:
        if self.kind not in CONTROLLER_KINDS:
            raise ValueError(f"ControllerConfig.kind must be one of {CONTROLLER_KINDS}, got {self.kind!r}")
        if self.perception not in PERCEPTION_MODES:
            raise ValueError(f"ControllerConfig.perception must be one of {PERCEPTION_MODES}")
        for name in ("omega_max", "v_nominal", "goal_radius"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"ControllerConfig.{name} must be > 0 (got {v!r})")
        if not -1.0 < self.fov_cos_threshold < 1.0:
            raise ValueError("ControllerConfig.fov_cos_threshold must lie in (-1, 1)")
        if not math.isfinite(self.beta_r):
            raise ValueError("ControllerConfig.beta_r must be finite")
        if self.tie_gamma not in (-1, 1):
            raise ValueError("ControllerConfig.tie_gamma must be -1 or +1")


@dataclass(frozen=True)
class NavConfig:
    """Everything a policy needs besides the scene."""

    controller: ControllerConfig = field(default_factory=ControllerConfig)
    opinion: OpinionParams = field(default_factory=OpinionParams)
    oval: OvalSpec = field(default_factory=OvalSpec)
    fields: FieldParams = field(default_factory=FieldParams)


@dataclass(frozen=True)
class StepDiagnostics:
    z: float
    u: float
    gamma: int
    rho: float
    f_att: Vec2
    f_rep: Vec2
    focus: Optional[int]


def is_visible(robot: Pose, target: Vec2, cos_threshold: float) -> bool:
    d = target - robot.position
    if d.x == 0.0 and d.y == 0.0:
        return True
    return math.cos(relative_bearing(robot, target)) > cos_threshold


def oval_frames(robot: Pose, humans: Sequence[Pose], oval: OvalSpec) -> list[Optional[OvalFrame]]:
    frames = []
    for h in humans:
        if h.position == robot.position:
            frames.append(None)
        else:
            frames.append(build_oval_frame(h.position, robot.position, oval))
    return frames


def select_focus_human(
    robot: Pose,
    humans: Sequence[Pose],
    oval: OvalSpec,
    frames: Optional[Sequence[Optional[OvalFrame]]] = None,
    cos_threshold: float = 0.5,
) -> Optional[int]:
    """Closest human that is both inside its oval and inside the field of view."""
    if frames is None:
        frames = oval_frames(robot, humans, oval)
    best, best_d = None, math.inf
    for i, (h, frame) in enumerate(zip(humans, frames)):
        if frame is None:
            continue
        if robot_rho(oval, frame, robot.position) <= 0.0:
            continue
        if not is_visible(robot, h.position, cos_threshold):
            continue
        d = robot.position.distance_to(h.position)
        if d < best_d:
            best, best_d = i, d
    return best


def perceived_angle(robot: Pose, human: Pose, mode: str = "bearing") -> Optional[float]:
    """Angle fed to the perceived-opinion map, positive toward the robot's right.

    ``bearing`` uses where the human is; ``heading`` uses where the human is
    walking relative to a head-on approach, and returns ``None`` when the
    human walks away (no passing cue).
    """
    if mode == "bearing":
        return -relative_bearing(robot, human.position)
    eta = wrap_angle(human.heading - robot.heading - math.pi)
    if abs(eta) >= math.pi / 2:
        return None
    return eta


def perceived_rho(robot: Pose, humans: Sequence[Pose], frames, oval: OvalSpec, cos_threshold: float) -> float:
    """Largest oval function at the robot over the humans it can see, ``-inf`` if none."""
    best = -math.inf
    for h, frame in zip(humans, frames):
        if frame is None or not is_visible(robot, h.position, cos_threshold):
            continue
        best = max(best, robot_rho(oval, frame, robot.position))
    return best


def _heading_command(robot: Pose, desired: float, cfg: ControllerConfig, at_goal: bool) -> ControlCommand:
    if at_goal:
        return ControlCommand(0.0, 0.0)
    err = wrap_angle(desired - robot.heading)
    return ControlCommand(max(-cfg.omega_max, min(cfg.omega_max, err)), cfg.v_nominal)


def _at_goal(robot: Pose, goal: Vec2, cfg: ControllerConfig) -> bool:
    return robot.position.distance_to(goal) <= cfg.goal_radius


def perceived_opinion(robot: Pose, human: Pose, configs: NavConfig) -> float:
    eta = perceived_angle(robot, human, configs.controller.perception)
    return 0.0 if eta is None else perceived_human_opinion(eta, configs.opinion.z_hat_max)


def update_opinion(robot, humans, focus, opinion_state, configs: NavConfig, dt):
    """Reset to neutral without a focus human, otherwise one opinion/attention step."""
    params = configs.opinion
    if focus is None:
        return reset_neutral(opinion_state, params)
    h = humans[focus]
    z_hat = perceived_opinion(robot, h, configs)
    return step_opinion(opinion_state, z_hat, robot.position.distance_to(h.position), dt, params)


def _check_force(**terms: Vec2) -> None:
    for name, f in terms.items():
        if not f.is_finite():
            raise FloatingPointError(f"non-finite force term {name}: {f}")


def vortex_command(
    robot: Pose,
    humans: Sequence[Pose],
    goal: Vec2,
    op: OpinionState,
    focus: Optional[int],
    configs: NavConfig,
    frames: Optional[Sequence[Optional[OvalFrame]]] = None,
) -> tuple[ControlCommand, StepDiagnostics]:
    """Force assembly and heading command for an already-updated opinion state.

    With a focus human the vortex fields of every human are summed using the
    focus human's rotation sense and attention; without one the robot is
    steered by the goal attraction alone.
    """
    cfg, oval = configs.controller, configs.oval
    if frames is None:
        frames = oval_frames(robot, humans, oval)
    gamma = opinion_to_gamma(op.z, cfg.tie_gamma)
    f_att = attractive_force(robot.position, goal, configs.fields.k_att, cfg.goal_radius)
    f_rep = Vec2(0.0, 0.0)
    if focus is not None:
        for i, frame in enumerate(frames):
            if frame is None:
                continue
            term = vortex_force(oval, frame, robot.position, gamma, op.u, configs.fields, configs.opinion.u_hi)
            _check_force(**{f"vortex[{i}]": term})
            f_rep = f_rep + term
        rho_now = robot_rho(oval, frames[focus], robot.position)
    else:
        rho_now = perceived_rho(robot, humans, frames, oval, cfg.fov_cos_threshold)
    _check_force(f_att=f_att, f_rep=f_rep)
    total = f_att + f_rep
    cmd = _heading_command(robot, math.atan2(total.y, total.x), cfg, _at_goal(robot, goal, cfg))
    return cmd, StepDiagnostics(op.z, op.u, gamma, rho_now, f_att, f_rep, focus)


def combined_step(
    robot: Pose,
    humans: Sequence[Pose],
    goal: Vec2,
    opinion_state: OpinionState,
    configs: NavConfig,
    dt: float,
) -> tuple[ControlCommand, OpinionState, StepDiagnostics]:
    """Opinion-selected vortex avoidance (one iteration of the heading loop)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    frames = oval_frames(robot, humans, configs.oval)
    focus = select_focus_human(robot, humans, configs.oval, frames, configs.controller.fov_cos_threshold)
    op = update_opinion(robot, humans, focus, opinion_state, configs, dt)
    cmd, diag = vortex_command(robot, humans, goal, op, focus, configs, frames)
    return cmd, op, diag


def opinion_only_step(
    robot: Pose,
    humans: Sequence[Pose],
    goal: Vec2,
    opinion_state: OpinionState,
    configs: NavConfig,
    dt: float,
) -> tuple[ControlCommand, OpinionState, StepDiagnostics]:
    """Heading deviation proportional to the opinion, no repulsive field."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    cfg, oval, params = configs.controller, configs.oval, configs.opinion
    frames = oval_frames(robot, humans, oval)
    focus = select_focus_human(robot, humans, oval, frames, cfg.fov_cos_threshold)
    op = update_opinion(robot, humans, focus, opinion_state, configs, dt)
    d = goal - robot.position
    goal_bearing = math.atan2(d.y, d.x)
    deviation = cfg.beta_r * math.tanh(op.z) * (op.u / params.u_hi)
    if focus is not None:
        rho_now = robot_rho(oval, frames[focus], robot.position)
    else:
        rho_now = perceived_rho(robot, humans, frames, oval, cfg.fov_cos_threshold)
    cmd = _heading_command(robot, goal_bearing + deviation, cfg, _at_goal(robot, goal, cfg))
    f_att = attractive_force(robot.position, goal, configs.fields.k_att, cfg.goal_radius)
    diag = StepDiagnostics(op.z, op.u, opinion_to_gamma(op.z, cfg.tie_gamma), rho_now, f_att, Vec2(0.0, 0.0), focus)
    return cmd, op, diag


def apf_only_step(
    robot: Pose,
    humans: Sequence[Pose],
    goal: Vec2,
    configs: NavConfig,
    dt: float,
) -> tuple[ControlCommand, StepDiagnostics]:
    """Vortex-field avoidance with a fixed rotation sense and full repulsive gain."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    cfg, oval = configs.controller, configs.oval
    frames = oval_frames(robot, humans, oval)
    f_att = attractive_force(robot.position, goal, configs.fields.k_att, cfg.goal_radius)
    f_rep = Vec2(0.0, 0.0)
    rho_now = -math.inf
    for i, frame in enumerate(frames):
        if frame is None:
            continue
        rho_now = max(rho_now, robot_rho(oval, frame, robot.position))
        term = vortex_force(oval, frame, robot.position, CCW, configs.opinion.u_hi, configs.fields, configs.opinion.u_hi)
        _check_force(**{f"vortex[{i}]": term})
        f_rep = f_rep + term
    total = f_att + f_rep
    cmd = _heading_command(robot, math.atan2(total.y, total.x), cfg, _at_goal(robot, goal, cfg))
    return cmd, StepDiagnostics(0.0, 0.0, CCW, rho_now, f_att, f_rep, None)


def attraction_only_step(robot: Pose, goal: Vec2, configs: NavConfig) -> tuple[ControlCommand, StepDiagnostics]:
    """Goal attraction alone; used to expose the raw conflict of a scenario."""
    cfg = configs.controller
    f_att = attractive_force(robot.position, goal, configs.fields.k_att, cfg.goal_radius)
    cmd = _heading_command(robot, math.atan2(f_att.y, f_att.x), cfg, _at_goal(robot, goal, cfg))
    return cmd, StepDiagnostics(0.0, 0.0, CCW, -math.inf, f_att, Vec2(0.0, 0.0), None)


def scene_rho(robot: Pose, humans: Sequence[Pose], configs: NavConfig) -> float:
    """Oval function the given policy would log for this scene before acting."""
    frames = oval_frames(robot, humans, configs.oval)
    if configs.controller.kind == "apf_only":
        vals = [robot_rho(configs.oval, f, robot.position) for f in frames if f is not None]
        return max(vals, default=-math.inf)
    if configs.controller.kind == "none":
        return -math.inf
    return perceived_rho(robot, humans, frames, configs.oval, configs.controller.fov_cos_threshold)
