"""Fixed-step closed-loop engine and scenario construction."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Optional

from .agents import HumanModel, HumanState, RobotState, human_step, robot_step
from .controllers import (
    ControlCommand,
    ControllerConfig,
    NavConfig,
    StepDiagnostics,
    apf_only_step,
    attraction_only_step,
    combined_step,
    is_visible,
    oval_frames,
    opinion_only_step,
    perceived_opinion,
    scene_rho,
    select_focus_human,
    vortex_command,
)
from .fields import FieldParams, OvalSpec
from .geometry import Pose, Vec2
from .opinion import (
    CouplingParams,
    OpinionParams,
    OpinionState,
    attention_target,
    opinion_to_gamma,
    reset_neutral,
    step_coupled_opinions,
    step_opinion,
)
from .rng import SplitMix64

GOAL_REACHED = "goal_reached"
TIMEOUT = "timeout"
COLLISION = "collision"


@dataclass(frozen=True)
class HumanSpec:
    start: Pose
    model: HumanModel = field(default_factory=HumanModel)
    goal: Optional[Vec2] = None


@dataclass(frozen=True)
class ScenarioSpec:
    robot_start: Pose
    robot_goal: Vec2
    humans: tuple[HumanSpec, ...] = ()
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    opinion: OpinionParams = field(default_factory=OpinionParams)
    oval: OvalSpec = field(default_factory=OvalSpec)
    fields: FieldParams = field(default_factory=FieldParams)
    dual_robot: bool = False
    seed: int = 0
    name: str = ""

    @property
    def nav(self) -> NavConfig:
        return NavConfig(self.controller, self.opinion, self.oval, self.fields)

    def with_controller(self, kind: str) -> ScenarioSpec:
        return replace(self, controller=replace(self.controller, kind=kind))

    def mirrored(self) -> ScenarioSpec:
        """Reflection across the world x-axis, including the neutral rotation convention."""
        humans = tuple(
            HumanSpec(
                h.start.mirrored(),
                replace(
                    h.model,
                    waypoints=tuple(w.mirrored() for w in h.model.waypoints),
                    script=tuple((t, -a) for t, a in h.model.script),
                ),
                None if h.goal is None else h.goal.mirrored(),
            )
            for h in self.humans
        )
        return replace(
            self,
            robot_start=self.robot_start.mirrored(),
            robot_goal=self.robot_goal.mirrored(),
            humans=humans,
            controller=replace(self.controller, tie_gamma=-self.controller.tie_gamma),
            opinion=replace(self.opinion, b_r=-self.opinion.b_r),
        )


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.01
    t_max: float = 60.0
    collision_radius: float = 0.3

    def __post_init__(self) -> None:
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError("SimConfig.dt must be > 0")
        if not self.t_max > self.dt:
            raise ValueError("SimConfig.t_max must exceed dt")
        if not self.collision_radius >= 0:
            raise ValueError("SimConfig.collision_radius must be >= 0")


@dataclass
class AgentTrack:
    agent_id: str
    role: str
    x: list[float] = field(default_factory=list)
    y: list[float] = field(default_factory=list)
    theta: list[float] = field(default_factory=list)
    v: list[float] = field(default_factory=list)
    # robot-only columns
    z: list[float] = field(default_factory=list)
    u: list[float] = field(default_factory=list)
    gamma: list[int] = field(default_factory=list)
    rho: list[float] = field(default_factory=list)
    f_att: list[tuple[float, float]] = field(default_factory=list)
    f_rep: list[tuple[float, float]] = field(default_factory=list)

    @property
    def is_robot(self) -> bool:
        return self.role == "robot"

    def positions(self) -> list[Vec2]:
        return [Vec2(a, b) for a, b in zip(self.x, self.y)]

    def record_pose(self, pose: Pose, v: float) -> None:
        self.x.append(pose.position.x)
        self.y.append(pose.position.y)
        self.theta.append(pose.heading)
        self.v.append(v)

    def record_extras(self, diag: StepDiagnostics) -> None:
        self.z.append(diag.z)
        self.u.append(diag.u)
        self.gamma.append(diag.gamma)
        self.rho.append(diag.rho)
        self.f_att.append((diag.f_att.x, diag.f_att.y))
        self.f_rep.append((diag.f_rep.x, diag.f_rep.y))


@dataclass
class TrajectoryLog:
    dt: float
    t: list[float] = field(default_factory=list)
    tracks: list[AgentTrack] = field(default_factory=list)
    goals: dict[str, tuple[float, float]] = field(default_factory=dict)
    termination: str = TIMEOUT

    def track(self, agent_id: str) -> AgentTrack:
        for tr in self.tracks:
            if tr.agent_id == agent_id:
                return tr
        raise KeyError(agent_id)

    @property
    def robots(self) -> list[AgentTrack]:
        return [tr for tr in self.tracks if tr.is_robot]

    @property
    def humans(self) -> list[AgentTrack]:
        return [tr for tr in self.tracks if not tr.is_robot]

    @property
    def robot(self) -> AgentTrack:
        return self.robots[0]

    def __len__(self) -> int:
        return len(self.t)


@dataclass
class SimResult:
    log: TrajectoryLog
    termination: str
    wall_time: float = 0.0

    @property
    def reached(self) -> bool:
        return self.termination == GOAL_REACHED

    @property
    def collided(self) -> bool:
        return self.termination == COLLISION


def validate_scenario(scenario: ScenarioSpec) -> None:
    if not scenario.robot_goal.is_finite():
        raise ValueError("robot goal must be finite")
    driven = [h for h in scenario.humans if h.model.variant == "robot_driven"]
    if scenario.dual_robot:
        if len(driven) != 1 or len(scenario.humans) != 1:
            raise ValueError("dual-robot scenarios need exactly one other agent, of variant robot_driven")
        if driven[0].goal is None:
            raise ValueError("the second robot needs a goal")
    elif driven:
        raise ValueError("robot_driven agents are only allowed in dual-robot scenarios")


def _step_time(k: int, dt: float) -> float:
    return k * dt


def _collides(robot: Vec2, others, radius: float) -> bool:
    return any(robot.distance_to(o) < radius for o in others)


def _control(kind: str, robot: Pose, humans: list[Pose], goal: Vec2, op: OpinionState, nav: NavConfig, dt: float):
    if kind == "combined":
        return combined_step(robot, humans, goal, op, nav, dt)
    if kind == "opinion_only":
        return opinion_only_step(robot, humans, goal, op, nav, dt)
    if kind == "apf_only":
        cmd, diag = apf_only_step(robot, humans, goal, nav, dt)
        return cmd, op, diag
    cmd, diag = attraction_only_step(robot, goal, nav)
    return cmd, op, diag


def run(scenario: ScenarioSpec, sim: SimConfig = SimConfig()) -> SimResult:
    """Closed-loop run: every tick humans move first, then the robot reacts to the new poses."""
    validate_scenario(scenario)
    if scenario.dual_robot:
        return run_dual_robot(scenario, sim)
    wall0 = time.perf_counter()
    nav = scenario.nav
    kind = scenario.controller.kind
    dt = sim.dt
    n_steps = int(math.ceil(sim.t_max / dt - 1e-9))

    robot = RobotState(scenario.robot_start, 0.0)
    humans = [HumanState(h.start) for h in scenario.humans]
    op = reset_neutral(OpinionState(), scenario.opinion)

    log = TrajectoryLog(dt)
    rtrack = AgentTrack("robot", "robot")
    htracks = [AgentTrack(f"human_{i}", "human") for i in range(len(humans))]
    log.tracks = [rtrack, *htracks]
    log.goals["robot"] = (scenario.robot_goal.x, scenario.robot_goal.y)
    for i, h in enumerate(scenario.humans):
        if h.goal is not None:
            log.goals[f"human_{i}"] = (h.goal.x, h.goal.y)

    def record(k: int, diag: StepDiagnostics) -> None:
        log.t.append(_step_time(k, dt))
        rtrack.record_pose(robot.pose, robot.v)
        rtrack.record_extras(diag)
        for tr, hs, spec in zip(htracks, humans, scenario.humans):
            tr.record_pose(hs.pose, spec.model.speed)

    hposes = [h.pose for h in humans]
    diag0 = StepDiagnostics(
        op.z, op.u, opinion_to_gamma(op.z, scenario.controller.tie_gamma),
        scene_rho(robot.pose, hposes, nav), Vec2(0.0, 0.0), Vec2(0.0, 0.0), None,
    )
    record(0, diag0)
    termination = TIMEOUT
    if _collides(robot.pose.position, [p.position for p in hposes], sim.collision_radius):
        termination = COLLISION
    else:
        for k in range(n_steps):
            t = _step_time(k, dt)
            humans = [human_step(spec.model, hs, t, dt) for spec, hs in zip(scenario.humans, humans)]
            hposes = [h.pose for h in humans]
            cmd, op, diag = _control(kind, robot.pose, hposes, scenario.robot_goal, op, nav, dt)
            robot = robot_step(robot, cmd, dt)
            record(k + 1, diag)
            if _collides(robot.pose.position, [p.position for p in hposes], sim.collision_radius):
                termination = COLLISION
                break
            if robot.pose.position.distance_to(scenario.robot_goal) <= scenario.controller.goal_radius:
                termination = GOAL_REACHED
                break
    log.termination = termination
    return SimResult(log, termination, time.perf_counter() - wall0)


def run_dual_robot(scenario: ScenarioSpec, sim: SimConfig = SimConfig()) -> SimResult:
    """Two robot-guided agents, each wrapped in its own oval, with coupled opinions.

    Each agent perceives the other through the usual focus rules. While both
    see each other the opinions are stepped jointly with full coupling and
    the perceived cue entering as the external stimulus; otherwise each one
    follows the single-robot update (or resets when it sees nothing).
    """
    validate_scenario(scenario)
    if not scenario.dual_robot:
        raise ValueError("scenario is not flagged dual_robot")
    wall0 = time.perf_counter()
    nav = replace(scenario.nav, controller=replace(scenario.controller, kind="combined"))
    params = scenario.opinion
    dt = sim.dt
    n_steps = int(math.ceil(sim.t_max / dt - 1e-9))
    other = scenario.humans[0]
    goals = [scenario.robot_goal, other.goal]
    robots = [RobotState(scenario.robot_start, 0.0), RobotState(other.start, 0.0)]
    ops = [reset_neutral(OpinionState(), params)] * 2
    coupled = CouplingParams(((0, 1), (1, 0)), (params.gamma_r, params.gamma_r))

    log = TrajectoryLog(dt)
    tracks = [AgentTrack("robot_0", "robot"), AgentTrack("robot_1", "robot")]
    log.tracks = tracks
    for tr, g in zip(tracks, goals):
        log.goals[tr.agent_id] = (g.x, g.y)

    def record(k: int, diags) -> None:
        log.t.append(_step_time(k, dt))
        for tr, rs, d in zip(tracks, robots, diags):
            tr.record_pose(rs.pose, rs.v)
            tr.record_extras(d)

    def initial_diag(i: int) -> StepDiagnostics:
        me, them = robots[i].pose, robots[1 - i].pose
        return StepDiagnostics(
            ops[i].z, ops[i].u, opinion_to_gamma(ops[i].z, nav.controller.tie_gamma),
            scene_rho(me, [them], nav), Vec2(0.0, 0.0), Vec2(0.0, 0.0), None,
        )

    record(0, [initial_diag(0), initial_diag(1)])
    termination = TIMEOUT
    done = [False, False]
    if robots[0].pose.position.distance_to(robots[1].pose.position) < sim.collision_radius:
        termination = COLLISION
    else:
        for k in range(n_steps):
            poses = [r.pose for r in robots]
            frames = [oval_frames(poses[i], [poses[1 - i]], nav.oval) for i in range(2)]
            focus = [
                select_focus_human(poses[i], [poses[1 - i]], nav.oval, frames[i], nav.controller.fov_cos_threshold)
                for i in range(2)
            ]
            dists = [poses[0].position.distance_to(poses[1].position)] * 2
            z_hat = [perceived_opinion(poses[i], poses[1 - i], nav) if focus[i] is not None else 0.0 for i in range(2)]
            if focus[0] is not None and focus[1] is not None:
                ops = step_coupled_opinions(
                    ops, [params, params], coupled, dt,
                    biases=[params.b_r + params.gamma_r * zh for zh in z_hat],
                    attention_targets=[attention_target(d, params) for d in dists],
                )
            else:
                ops = [
                    step_opinion(ops[i], z_hat[i], dists[i], dt, params) if focus[i] is not None
                    else reset_neutral(ops[i], params)
                    for i in range(2)
                ]
            cmds, diags = [], []
            for i in range(2):
                if done[i]:
                    cmd = ControlCommand(0.0, 0.0)
                    _, diag = vortex_command(poses[i], [poses[1 - i]], goals[i], ops[i], focus[i], nav, frames[i])
                else:
                    cmd, diag = vortex_command(poses[i], [poses[1 - i]], goals[i], ops[i], focus[i], nav, frames[i])
                cmds.append(cmd)
                diags.append(diag)
            robots = [robot_step(r, c, dt) for r, c in zip(robots, cmds)]
            record(k + 1, diags)
            if robots[0].pose.position.distance_to(robots[1].pose.position) < sim.collision_radius:
                termination = COLLISION
                break
            for i in range(2):
                if robots[i].pose.position.distance_to(goals[i]) <= nav.controller.goal_radius:
                    done[i] = True
            if all(done):
                termination = GOAL_REACHED
                break
    log.termination = termination
    return SimResult(log, termination, time.perf_counter() - wall0)


@dataclass(frozen=True)
class ScenarioBounds:
    """Sampling ranges for :func:`random_scenario`."""

    half_width: float = 8.0
    path_length: tuple[float, float] = (7.0, 10.0)
    human_speed: tuple[float, float] = (0.3, 0.7)
    # angle between the human's walking direction and the robot's, radians
    approach_angle: tuple[float, float] = (math.radians(150.0), math.radians(180.0))
    crossing_fraction: tuple[float, float] = (0.45, 0.65)
    timing_offset: float = 0.3
    min_start_separation: float = 4.5
    conflict_distance: float = 0.15
    max_tries: int = 200

    def __post_init__(self) -> None:
        lo, hi = self.path_length
        if not (6.0 <= lo <= hi):
            raise ValueError("ScenarioBounds.path_length must start at >= 6 m")
        if lo > 2 * math.sqrt(2) * self.half_width:
            raise ValueError("ScenarioBounds.half_width too small for the path length")
        if not (0 < self.human_speed[0] <= self.human_speed[1]):
            raise ValueError("ScenarioBounds.human_speed must be positive and ordered")
        if not 0 <= self.timing_offset <= 1.5:
            raise ValueError("ScenarioBounds.timing_offset must lie in [0, 1.5] s")


def _straight_line_min_distance(
    r0: Vec2, r_goal: Vec2, v_r: float, h0: Vec2, h_vel: Vec2, horizon: float, step: float = 0.01
) -> float:
    """Closest approach of a robot driving straight to its goal and a constant-velocity human."""
    seg = r_goal - r0
    length = seg.norm()
    u = seg * (1.0 / length)
    t_arrive = length / v_r
    best = math.inf
    n = int(horizon / step) + 1
    for k in range(n):
        t = k * step
        rp = r0 + u * (v_r * min(t, t_arrive))
        hp = h0 + h_vel * t
        best = min(best, rp.distance_to(hp))
    return best


def random_scenario(
    seed: int,
    bounds: ScenarioBounds = ScenarioBounds(),
    base: Optional[ScenarioSpec] = None,
) -> ScenarioSpec:
    """Seeded collision-prone encounter between the robot and one walking human.

    Draws (SplitMix64, fixed order): robot start, path heading and length,
    crossing fraction, human speed, approach angle and side, arrival offset.
    The human walks a straight line through a point of the robot's straight
    path and reaches it within ``timing_offset`` of the robot, so a robot
    that ignores the human collides. Draws that fail the checks are redrawn.
    """
    rng = SplitMix64(seed)
    ctrl = base.controller if base is not None else ControllerConfig()
    v_r = ctrl.v_nominal
    hw = bounds.half_width
    for _ in range(bounds.max_tries):
        start = Vec2(rng.uniform(-hw, hw), rng.uniform(-hw, hw))
        heading = rng.angle()
        length = rng.uniform(*bounds.path_length)
        frac = rng.uniform(*bounds.crossing_fraction)
        speed = rng.uniform(*bounds.human_speed)
        approach = rng.uniform(*bounds.approach_angle) * rng.choice_sign()
        offset = rng.uniform(-bounds.timing_offset, bounds.timing_offset)
        direction = Vec2(math.cos(heading), math.sin(heading))
        goal = start + direction * length
        if max(abs(goal.x), abs(goal.y)) > hw:
            continue
        crossing = start + direction * (frac * length)
        t_cross = frac * length / v_r + offset
        h_heading = heading + approach
        h_dir = Vec2(math.cos(h_heading), math.sin(h_heading))
        h_start = crossing - h_dir * (speed * t_cross)
        if h_start.distance_to(start) < bounds.min_start_separation:
            continue
        horizon = length / v_r + 2.0
        if _straight_line_min_distance(start, goal, v_r, h_start, h_dir * speed, horizon) >= bounds.conflict_distance:
            continue
        human = HumanSpec(
            Pose(h_start, h_heading),
            HumanModel("constant_velocity", speed=speed),
            h_start + h_dir * (speed * horizon),
        )
        fields = {} if base is None else {
            "controller": base.controller, "opinion": base.opinion, "oval": base.oval, "fields": base.fields,
        }
        return ScenarioSpec(
            Pose(start, heading), goal, (human,), seed=seed, name=f"random-{seed}", **fields,
        )
    raise RuntimeError(f"no conflicting scenario found for seed {seed} after {bounds.max_tries} draws")
