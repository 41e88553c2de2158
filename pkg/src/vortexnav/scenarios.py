"""Built-in encounter scenarios used by the ``demo`` command and the tests."""
from __future__ import annotations

import math
from dataclasses import replace

from .agents import HumanModel
from .geometry import Pose, Vec2
from .simulation import HumanSpec, ScenarioSpec

ROBOT_START = Vec2(-4.0, 0.0)
ROBOT_GOAL = Vec2(4.0, 0.0)


def head_on(human_y: float = 0.0, speed: float = 1.0, kind: str = "combined") -> ScenarioSpec:
    """Robot crosses the x-axis eastwards while a non-reactive human walks west.

    ``human_y`` offsets the human's lane; negative puts the human on the
    robot's right.
    """
    human = HumanSpec(
        Pose(Vec2(4.0, human_y), math.pi),
        HumanModel("constant_velocity", speed=speed),
        Vec2(-4.0, human_y),
    )
    spec = ScenarioSpec(Pose(ROBOT_START, 0.0), ROBOT_GOAL, (human,), name=f"head-on y={human_y:g}")
    return spec.with_controller(kind)


def fig3a(kind: str = "combined") -> ScenarioSpec:
    """Human walking towards the robot in a lane slightly to its right."""
    return _named(head_on(-0.6, kind=kind), "fig3a")


def fig3b(kind: str = "combined") -> ScenarioSpec:
    """Mirror image of :func:`fig3a`: the human's lane is to the robot's left."""
    return _named(head_on(0.6, kind=kind), "fig3b")


def dead_ahead(kind: str = "combined") -> ScenarioSpec:
    return _named(head_on(0.0, kind=kind), "dead-ahead")


def fig4(kind: str = "combined") -> ScenarioSpec:
    """Goal down to the right with an oncoming human just left of the direct line."""
    goal = Vec2(4.0, -2.0)
    heading = math.atan2(goal.y - ROBOT_START.y, goal.x - ROBOT_START.x)
    human = HumanSpec(
        Pose(Vec2(2.5, -1.2), math.pi + heading),
        HumanModel("constant_velocity", speed=0.5),
    )
    spec = ScenarioSpec(Pose(ROBOT_START, heading), goal, (human,), name="fig4")
    return spec.with_controller(kind)


def fig5() -> ScenarioSpec:
    """Two robots swapping places along the same line."""
    other = HumanSpec(Pose(ROBOT_GOAL, math.pi), HumanModel("robot_driven"), ROBOT_START)
    return ScenarioSpec(Pose(ROBOT_START, 0.0), ROBOT_GOAL, (other,), dual_robot=True, name="fig5")


def human_behind(distance: float = 1.0, speed: float = 0.0) -> ScenarioSpec:
    """Human standing (or following) directly behind the robot."""
    human = HumanSpec(Pose(Vec2(-distance, 0.0), 0.0), HumanModel("constant_velocity", speed=speed))
    return ScenarioSpec(Pose(Vec2(0.0, 0.0), 0.0), Vec2(6.0, 0.0), (human,), name="human-behind")


def _named(spec: ScenarioSpec, name: str) -> ScenarioSpec:
    return replace(spec, name=name)


DEMOS = {
    "fig3a": fig3a,
    "fig3b": fig3b,
    "fig4": fig4,
    "fig5": fig5,
}
