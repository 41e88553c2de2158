import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vortexnav.agents import WAYPOINT_CAPTURE, HumanModel, HumanState, RobotState, human_step, robot_step
from vortexnav.controllers import ControlCommand
from vortexnav.geometry import Pose, Vec2


def test_constant_velocity_euler():
    s = human_step(HumanModel("constant_velocity", speed=1.0), HumanState(Pose(Vec2(0, 0), 0.0)), 0.0, 0.1)
    assert s.pose.position.x == pytest.approx(0.1) and s.pose.position.y == 0.0


def test_zero_speed_keeps_pose():
    start = HumanState(Pose(Vec2(1.0, -2.0), 0.7))
    for variant in ("constant_velocity", "crossing"):
        assert human_step(HumanModel(variant, speed=0.0), start, 0.0, 0.1) == start


def test_waypoint_follower_advances_index():
    model = HumanModel("waypoint_follower", speed=1.0, waypoints=(Vec2(1.0, 0.0), Vec2(1.0, 2.0)))
    s = HumanState(Pose(Vec2(0.9, 0.0), 0.0))
    s = human_step(model, s, 0.0, 0.01)
    assert s.waypoint_index == 1


def test_waypoint_follower_reaches_every_waypoint():
    wps = (Vec2(3.0, 0.0), Vec2(3.0, 3.0), Vec2(-1.0, 2.0))
    model = HumanModel("waypoint_follower", speed=0.8, waypoints=wps)
    s = HumanState(Pose(Vec2(0.0, 0.0), math.pi))
    visited = set()
    for k in range(3000):
        s = human_step(model, s, k * 0.01, 0.01)
        for i, w in enumerate(wps):
            if s.pose.position.distance_to(w) <= WAYPOINT_CAPTURE:
                visited.add(i)
    assert visited == {0, 1, 2}
    assert s.pose.position.distance_to(wps[-1]) <= WAYPOINT_CAPTURE


def test_waypoint_follower_needs_waypoints():
    with pytest.raises(ValueError):
        HumanModel("waypoint_follower", waypoints=())


def test_erratic_script_turns_at_limited_rate():
    model = HumanModel("erratic_script", speed=1.0, script=((0.0, 0.0), (1.0, math.pi / 2)), turn_rate_max=3.0)
    s = HumanState(Pose(Vec2(0, 0), 0.0))
    s = human_step(model, s, 0.5, 0.1)
    assert s.pose.heading == 0.0
    s = human_step(model, s, 1.0, 0.1)
    assert s.pose.heading == pytest.approx(0.3)
    for k in range(10):
        s = human_step(model, s, 1.1 + 0.1 * k, 0.1)
    assert s.pose.heading == pytest.approx(math.pi / 2)


def test_robot_driven_is_not_scripted():
    with pytest.raises(ValueError):
        human_step(HumanModel("robot_driven"), HumanState(Pose(Vec2(0, 0), 0.0)), 0.0, 0.1)


def test_invalid_models():
    with pytest.raises(ValueError, match="HumanModel.speed"):
        HumanModel(speed=-1.0)
    with pytest.raises(ValueError, match="HumanModel.variant"):
        HumanModel("teleporting")


def test_robot_step_examples():
    s = robot_step(RobotState(Pose(Vec2(0, 0), 0.0)), ControlCommand(0.0, 1.0), 0.1)
    assert s.pose.position == Vec2(0.1, 0.0)
    s = robot_step(RobotState(Pose(Vec2(1, 1), 0.0)), ControlCommand(0.5, 0.0), 0.1)
    assert s.pose.position == Vec2(1.0, 1.0) and s.pose.heading == pytest.approx(0.05)
    s = robot_step(RobotState(Pose(Vec2(0, 0), 0.0)), ControlCommand(math.pi / 0.1, 0.0), 0.1)
    assert s.pose.heading == math.pi


def test_robot_heading_updates_before_position():
    s = robot_step(RobotState(Pose(Vec2(0, 0), 0.0)), ControlCommand(math.pi / 2 / 0.1, 1.0), 0.1)
    assert s.pose.position.x == pytest.approx(0.0, abs=1e-15)
    assert s.pose.position.y == pytest.approx(0.1)


@given(st.floats(-math.pi, math.pi), st.floats(-2, 2), st.floats(0, 2), st.floats(0.001, 0.1))
def test_robot_step_displacement(heading, omega, v, dt):
    s0 = RobotState(Pose(Vec2(0.3, -0.2), heading))
    s1 = robot_step(s0, ControlCommand(omega, v), dt)
    assert s1.pose.position.distance_to(s0.pose.position) == pytest.approx(v * dt, rel=1e-12, abs=1e-15)
    dh = math.remainder(s1.pose.heading - heading - omega * dt, 2 * math.pi)
    assert abs(dh) < 1e-12
