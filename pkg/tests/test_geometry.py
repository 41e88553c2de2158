import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vortexnav.geometry import (
    OvalFrame,
    Pose,
    Vec2,
    heading_vector,
    oval_to_world,
    oval_to_world_vec,
    relative_bearing,
    world_to_oval,
    wrap_angle,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_wrap_angle_examples():
    assert wrap_angle(0.0) == 0.0
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)
    assert wrap_angle(1.5 * math.pi) == pytest.approx(-0.5 * math.pi)


def test_wrap_angle_rejects_nan():
    with pytest.raises(ValueError):
        wrap_angle(float("nan"))


@given(finite)
def test_wrap_angle_range_and_idempotence(a):
    w = wrap_angle(a)
    assert -math.pi < w <= math.pi
    assert wrap_angle(w) == w
    # same direction on the circle
    assert math.cos(w) == pytest.approx(math.cos(a), abs=1e-9)
    assert math.sin(w) == pytest.approx(math.sin(a), abs=1e-9)


@given(st.floats(min_value=-100, max_value=100, allow_nan=False))
def test_wrap_angle_is_odd_away_from_pi(a):
    w = wrap_angle(a)
    if abs(w) < math.pi:
        assert wrap_angle(-a) == -w


def test_relative_bearing_examples():
    origin = Pose(Vec2(0.0, 0.0), 0.0)
    assert relative_bearing(origin, Vec2(1.0, 1.0)) == pytest.approx(math.pi / 4)
    assert relative_bearing(origin, Vec2(1.0, 0.0)) == 0.0
    assert relative_bearing(Pose(Vec2(0.0, 0.0), math.pi / 2), Vec2(1.0, 0.0)) == pytest.approx(-math.pi / 2)


def test_relative_bearing_coincident_points():
    with pytest.raises(ValueError):
        relative_bearing(Pose(Vec2(1.0, 2.0), 0.3), Vec2(1.0, 2.0))


def test_world_to_oval_examples():
    assert world_to_oval(OvalFrame(Vec2(0.0, 0.0), 0.0), Vec2(2.0, 3.0)) == Vec2(2.0, 3.0)
    p = world_to_oval(OvalFrame(Vec2(1.0, 0.0), math.pi / 2), Vec2(1.0, 2.0))
    assert p.x == pytest.approx(2.0, abs=1e-12)
    assert p.y == pytest.approx(0.0, abs=1e-12)


def test_world_oval_round_trip():
    rng = random.Random(7)
    for _ in range(100):
        frame = OvalFrame(Vec2(rng.uniform(-5, 5), rng.uniform(-5, 5)), rng.uniform(-math.pi, math.pi))
        p = Vec2(rng.uniform(-20, 20), rng.uniform(-20, 20))
        back = oval_to_world(frame, world_to_oval(frame, p))
        assert back.x == pytest.approx(p.x, abs=1e-12)
        assert back.y == pytest.approx(p.y, abs=1e-12)


def test_oval_to_world_vec_rotates_only():
    assert oval_to_world_vec(OvalFrame(Vec2(3.0, 4.0), 0.0), Vec2(1.0, 0.0)) == Vec2(1.0, 0.0)
    v = oval_to_world_vec(OvalFrame(Vec2(3.0, 4.0), math.pi / 2), Vec2(1.0, 0.0))
    assert v.x == pytest.approx(0.0, abs=1e-15)
    assert v.y == pytest.approx(1.0)


@given(finite, finite, st.floats(min_value=-10, max_value=10, allow_nan=False))
def test_rotation_preserves_norm(x, y, angle):
    v = Vec2(x, y)
    w = oval_to_world_vec(OvalFrame(Vec2(0.0, 0.0), angle), v)
    assert w.norm() == pytest.approx(v.norm(), rel=1e-12, abs=1e-12)


def test_heading_vector_is_exact_on_axes():
    assert heading_vector(0.0) == Vec2(1.0, 0.0)
    assert heading_vector(math.pi / 2) == Vec2(0.0, 1.0)
    assert heading_vector(math.pi) == Vec2(-1.0, 0.0)
    assert heading_vector(-math.pi / 2) == Vec2(0.0, -1.0)


def test_pose_mirror_negates_heading_and_y():
    p = Pose(Vec2(1.0, 2.0), 0.4).mirrored()
    assert p.position == Vec2(1.0, -2.0)
    assert p.heading == -0.4


def test_pose_rejects_non_finite():
    with pytest.raises(ValueError):
        Pose(Vec2(float("inf"), 0.0), 0.0)
