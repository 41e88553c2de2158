import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from vortexnav.fields import (
    FieldParams,
    OvalSpec,
    attractive_force,
    build_oval_frame,
    feedback,
    feedforward,
    limit_cycle_flow,
    rho,
    robot_rho,
    vortex_force,
)
from vortexnav.geometry import OvalFrame, Vec2, world_to_oval

OVAL = OvalSpec()


def curve_half_width(oval, x1):
    """Closed-form x2 >= 0 on rho(x1, x2) = 0 for |x1| <= b1."""
    return oval.b2 * math.sqrt(max(0.0, 1.0 - (x1 / oval.b1) ** 2) * math.exp(-oval.nu * x1))


def curve_points(oval, n=2000):
    """Closed polygon of the rho = 0 curve, from the closed-form half-width."""
    pts = []
    for i in range(n):
        s = 2 * math.pi * i / n
        x1 = -oval.b1 * math.cos(s)
        w = curve_half_width(oval, x1)
        pts.append((x1, w if s <= math.pi else -w))
    return pts


def ray_cast_inside(poly, x, y):
    """Even-odd rule: count polygon edges crossed by a ray toward +x."""
    p = np.asarray(poly)
    x0, y0 = p[:, 0], p[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    straddle = (y0 > y) != (y1 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
    return bool(np.count_nonzero(straddle & (xc > x)) % 2)


def grad_rho_fd(oval, x1, x2, h=1e-6):
    return (
        (rho(oval, x1 + h, x2) - rho(oval, x1 - h, x2)) / (2 * h),
        (rho(oval, x1, x2 + h) - rho(oval, x1, x2 - h)) / (2 * h),
    )


def test_defaults():
    assert (OVAL.b1, OVAL.b2, OVAL.nu, OVAL.x_t, OVAL.alpha1, OVAL.alpha2) == (2.5, 5.0, 0.5, 1.25, 0.5, 5.0)
    assert OVAL.epsilon == 0.5
    assert OvalSpec.from_epsilon(2.5, 0.5) == OVAL


@pytest.mark.parametrize("field", ["b1", "b2", "alpha1", "alpha2"])
def test_oval_invariants_name_the_field(field):
    with pytest.raises(ValueError, match=f"OvalSpec.{field}"):
        OvalSpec(**{field: -1.0})


def test_rho_examples():
    assert rho(OVAL, 0.0, 0.0) == 1.0
    assert rho(OVAL, 2.5, 0.0) == 0.0
    assert rho(OVAL, 0.0, 5.0) == 0.0


def test_rho_sign_matches_ray_casting():
    poly = curve_points(OVAL)
    checked = 0
    for x1 in np.linspace(-4.0, 4.0, 41):
        for x2 in np.linspace(-9.0, 9.0, 41):
            r = rho(OVAL, x1, x2)
            if abs(r) < 1e-2:  # too close to the curve for the polygon
                continue
            assert (r > 0) == ray_cast_inside(poly, x1, x2), (x1, x2)
            checked += 1
    assert checked > 1500


def test_feedforward_examples():
    assert feedforward(OVAL, 0.0, 0.0) == Vec2(0.0, 0.0)
    ellipse = OvalSpec(nu=0.0)
    ff = feedforward(ellipse, ellipse.b1, 0.0)
    assert ff.x == pytest.approx(0.0) and ff.y == pytest.approx(ellipse.b2)
    # substitution at (0, b2): (-b1, b2^2 * nu * b1 / (2 b2)) = (-2.5, 3.125)
    ff = feedforward(OVAL, 0.0, 5.0)
    assert ff.x == pytest.approx(-2.5)
    assert ff.y == pytest.approx(3.125)


def test_feedforward_circular_reduction():
    circle = OvalSpec(b1=2.0, b2=2.0, nu=0.0)
    for x1, x2 in [(0.3, -1.2), (1.0, 1.0), (-2.0, 0.5)]:
        ff = feedforward(circle, x1, x2)
        assert ff.x == pytest.approx(-x2) and ff.y == pytest.approx(x1)


@pytest.mark.parametrize("oval", [OVAL, OvalSpec(b1=1.0, b2=3.0, nu=0.8), OvalSpec(b1=4.0, b2=1.5, nu=-0.3)])
def test_feedforward_is_tangent_to_the_curve(oval):
    for x1 in np.linspace(-0.95 * oval.b1, 0.95 * oval.b1, 25):
        for sign in (1, -1):
            x2 = sign * curve_half_width(oval, x1)
            g = grad_rho_fd(oval, x1, x2)
            ff = feedforward(oval, x1, x2)
            cos = (ff.x * g[0] + ff.y * g[1]) / (math.hypot(*g) * ff.norm())
            assert abs(cos) < 1e-6, (x1, x2, cos)


def test_printed_quadratic_coefficient_is_not_tangent():
    # the coefficient nu / (2 b1 b2) only matches when b1 == 1
    x1, x2 = 0.0, OVAL.b2
    ff = Vec2(-OVAL.b1 * x2 / OVAL.b2, OVAL.b2 * x1 / OVAL.b1 + x2 * x2 * OVAL.nu / (2 * OVAL.b1 * OVAL.b2))
    g = grad_rho_fd(OVAL, x1, x2)
    assert abs(ff.x * g[0] + ff.y * g[1]) > 0.1


def test_feedback_examples():
    assert feedback(OVAL, 2.5, 0.0) == Vec2(0.0, 0.0)
    assert feedback(OVAL, 0.0, 0.0) == Vec2(-1.25, 0.0)
    assert feedback(OVAL, 0.0, 5.0) == Vec2(-0.0, 0.0)


@given(st.floats(-4, 4), st.floats(-8, 8))
def test_feedback_direction(x1, x2):
    oval = OvalSpec(x_t=0.0)
    fb = feedback(oval, x1, x2)
    outward = fb.x * x1 + fb.y * x2
    r = rho(oval, x1, x2)
    if r > 0:
        assert outward >= 0
    elif r < 0:
        assert outward <= 0


def test_flow_on_curve_is_tangential():
    x1 = OVAL.b1 + OVAL.x_t
    f = limit_cycle_flow(OVAL, x1, 0.0, 1)
    assert f.x == pytest.approx(0.0, abs=1e-12)
    assert f.y == pytest.approx(OVAL.b2 * math.exp(-0.25 * OVAL.nu * 2 * OVAL.b1))


@given(st.floats(-5, 5), st.floats(-8, 8))
def test_flow_gamma_flips_tangential_only(x1, x2):
    a = limit_cycle_flow(OVAL, x1, x2, 1)
    b = limit_cycle_flow(OVAL, x1, x2, -1)
    ff = feedforward(OVAL, x1 - OVAL.x_t, x2)
    fb = feedback(OvalSpec(x_t=0.0), x1 - OVAL.x_t, x2)
    assert (a.x + b.x) / 2 == pytest.approx(OVAL.alpha1 * fb.x, rel=1e-9, abs=1e-9)
    assert (a.y + b.y) / 2 == pytest.approx(OVAL.alpha2 * fb.y, rel=1e-9, abs=1e-9)
    assert (a.x - b.x) / 2 == pytest.approx(ff.x, rel=1e-9, abs=1e-9)
    assert (a.y - b.y) / 2 == pytest.approx(ff.y, rel=1e-9, abs=1e-9)


def integrate_flow(x1, x2, gamma, t_end=30.0):
    def rhs(t, s):
        f = limit_cycle_flow(OVAL, s[0], s[1], gamma)
        return [f.x, f.y]

    sol = solve_ivp(rhs, (0.0, t_end), [x1, x2], rtol=1e-8, atol=1e-10, dense_output=True)
    assert sol.success
    return sol


@pytest.mark.parametrize("start", [(0.1, 0.1), (0.1 + OVAL.x_t, 0.1)])
def test_flow_converges_from_inside(start):
    sol = integrate_flow(*start, gamma=-1, t_end=20.0)
    x1, x2 = sol.y[:, -1]
    assert abs(rho(OVAL, x1 - OVAL.x_t, x2)) < 1e-3


def test_flow_winding_sense_follows_gamma():
    for gamma in (-1, 1):
        sol = integrate_flow(OVAL.x_t + 0.5, 1.0, gamma, t_end=30.0)
        ts = np.linspace(10.0, 30.0, 4000)
        xs, ys = sol.sol(ts)
        ang = np.unwrap(np.arctan2(ys, xs - OVAL.x_t))
        assert np.sign(ang[-1] - ang[0]) == gamma


def test_attractive_force_examples():
    assert attractive_force(Vec2(0, 0), Vec2(2, 0), 1.0) == Vec2(1.0, 0.0)
    assert attractive_force(Vec2(0, 0), Vec2(0, -3), 2.0) == Vec2(0.0, -2.0)
    assert attractive_force(Vec2(0, 0), Vec2(0.05, 0), 1.0, goal_radius=0.1) == Vec2(0.0, 0.0)
    assert attractive_force(Vec2(1, 1), Vec2(1, 1), 1.0) == Vec2(0.0, 0.0)


def test_build_oval_frame_examples():
    f = build_oval_frame(Vec2(0, 0), Vec2(3, 0), OVAL)
    assert f.center == Vec2(1.25, 0.0) and f.axis_angle == 0.0
    f = build_oval_frame(Vec2(0, 0), Vec2(0, 2), OVAL)
    assert f.center.x == pytest.approx(0.0) and f.center.y == pytest.approx(1.25)
    assert f.axis_angle == pytest.approx(math.pi / 2)
    h = world_to_oval(f, Vec2(0, 0))
    assert h.x == pytest.approx(-OVAL.x_t) and h.y == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        build_oval_frame(Vec2(1, 1), Vec2(1, 1), OVAL)


def test_robot_rho_depends_on_distance_only():
    for d in (0.5, 2.0, 3.7, 3.8, 6.0):
        frame = build_oval_frame(Vec2(0, 0), Vec2(d, 0), OVAL)
        assert robot_rho(OVAL, frame, Vec2(d, 0)) == pytest.approx(1 - ((d - OVAL.x_t) / OVAL.b1) ** 2)
    assert robot_rho(OVAL, build_oval_frame(Vec2(0, 0), Vec2(3.7, 0), OVAL), Vec2(3.7, 0)) > 0
    assert robot_rho(OVAL, build_oval_frame(Vec2(0, 0), Vec2(3.8, 0), OVAL), Vec2(3.8, 0)) < 0


FP = FieldParams()


def test_vortex_outside_is_zero():
    frame = OvalFrame(Vec2(0, 0), 0.0)
    assert vortex_force(OVAL, frame, Vec2(10.0, 0.0), -1, 1.5, FP) == Vec2(0.0, 0.0)


def test_vortex_zero_attention_is_zero():
    frame = OvalFrame(Vec2(0, 0), 0.0)
    assert vortex_force(OVAL, frame, Vec2(0.5, 0.5), -1, 0.0, FP) == Vec2(0.0, 0.0)


def test_vortex_composes_flow_terms():
    # identity frame, x_t = 0, unit gains: just inside the top of the curve
    oval = OvalSpec(alpha1=1.0, alpha2=1.0, x_t=0.0)
    p = Vec2(0.0, 4.9)
    r = rho(oval, p.x, p.y)
    ff = feedforward(oval, p.x, p.y)
    expected = Vec2(-ff.x + 0.0, -ff.y + p.y * r)
    f = vortex_force(oval, OvalFrame(Vec2(0, 0), 0.0), p, -1, 1.5, FP)
    assert f.x == pytest.approx(expected.x) and f.y == pytest.approx(expected.y)
    assert f.x > 0  # gamma = -1 sweeps the top of the oval toward +x1


def test_vortex_scales_with_attention():
    frame = build_oval_frame(Vec2(0, 0), Vec2(2.0, 0.0), OVAL)
    full = vortex_force(OVAL, frame, Vec2(2.0, 0.0), 1, 1.5, FieldParams(f_max=100.0))
    half = vortex_force(OVAL, frame, Vec2(2.0, 0.0), 1, 0.75, FieldParams(f_max=100.0))
    assert half.x == pytest.approx(full.x / 2) and half.y == pytest.approx(full.y / 2)


def test_vortex_magnitude_capped():
    rng = random.Random(3)
    for _ in range(500):
        human = Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3))
        robot = Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if human.distance_to(robot) < 1e-6:
            continue
        frame = build_oval_frame(human, robot, OVAL)
        f = vortex_force(OVAL, frame, robot, rng.choice((-1, 1)), rng.uniform(0, 1.5), FieldParams(f_max=0.5))
        assert f.norm() <= 0.5 + 1e-12


def test_vortex_pushes_sideways_and_away_in_front_of_human():
    # human at origin, robot 2 m east: gamma = -1 pushes the robot south (its left when facing west)
    frame = build_oval_frame(Vec2(0, 0), Vec2(2.0, 0.0), OVAL)
    f = vortex_force(OVAL, frame, Vec2(2.0, 0.0), -1, 1.5, FP)
    assert f.y < 0 and f.x > 0
