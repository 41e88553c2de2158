"""Attractive goal field and the oval limit-cycle vortex field."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import OvalFrame, Vec2, oval_to_world_vec, world_to_oval


@dataclass(frozen=True)
class OvalSpec:
    """Oval (egg-curve) limit cycle: semi-axes, deformation, centre shift, feedback gains."""

    b1: float = 2.5
    b2: float = 5.0
    nu: float = 0.5
    x_t: float = 1.25
    alpha1: float = 0.5
    alpha2: float = 5.0

    def __post_init__(self) -> None:
        for name in ("b1", "b2", "alpha1", "alpha2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"OvalSpec.{name} must be finite and > 0 (got {v!r})")
        for name in ("nu", "x_t"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"OvalSpec.{name} must be finite")

    @property
    def epsilon(self) -> float:
        return self.b1 / self.b2

    @classmethod
    def from_epsilon(cls, b1: float = 2.5, epsilon: float = 0.5, **kw) -> OvalSpec:
        if not (math.isfinite(epsilon) and epsilon > 0):
            raise ValueError(f"OvalSpec.epsilon must be finite and > 0 (got {epsilon!r})")
        return cls(b1=b1, b2=b1 / epsilon, **kw)


@dataclass(frozen=True)
class FieldParams:
    k_att: float = 1.0
    k_rep_base: float = 1.0
    f_max: float = 5.0

    def __post_init__(self) -> None:
        for name in ("k_att", "k_rep_base", "f_max"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"FieldParams.{name} must be finite and > 0 (got {v!r})")


def rho(oval: OvalSpec, x1: float, x2: float) -> float:
    """Implicit oval function: positive inside, zero on the curve, negative outside."""
    return 1.0 - (x1 / oval.b1) ** 2 - (x2 / oval.b2) ** 2 * math.exp(oval.nu * x1)


def feedforward(oval: OvalSpec, x1_bar: float, x2: float) -> Vec2:
    """Circulating term of the oval field, evaluated at the translated coordinate.

    The quadratic coefficient ``nu * b1 / (2 * b2)`` keeps the term tangent
    to the ``rho = 0`` curve for any semi-axes (it equals ``nu / (2 b1 b2)``
    only when ``b1 == 1``).
    """
    b1, b2, nu = oval.b1, oval.b2, oval.nu
    e = math.exp(0.5 * nu * x1_bar)
    return Vec2(
        -b1 * (x2 / b2) * e,
        b2 * (x1_bar / b1) / e + x2 * x2 * e * nu * b1 / (2.0 * b2),
    )


def feedback(oval: OvalSpec, x1: float, x2: float) -> Vec2:
    """Radial term ``(x1 - x_t, x2) * rho(x1, x2)``."""
    r = rho(oval, x1, x2)
    return Vec2((x1 - oval.x_t) * r, x2 * r)


def limit_cycle_flow(oval: OvalSpec, x1: float, x2: float, gamma: int) -> Vec2:
    """State-evolution field of the oval limit cycle translated by ``x_t``.

    Coordinates are measured from the human; the curve ``rho(x1 - x_t, x2) = 0``
    is the attracting orbit. Feedback is active on both sides of it and
    ``gamma = +1`` circulates counterclockwise.
    """
    xb = x1 - oval.x_t
    r = rho(oval, xb, x2)
    ff = feedforward(oval, xb, x2)
    return Vec2(gamma * ff.x + oval.alpha1 * xb * r, gamma * ff.y + oval.alpha2 * x2 * r)


def attractive_force(robot: Vec2, goal: Vec2, k_att: float, goal_radius: float = 0.0) -> Vec2:
    """Constant-magnitude pull toward the goal; zero once inside ``goal_radius``."""
    d = goal - robot
    dist = d.norm()
    if dist <= goal_radius or dist == 0.0:
        return Vec2(0.0, 0.0)
    return d * (k_att / dist)


def build_oval_frame(human: Vec2, robot: Vec2, oval: OvalSpec) -> OvalFrame:
    """Oval frame around ``human`` whose x1-axis points at the robot.

    The centre sits ``x_t`` ahead of the human along that axis, so the human
    lies at local ``(-x_t, 0)``, inside the wide lobe when ``nu > 0``.
    """
    d = robot - human
    dist = d.norm()
    if dist == 0.0:
        raise ValueError("oval axis undefined: human and robot coincide")
    return OvalFrame(human + d * (oval.x_t / dist), math.atan2(d.y, d.x))


def vortex_force(
    oval: OvalSpec,
    frame: OvalFrame,
    robot_world: Vec2,
    gamma: int,
    u: float,
    params: FieldParams,
    u_hi: float = 1.5,
) -> Vec2:
    """World-frame repulsive vortex force on the robot, scaled by attention ``u``.

    This is the limit-cycle flow gated to the inside of the oval; the frame
    origin is the translated centre, so both terms act about it.
    """
    k_rep = params.k_rep_base * (u / u_hi)
    if k_rep == 0.0:
        return Vec2(0.0, 0.0)
    p = world_to_oval(frame, robot_world)
    if rho(oval, p.x, p.y) <= 0.0:
        return Vec2(0.0, 0.0)
    f = oval_to_world_vec(frame, limit_cycle_flow(oval, p.x + oval.x_t, p.y, gamma) * k_rep)
    mag = f.norm()
    if mag > params.f_max:
        f = f * (params.f_max / mag)
    return f


def robot_rho(oval: OvalSpec, frame: OvalFrame, robot_world: Vec2) -> float:
    p = world_to_oval(frame, robot_world)
    return rho(oval, p.x, p.y)
