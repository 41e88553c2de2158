"""Planar vectors, poses and the oval-frame transforms."""
from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap ``a`` into the half-open interval (-pi, pi].

    Values already inside the interval are returned unchanged, and the
    mapping is odd (``wrap_angle(-a) == -wrap_angle(a)``) away from the
    +/-pi boundary, which the mirror-symmetry checks rely on.
    """
    if not math.isfinite(a):
        raise ValueError(f"cannot wrap non-finite angle {a!r}")
    if -math.pi < a <= math.pi:
        return a
    r = math.remainder(a, TWO_PI)
    if r <= -math.pi:
        r = math.pi
    return r


@dataclass(frozen=True, slots=True)
class Vec2:
    x: float
    y: float

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> Vec2:
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __neg__(self) -> Vec2:
        return Vec2(-self.x, -self.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)

    def rotated(self, angle: float) -> Vec2:
        c, s = math.cos(angle), math.sin(angle)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)

    def mirrored(self) -> Vec2:
        """Reflection across the world x-axis."""
        return Vec2(self.x, -self.y)

    def distance_to(self, other: Vec2) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


ORIGIN = Vec2(0.0, 0.0)

# cos/sin of the float nearest a multiple of pi/2 leave residues ~1e-16
_SNAP = 1e-15


def heading_vector(heading: float) -> Vec2:
    """Unit vector along ``heading``, exact at multiples of pi/2."""
    c, s = math.cos(heading), math.sin(heading)
    if abs(c) < _SNAP:
        c = 0.0
    if abs(s) < _SNAP:
        s = 0.0
    return Vec2(c, s)


@dataclass(frozen=True, slots=True)
class Pose:
    position: Vec2
    heading: float = 0.0

    def __post_init__(self) -> None:
        if not self.position.is_finite():
            raise ValueError(f"non-finite position {self.position}")
        object.__setattr__(self, "heading", wrap_angle(self.heading))

    def direction(self) -> Vec2:
        return heading_vector(self.heading)

    def mirrored(self) -> Pose:
        return Pose(self.position.mirrored(), -self.heading)


@dataclass(frozen=True, slots=True)
class OvalFrame:
    """Local frame of an oval: origin at ``center``, x1-axis at ``axis_angle``."""

    center: Vec2
    axis_angle: float

    def __post_init__(self) -> None:
        if not self.center.is_finite():
            raise ValueError(f"non-finite frame center {self.center}")
        object.__setattr__(self, "axis_angle", wrap_angle(self.axis_angle))


def relative_bearing(observer: Pose, target: Vec2) -> float:
    """Bearing of ``target`` seen from ``observer``; positive means to the left."""
    d = target - observer.position
    if d.x == 0.0 and d.y == 0.0:
        raise ValueError("bearing undefined for coincident points")
    return wrap_angle(math.atan2(d.y, d.x) - observer.heading)


def world_to_oval(frame: OvalFrame, p: Vec2) -> Vec2:
    c, s = math.cos(frame.axis_angle), math.sin(frame.axis_angle)
    dx, dy = p.x - frame.center.x, p.y - frame.center.y
    return Vec2(c * dx + s * dy, -s * dx + c * dy)


def oval_to_world(frame: OvalFrame, q: Vec2) -> Vec2:
    return frame.center + oval_to_world_vec(frame, q)


def oval_to_world_vec(frame: OvalFrame, v: Vec2) -> Vec2:
    c, s = math.cos(frame.axis_angle), math.sin(frame.axis_angle)
    return Vec2(c * v.x - s * v.y, s * v.x + c * v.y)
