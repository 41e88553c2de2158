"""Robot opinion/attention dynamics and the opinion-to-rotation mapping.

The opinion ``z`` encodes the passing preference (``z > 0``: the human is
passed on the robot's left, ``z < 0``: on its right). The attention ``u``
multiplies the saturating social term; once ``u * alpha_r`` exceeds
``d_r`` the neutral opinion loses stability and ``z`` commits to a side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

CCW = -1
CW = 1


@dataclass(frozen=True)
class OpinionParams:
    d_r: float = 1.5
    alpha_r: float = 100.0
    gamma_r: float = 100.0
    b_r: float = 0.0
    u_lo: float = 0.0
    u_hi: float = 1.5
    R_r: float = 3.0
    n: float = 7.0
    tau_u: float = 0.2
    z_hat_max: float = 10.0

    def __post_init__(self) -> None:
        checks = {
            "d_r": self.d_r > 0,
            "alpha_r": self.alpha_r > 0,
            "u_lo": self.u_lo >= 0,
            "u_hi": self.u_hi > self.u_lo,
            "R_r": self.R_r > 0,
            "n": self.n >= 1,
            "tau_u": self.tau_u > 0,
            "z_hat_max": self.z_hat_max > 0,
        }
        for name, ok in checks.items():
            if not ok:
                raise ValueError(f"OpinionParams.{name} violates its invariant (got {getattr(self, name)!r})")
        for name in ("gamma_r", "b_r"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"OpinionParams.{name} must be finite")


@dataclass(frozen=True)
class OpinionState:
    z: float = 0.0
    u: float = 0.0


@dataclass(frozen=True)
class CouplingParams:
    adjacency: tuple[tuple[int, ...], ...]
    gamma: tuple[float, ...]

    def __post_init__(self) -> None:
        n = len(self.adjacency)
        if any(len(row) != n for row in self.adjacency):
            raise ValueError("adjacency must be square")
        if len(self.gamma) != n:
            raise ValueError("one social weight per agent is required")
        for i, row in enumerate(self.adjacency):
            if any(a not in (0, 1) for a in row):
                raise ValueError("adjacency entries must be 0 or 1")
            if row[i] != 0:
                raise ValueError("adjacency diagonal must be zero")


def perceived_human_opinion(eta_h: float, z_hat_max: float = 10.0) -> float:
    """Opinion read off the human's bearing, ``tan(eta_h)`` clamped."""
    if not abs(eta_h) < math.pi / 2:
        raise ValueError(f"bearing {eta_h!r} is outside (-pi/2, pi/2); the field-of-view gate should have fired")
    return min(max(math.tan(eta_h), -z_hat_max), z_hat_max)


def attention_target(d: float, params: OpinionParams) -> float:
    """Saturating attention set-point, ``u_hi`` at contact and ``u_lo`` far away."""
    if d < 0 or not math.isfinite(d):
        raise ValueError(f"distance must be finite and non-negative, got {d!r}")
    return params.u_lo + (params.u_hi - params.u_lo) / (1.0 + (d / params.R_r) ** params.n)


def _check_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise ValueError(f"non-finite {name}: {v!r}")


def step_opinion(
    state: OpinionState, z_hat_h: float, d: float, dt: float, params: OpinionParams
) -> OpinionState:
    """One Euler step of attention, then of the opinion driven by the updated attention."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    _check_finite(z=state.z, u=state.u, z_hat_h=z_hat_h, d=d, dt=dt)
    z, u = state.z, state.u
    # attention first: the opinion step sees the attention of the current instant
    du = (-u + attention_target(d, params)) / params.tau_u
    u_new = min(max(u + dt * du, params.u_lo), params.u_hi)
    dz = -params.d_r * z + u_new * math.tanh(params.alpha_r * z + params.gamma_r * z_hat_h + params.b_r)
    z_new = z + dt * dz
    _check_finite(z=z_new)
    return OpinionState(z_new, u_new)


def equilibrium_magnitude(u: float, params: OpinionParams, tol: float = 1e-9) -> float:
    """Positive stable equilibrium of ``d_r z = u tanh(alpha_r z)``, or 0 below the bifurcation."""
    if u * params.alpha_r <= params.d_r:
        return 0.0
    f = lambda z: u * math.tanh(params.alpha_r * z) - params.d_r * z  # noqa: E731
    # f > 0 on (0, z*) and f < 0 beyond, since |tanh| <= 1 bounds z* by u/d_r
    lo, hi = 0.0, u / params.d_r + 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def reset_neutral(state: OpinionState, params: OpinionParams) -> OpinionState:
    return OpinionState(0.0, params.u_lo)


def opinion_to_gamma(z: float, tie: int = CCW) -> int:
    """Rotation sense of the vortex field: -1 (counterclockwise) for z > 0, +1 for z < 0.

    ``tie`` is the convention used at exactly ``z == 0``; the default is the
    counterclockwise pass.
    """
    if not math.isfinite(z):
        raise ValueError(f"non-finite opinion {z!r}")
    if z > 0:
        return CCW
    if z < 0:
        return CW
    return tie


def step_coupled_opinions(
    states: Sequence[OpinionState],
    params: Sequence[OpinionParams],
    coupling: CouplingParams,
    dt: float,
    biases: Sequence[float] | None = None,
    attention_targets: Sequence[float] | None = None,
) -> list[OpinionState]:
    """Simultaneous Euler step of the networked opinion model.

    Every agent sees the pre-step opinions of its neighbours. ``biases``
    override each agent's ``b_r`` (used to inject perceived cues as an
    external stimulus). When ``attention_targets`` is given the attentions
    relax toward them as in :func:`step_opinion`; otherwise they are held.
    """
    n = len(states)
    if len(params) != n or len(coupling.adjacency) != n:
        raise ValueError(f"dimension mismatch: {n} states, {len(params)} params, "
                         f"{len(coupling.adjacency)}x{len(coupling.adjacency)} adjacency")
    if dt <= 0:
        raise ValueError("dt must be positive")
    if biases is not None and len(biases) != n:
        raise ValueError("one bias per agent is required")
    if attention_targets is not None and len(attention_targets) != n:
        raise ValueError("one attention target per agent is required")
    z = [s.z for s in states]
    out = []
    for i, (s, p) in enumerate(zip(states, params)):
        social = sum(a * z[k] for k, a in enumerate(coupling.adjacency[i]) if k != i)
        b = p.b_r if biases is None else biases[i]
        u_new = s.u
        if attention_targets is not None:
            u_new = s.u + dt * (-s.u + attention_targets[i]) / p.tau_u
            u_new = min(max(u_new, p.u_lo), p.u_hi)
        dz = -p.d_r * s.z + u_new * math.tanh(p.alpha_r * s.z + coupling.gamma[i] * social + b)
        out.append(OpinionState(s.z + dt * dz, u_new))
    return out


def integrate_opinion_fixed_attention(
    z0: float, u: float, params: OpinionParams, t_end: float, dt: float = 0.01, z_hat_h: float = 0.0
) -> np.ndarray:
    """Euler trajectory of ``z`` with the attention frozen at ``u``."""
    steps = int(round(t_end / dt))
    zs = np.empty(steps + 1)
    zs[0] = z = z0
    drive = params.gamma_r * z_hat_h + params.b_r
    for k in range(steps):
        z = z + dt * (-params.d_r * z + u * math.tanh(params.alpha_r * z + drive))
        zs[k + 1] = z
    return zs

