"""Dependency-free SVG rendering of trajectory logs.

Robot paths are red, human paths blue, goals are stars. Every path of a run
switches from solid to dashed at the first logged step with rho > 0, i.e.
when the robot enters the limit cycle. Output depends only on the logs and
the style, so it can be compared as text.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

from .fields import OvalSpec, build_oval_frame
from .geometry import Vec2, oval_to_world
from .simulation import AgentTrack, TrajectoryLog

ROBOT_COLORS = ("#d62728", "#8c1515")
HUMAN_COLOR = "#1f5fbf"
OVAL_COLOR = "#7f7f7f"
# per-run opacity so overlaid runs stay distinguishable
RUN_OPACITY = (1.0, 0.6, 0.35, 0.2)


@dataclass(frozen=True)
class SvgStyle:
    px_per_m: float = 50.0
    margin_m: float = 1.0
    precision: int = 3
    stroke_width: float = 2.0
    oval_at: Optional[float] = None
    oval: OvalSpec = field(default_factory=OvalSpec)
    labels: Optional[tuple[str, ...]] = None
    title: str = ""


def first_inside_index(track: AgentTrack) -> Optional[int]:
    """Index of the first step with rho > 0, or ``None`` if the oval is never entered."""
    for k, r in enumerate(track.rho):
        if r > 0:
            return k
    return None


def oval_outline(oval: OvalSpec, human: Vec2, robot: Vec2, samples: int = 96) -> list[Vec2]:
    """World-frame points of the rho = 0 curve of the oval around ``human`` facing ``robot``."""
    frame = build_oval_frame(human, robot, oval)
    pts = []
    for i in range(samples + 1):
        # x1 = -b1 cos(s) sweeps the axis; the half-width follows from rho = 0
        s = 2.0 * math.pi * i / samples
        x1 = -oval.b1 * math.cos(s)
        half = oval.b2 * math.sqrt(max(0.0, 1.0 - (x1 / oval.b1) ** 2) * math.exp(-oval.nu * x1))
        x2 = half if s <= math.pi else -half
        pts.append(oval_to_world(frame, Vec2(x1, x2)))
    return pts


def _ovals(log: TrajectoryLog, style: SvgStyle) -> list[list[Vec2]]:
    """Outlines around every other agent, oriented at the first robot, at the step nearest ``oval_at``."""
    robots = log.robots
    if style.oval_at is None or not robots or not log.t:
        return []
    k = min(range(len(log.t)), key=lambda i: abs(log.t[i] - style.oval_at))
    robot = Vec2(robots[0].x[k], robots[0].y[k])
    out = []
    for tr in log.tracks:
        other = Vec2(tr.x[k], tr.y[k])
        if tr is not robots[0] and other.distance_to(robot) > 0.0:
            out.append(oval_outline(style.oval, other, robot))
    return out


class _Canvas:
    def __init__(self, xmin: float, xmax: float, ymin: float, ymax: float, style: SvgStyle):
        self.s = style
        self.xmin, self.ymax = xmin, ymax
        self.width = (xmax - xmin) * style.px_per_m
        self.height = (ymax - ymin) * style.px_per_m
        self.bounds = (xmin, xmax, ymin, ymax)

    def num(self, v: float) -> str:
        s = f"{v:.{self.s.precision}f}".rstrip("0").rstrip(".")
        return "0" if s in ("-0", "") else s

    def pt(self, x: float, y: float) -> str:
        px = (x - self.xmin) * self.s.px_per_m
        py = (self.ymax - y) * self.s.px_per_m
        return f"{self.num(px)},{self.num(py)}"

    def polyline(self, xs, ys, color: str, dashed: bool) -> str:
        pts = " ".join(self.pt(x, y) for x, y in zip(xs, ys))
        dash = ' stroke-dasharray="8,5"' if dashed else ""
        return (f'<polyline points="{pts}" fill="none" stroke="{color}" '
                f'stroke-width="{self.num(self.s.stroke_width)}"{dash}/>')

    def star(self, x: float, y: float, color: str, r_px: float = 9.0) -> str:
        cx = (x - self.xmin) * self.s.px_per_m
        cy = (self.ymax - y) * self.s.px_per_m
        pts = []
        for i in range(10):
            r = r_px if i % 2 == 0 else r_px * 0.45
            a = -math.pi / 2 + i * math.pi / 5
            pts.append(f"{self.num(cx + r * math.cos(a))},{self.num(cy + r * math.sin(a))}")
        return f'<polygon class="goal" points="{" ".join(pts)}" fill="{color}" stroke="black" stroke-width="0.5"/>'


def _extent(logs: Sequence[TrajectoryLog], style: SvgStyle) -> tuple[float, float, float, float]:
    xs: list[float] = []
    ys: list[float] = []
    for log in logs:
        for tr in log.tracks:
            xs += tr.x
            ys += tr.y
        for gx, gy in log.goals.values():
            xs.append(gx)
            ys.append(gy)
        for pts in _ovals(log, style):
            xs += [p.x for p in pts]
            ys += [p.y for p in pts]
    m = style.margin_m
    return (math.floor(min(xs) - m), math.ceil(max(xs) + m), math.floor(min(ys) - m), math.ceil(max(ys) + m))


def _axes(c: _Canvas) -> list[str]:
    xmin, xmax, ymin, ymax = c.bounds
    out = ['<g class="axes" stroke="#cccccc" stroke-width="0.5" font-family="sans-serif" font-size="10" fill="#555555">']
    # labels skip the outermost grid lines so the corners stay readable
    for x in range(int(xmin), int(xmax) + 1):
        px = c.num((x - xmin) * c.s.px_per_m)
        out.append(f'<line x1="{px}" y1="0" x2="{px}" y2="{c.num(c.height)}"/>')
        if xmin < x < xmax:
            out.append(f'<text x="{px}" y="{c.num(c.height - 3)}" stroke="none" text-anchor="middle">{x}</text>')
    for y in range(int(ymin), int(ymax) + 1):
        py = c.num((ymax - y) * c.s.px_per_m)
        out.append(f'<line x1="0" y1="{py}" x2="{c.num(c.width)}" y2="{py}"/>')
        if ymin < y < ymax:
            out.append(f'<text x="3" y="{py}" stroke="none" dominant-baseline="middle">{y}</text>')
    out.append(f'<text x="{c.num(c.width - 4)}" y="{c.num(c.height - 14)}" stroke="none" text-anchor="end">m</text>')
    out.append("</g>")
    return out


def _run_group(c: _Canvas, log: TrajectoryLog, idx: int, style: SvgStyle) -> list[str]:
    opacity = RUN_OPACITY[min(idx, len(RUN_OPACITY) - 1)]
    label = style.labels[idx] if style.labels and idx < len(style.labels) else f"run {idx}"
    out = [f'<g class="run" id="run-{idx}" data-label={quoteattr(label)} opacity="{c.num(opacity)}">']
    robots = log.robots
    split = first_inside_index(robots[0]) if robots and robots[0].rho else None
    colors: dict[str, str] = {}
    n_robots = 0
    for tr in log.tracks:
        if tr.is_robot:
            color = ROBOT_COLORS[min(n_robots, len(ROBOT_COLORS) - 1)]
            n_robots += 1
        else:
            color = HUMAN_COLOR
        colors[tr.agent_id] = color
        k = first_inside_index(tr) if tr.is_robot and tr.rho else split
        out.append(f'<g class="{tr.role}" id="{tr.agent_id}-{idx}">')
        if k is None:
            out.append(c.polyline(tr.x, tr.y, color, False))
        else:
            out.append(c.polyline(tr.x[: k + 1], tr.y[: k + 1], color, False))
            out.append(c.polyline(tr.x[k:], tr.y[k:], color, True))
        out.append("</g>")
    for agent, (gx, gy) in log.goals.items():
        out.append(c.star(gx, gy, colors.get(agent, HUMAN_COLOR)))
    for outline in _ovals(log, style):
        pts = " ".join(c.pt(p.x, p.y) for p in outline)
        out.append(f'<polyline class="oval" points="{pts}" fill="none" stroke="{OVAL_COLOR}" stroke-width="1"/>')
    out.append("</g>")
    return out


def render_svg(logs: TrajectoryLog | Sequence[TrajectoryLog], style: SvgStyle = SvgStyle()) -> str:
    if isinstance(logs, TrajectoryLog):
        logs = [logs]
    if not logs or not any(log.t for log in logs):
        raise ValueError("render_svg needs at least one non-empty log")
    c = _Canvas(*_extent(logs, style), style)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{c.num(c.width)}" height="{c.num(c.height)}" '
        f'viewBox="0 0 {c.num(c.width)} {c.num(c.height)}">',
        f'<rect width="{c.num(c.width)}" height="{c.num(c.height)}" fill="white"/>',
    ]
    if style.title:
        out.append(f"<title>{escape(style.title)}</title>")
    out += _axes(c)
    for i, log in enumerate(logs):
        out += _run_group(c, log, i, style)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(logs: TrajectoryLog | Sequence[TrajectoryLog], path: str, style: SvgStyle = SvgStyle()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(logs, style))
