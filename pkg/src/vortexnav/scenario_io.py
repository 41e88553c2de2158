"""YAML scenario files: strict parsing with located errors, and the inverse dump."""
from __future__ import annotations

import math
from typing import Any, Optional

import yaml

from .agents import HUMAN_VARIANTS, HumanModel
from .controllers import ControllerConfig
from .fields import FieldParams, OvalSpec
from .geometry import Pose, Vec2
from .opinion import OpinionParams
from .simulation import HumanSpec, ScenarioSpec, SimConfig

FORMAT_VERSION = 1

_TOP = {"meta", "robot", "humans", "params", "sim"}
_META = {"version", "seed", "name"}
_ROBOT = {"start", "heading", "goal", "v"}
_HUMAN = {"start", "heading", "model", "speed", "waypoints", "script", "goal", "cooperative", "turn_rate_max"}
_OPINION = {"d_r", "alpha_r", "gamma_r", "b_r", "u_lo", "u_hi", "R_r", "n", "tau_u", "z_hat_max"}
_OVAL = {"b1", "b2", "epsilon", "nu", "x_t", "alpha1", "alpha2"}
_FIELDS = {"k_att", "k_rep_base", "f_max"}
_CONTROLLER = {"kind", "omega_max", "beta_r", "fov_cos_threshold", "goal_radius", "perception", "tie_gamma"}
_SIM = {"dt", "t_max", "collision_radius"}
_PARAMS = {"opinion": _OPINION, "oval": _OVAL, "fields": _FIELDS, "controller": _CONTROLLER}

# CLI spelling -> ControllerConfig.kind
CONTROLLER_ALIASES = {"combined": "combined", "opinion": "opinion_only", "apf": "apf_only"}


class ScenarioError(ValueError):
    """Invalid scenario file; the message carries the location or the violated invariant."""


def _dotted(path: list) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


def _where(root: Optional[yaml.Node], path: list) -> str:
    """Line/column of the key at ``path`` in the composed tree, if it can be found."""
    node, mark = root, None
    for part in path:
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                if k.value == part:
                    mark, node = k.start_mark, v
                    break
            else:
                break
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int) and part < len(node.value):
            node = node.value[part]
            mark = node.start_mark
        else:
            break
    if mark is None:
        return ""
    return f" (line {mark.line + 1}, column {mark.column + 1})"


class _Reader:
    def __init__(self, text: str):
        try:
            self.root = yaml.compose(text)
            self.data = yaml.safe_load(text)
        except yaml.MarkedYAMLError as exc:
            mark = exc.problem_mark or exc.context_mark
            loc = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
            raise ScenarioError(f"syntax error at {loc}: {exc.problem or exc}") from None
        except yaml.YAMLError as exc:
            raise ScenarioError(f"syntax error: {exc}") from None

    def fail(self, path: list, msg: str) -> ScenarioError:
        return ScenarioError(f"{_dotted(path)}: {msg}{_where(self.root, path)}")

    def section(self, obj: Any, path: list, allowed: set[str]) -> dict:
        if obj is None:
            return {}
        if not isinstance(obj, dict):
            raise self.fail(path, "expected a mapping")
        for key in obj:
            if key not in allowed:
                raise ScenarioError(f"unknown key '{_dotted([*path, key])}'{_where(self.root, [*path, key])}")
        return obj

    def number(self, obj: dict, key: str, path: list, default: Any = None) -> Any:
        if key not in obj:
            return default
        v = obj[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise self.fail([*path, key], f"expected a finite number, got {v!r}")
        return float(v)

    def point(self, obj: dict, key: str, path: list, required: bool = False) -> Optional[Vec2]:
        if key not in obj:
            if required:
                raise self.fail(path, f"missing required key '{key}'")
            return None
        return self._pair(obj[key], [*path, key])

    def _pair(self, v: Any, path: list) -> Vec2:
        ok = isinstance(v, (list, tuple)) and len(v) == 2 and all(
            isinstance(c, (int, float)) and not isinstance(c, bool) and math.isfinite(c) for c in v
        )
        if not ok:
            raise self.fail(path, f"expected [x, y] in meters, got {v!r}")
        return Vec2(float(v[0]), float(v[1]))


def _build(cls, kwargs: dict):
    try:
        return cls(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(str(exc)) from None


def load_scenario(text: str) -> tuple[ScenarioSpec, SimConfig]:
    """Parse a scenario document into a validated spec and its simulation settings."""
    r = _Reader(text)
    doc = r.data
    if doc is None:
        raise ScenarioError("empty scenario document")
    doc = r.section(doc, [], _TOP)

    meta = r.section(doc.get("meta"), ["meta"], _META)
    version = meta.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise r.fail(["meta", "version"], f"unsupported format version {version!r}")
    seed = meta.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise r.fail(["meta", "seed"], "seed must be an unsigned 64-bit integer")
    name = str(meta.get("name", ""))

    if "robot" not in doc:
        raise ScenarioError("missing required section 'robot'")
    robot = r.section(doc["robot"], ["robot"], _ROBOT)
    start = r.point(robot, "start", ["robot"], required=True)
    goal = r.point(robot, "goal", ["robot"], required=True)
    heading = r.number(robot, "heading", ["robot"])
    if heading is None:
        heading = math.atan2(goal.y - start.y, goal.x - start.x) if goal != start else 0.0

    params = r.section(doc.get("params"), ["params"], set(_PARAMS))
    sections = {k: r.section(params.get(k), ["params", k], allowed) for k, allowed in _PARAMS.items()}

    opinion = _build(OpinionParams, {
        k: r.number(sections["opinion"], k, ["params", "opinion"]) for k in sections["opinion"]
    })
    oval_kw = {k: r.number(sections["oval"], k, ["params", "oval"]) for k in sections["oval"]}
    if "epsilon" in oval_kw:
        if "b2" in oval_kw:
            raise r.fail(["params", "oval", "epsilon"], "give either b2 or epsilon, not both")
        oval = _build(OvalSpec.from_epsilon, oval_kw)
    else:
        oval = _build(OvalSpec, oval_kw)
    fields = _build(FieldParams, {
        k: r.number(sections["fields"], k, ["params", "fields"]) for k in sections["fields"]
    })

    ctrl_kw: dict[str, Any] = {}
    for k, v in sections["controller"].items():
        if k == "kind":
            ctrl_kw[k] = CONTROLLER_ALIASES.get(v, v)
        elif k == "perception":
            ctrl_kw[k] = v
        elif k == "tie_gamma":
            if v not in (-1, 1):
                raise r.fail(["params", "controller", k], "tie_gamma must be -1 or 1")
            ctrl_kw[k] = int(v)
        else:
            ctrl_kw[k] = r.number(sections["controller"], k, ["params", "controller"])
    v_nom = r.number(robot, "v", ["robot"])
    if v_nom is not None:
        ctrl_kw["v_nominal"] = v_nom
    controller = _build(ControllerConfig, ctrl_kw)

    humans_raw = doc.get("humans") or []
    if not isinstance(humans_raw, list):
        raise r.fail(["humans"], "expected a list")
    humans = tuple(_human(r, h, i) for i, h in enumerate(humans_raw))
    dual = any(h.model.variant == "robot_driven" for h in humans)

    sim_sec = r.section(doc.get("sim"), ["sim"], _SIM)
    sim = _build(SimConfig, {k: r.number(sim_sec, k, ["sim"]) for k in sim_sec})

    spec = _build(ScenarioSpec, dict(
        robot_start=Pose(start, heading), robot_goal=goal, humans=humans, controller=controller,
        opinion=opinion, oval=oval, fields=fields, dual_robot=dual, seed=seed, name=name,
    ))
    if dual and (len(humans) != 1 or humans[0].goal is None):
        raise ScenarioError("a robot_driven agent must be the only other agent and needs a goal")
    return spec, sim


def _human(r: _Reader, raw: Any, i: int) -> HumanSpec:
    path = ["humans", i]
    h = r.section(raw, path, _HUMAN)
    start = r.point(h, "start", path, required=True)
    heading = r.number(h, "heading", path, 0.0)
    variant = h.get("model", "constant_velocity")
    if variant not in HUMAN_VARIANTS:
        raise r.fail([*path, "model"], f"unknown model {variant!r}; expected one of {', '.join(HUMAN_VARIANTS)}")
    kw: dict[str, Any] = {"variant": variant}
    for k in ("speed", "turn_rate_max"):
        val = r.number(h, k, path)
        if val is not None:
            kw[k] = val
    if "cooperative" in h:
        if not isinstance(h["cooperative"], bool):
            raise r.fail([*path, "cooperative"], "expected true or false")
        kw["cooperative"] = h["cooperative"]
    if "waypoints" in h:
        wps = h["waypoints"]
        if not isinstance(wps, list):
            raise r.fail([*path, "waypoints"], "expected a list of [x, y]")
        kw["waypoints"] = tuple(r._pair(w, [*path, "waypoints", j]) for j, w in enumerate(wps))
    if "script" in h:
        entries = h["script"]
        if not isinstance(entries, list):
            raise r.fail([*path, "script"], "expected a list of [time, heading]")
        kw["script"] = tuple((p.x, p.y) for p in (
            r._pair(e, [*path, "script", j]) for j, e in enumerate(entries)
        ))
    model = _build(HumanModel, kw)
    return HumanSpec(Pose(start, heading), model, r.point(h, "goal", path))


def parse_scenario(text: str) -> ScenarioSpec:
    return load_scenario(text)[0]


def read_scenario(path: str) -> tuple[ScenarioSpec, SimConfig]:
    with open(path, encoding="utf-8") as fh:
        return load_scenario(fh.read())


def dump_scenario(spec: ScenarioSpec, sim: SimConfig = SimConfig()) -> str:
    """Serialize a spec so that :func:`load_scenario` reproduces it exactly."""
    def xy(p: Vec2) -> list[float]:
        return [p.x, p.y]

    humans = []
    for h in spec.humans:
        entry: dict[str, Any] = {
            "start": xy(h.start.position),
            "heading": h.start.heading,
            "model": h.model.variant,
            "speed": h.model.speed,
        }
        if h.model.waypoints:
            entry["waypoints"] = [xy(w) for w in h.model.waypoints]
        if h.model.script:
            entry["script"] = [[t, a] for t, a in h.model.script]
        if h.model.cooperative:
            entry["cooperative"] = True
        if h.model.turn_rate_max != HumanModel.turn_rate_max:
            entry["turn_rate_max"] = h.model.turn_rate_max
        if h.goal is not None:
            entry["goal"] = xy(h.goal)
        humans.append(entry)
    c = spec.controller
    doc = {
        "meta": {"version": FORMAT_VERSION, "seed": spec.seed, "name": spec.name},
        "robot": {
            "start": xy(spec.robot_start.position),
            "heading": spec.robot_start.heading,
            "goal": xy(spec.robot_goal),
            "v": c.v_nominal,
        },
        "humans": humans,
        "params": {
            "opinion": {k: getattr(spec.opinion, k) for k in sorted(_OPINION)},
            "oval": {k: getattr(spec.oval, k) for k in sorted(_OVAL - {"epsilon"})},
            "fields": {k: getattr(spec.fields, k) for k in sorted(_FIELDS)},
            "controller": {k: getattr(c, k) for k in sorted(_CONTROLLER)},
        },
        "sim": {"dt": sim.dt, "t_max": sim.t_max, "collision_radius": sim.collision_radius},
    }
    return yaml.safe_dump(doc, sort_keys=False)
