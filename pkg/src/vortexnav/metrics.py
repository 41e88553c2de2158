"""Path-efficiency and proximity metrics, and the three-way method comparison."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .simulation import (
    COLLISION,
    GOAL_REACHED,
    ScenarioBounds,
    ScenarioSpec,
    SimConfig,
    TrajectoryLog,
    random_scenario,
    run,
)

# benchmark rows in display order: controller kind -> label
METHODS = (
    ("opinion_only", "Opinion dynamics"),
    ("apf_only", "Potential fields"),
    ("combined", "Proposed approach"),
)

# reference values for comparison (percent increase, mean minimum distance [m])
REFERENCE = {
    "opinion_only": (2.9294, 0.4408),
    "apf_only": (5.2035, 0.8283),
    "combined": (4.2949, 0.6117),
}


@dataclass(frozen=True)
class RunMetrics:
    path_length: float
    percent_increase: Optional[float]
    min_human_distance: Optional[float]
    reached: bool
    collided: bool
    time_to_goal: Optional[float]


def path_length(log: TrajectoryLog, agent_id: str = "robot") -> float:
    tr = log.track(agent_id)
    return sum(math.hypot(tr.x[i + 1] - tr.x[i], tr.y[i + 1] - tr.y[i]) for i in range(len(tr.x) - 1))


def percent_increase(log: TrajectoryLog, start: tuple[float, float], goal: tuple[float, float],
                     agent_id: str = "robot") -> Optional[float]:
    """Excess of travelled path over the start-goal chord, in percent; ``None`` if the goal was missed.

    The leftover gap between the capture point and the goal centre is added
    to the travelled length, so a straight run scores exactly zero.
    """
    if log.termination != GOAL_REACHED:
        return None
    tr = log.track(agent_id)
    chord = math.dist(start, goal)
    travelled = path_length(log, agent_id) + math.dist((tr.x[-1], tr.y[-1]), goal)
    return 100.0 * (travelled / chord - 1.0)


def min_human_distance(log: TrajectoryLog, agent_id: str = "robot") -> Optional[float]:
    """Smallest robot-human distance over the whole log; ``None`` without humans."""
    humans = log.humans
    if not humans:
        return None
    tr = log.track(agent_id)
    best = math.inf
    for h in humans:
        for xr, yr, xh, yh in zip(tr.x, tr.y, h.x, h.y):
            d = math.hypot(xr - xh, yr - yh)
            if d < best:
                best = d
    return best


def run_metrics(log: TrajectoryLog) -> RunMetrics:
    tr = log.robot
    start = (tr.x[0], tr.y[0])
    goal = log.goals[tr.agent_id]
    reached = log.termination == GOAL_REACHED
    return RunMetrics(
        path_length(log, tr.agent_id),
        percent_increase(log, start, goal, tr.agent_id),
        min_human_distance(log, tr.agent_id),
        reached,
        log.termination == COLLISION,
        log.t[-1] if reached else None,
    )


@dataclass
class MethodRow:
    kind: str
    label: str
    trials: list[Optional[RunMetrics]] = field(default_factory=list)
    errors: list[Optional[str]] = field(default_factory=list)

    def _successes(self) -> list[RunMetrics]:
        return [m for m in self.trials if m is not None and m.reached]

    @property
    def success_rate(self) -> float:
        return len(self._successes()) / len(self.trials) if self.trials else 0.0

    @property
    def mean_percent_increase(self) -> Optional[float]:
        vals = [m.percent_increase for m in self._successes()]
        return math.fsum(vals) / len(vals) if vals else None

    @property
    def mean_min_distance(self) -> Optional[float]:
        """Per-trial closest approach averaged over every completed trial, collisions included."""
        vals = [m.min_human_distance for m in self.trials if m is not None and m.min_human_distance is not None]
        return math.fsum(vals) / len(vals) if vals else None

    def fraction_min_distance_above(self, threshold: float) -> float:
        ok = [m for m in self.trials if m is not None and m.min_human_distance is not None
              and m.min_human_distance > threshold]
        return len(ok) / len(self.trials) if self.trials else 0.0


@dataclass
class ComparisonTable:
    seeds: list[int]
    rows: list[MethodRow]

    def row(self, kind: str) -> MethodRow:
        for r in self.rows:
            if r.kind == kind:
                return r
        raise KeyError(kind)


def _evaluate(args: tuple[ScenarioSpec, SimConfig]) -> tuple[Optional[RunMetrics], Optional[str]]:
    scenario, sim = args
    try:
        return run_metrics(run(scenario, sim).log), None
    except Exception as exc:  # a failed cell must not abort the table
        return None, f"{type(exc).__name__}: {exc}"


def compare_methods(
    n_trials: int,
    base_seed: int,
    specs: Optional[Sequence[ScenarioSpec]] = None,
    sim: SimConfig = SimConfig(),
    bounds: ScenarioBounds = ScenarioBounds(),
    base: Optional[ScenarioSpec] = None,
    workers: int = 1,
) -> ComparisonTable:
    """Run every method on the same scenarios and aggregate per method.

    Scenarios come from ``specs`` when given, otherwise from
    :func:`random_scenario` with seeds ``base_seed .. base_seed + n_trials - 1``.
    Results are gathered in seed order whatever ``workers`` is.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    seeds = list(range(base_seed, base_seed + n_trials))
    if specs is None:
        specs = [random_scenario(s, bounds, base) for s in seeds]
    elif len(specs) != n_trials:
        raise ValueError("need exactly one scenario per trial")
    jobs = [(spec.with_controller(kind), sim) for kind, _ in METHODS for spec in specs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, jobs))
    else:
        results = [_evaluate(j) for j in jobs]
    rows = []
    for m, (kind, label) in enumerate(METHODS):
        chunk = results[m * n_trials:(m + 1) * n_trials]
        rows.append(MethodRow(kind, label, [r for r, _ in chunk], [e for _, e in chunk]))
    return ComparisonTable(seeds, rows)
