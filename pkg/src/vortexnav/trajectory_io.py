"""Trajectory CSV export/import.

One row per agent per step, header ``t,agent_id,x,y,theta,v,z,u,gamma,rho``.
Opinion columns are empty for humans. Numbers use a fixed 9-decimal format
so that a round trip reproduces the log to 1e-9. Goals, the time step and
the termination reason follow the rows as ``#`` comment lines.
"""
from __future__ import annotations

import csv
import io
import math

from .simulation import AgentTrack, TrajectoryLog

HEADER = ("t", "agent_id", "x", "y", "theta", "v", "z", "u", "gamma", "rho")


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = f"{x:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def export_csv(log: TrajectoryLog) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for k, t in enumerate(log.t):
        for tr in log.tracks:
            row = [_fmt(t), tr.agent_id, _fmt(tr.x[k]), _fmt(tr.y[k]), _fmt(tr.theta[k]), _fmt(tr.v[k])]
            if tr.is_robot:
                row += [_fmt(tr.z[k]), _fmt(tr.u[k]), str(tr.gamma[k]), _fmt(tr.rho[k])]
            else:
                row += ["", "", "", ""]
            w.writerow(row)
    buf.write(f"# dt {log.dt!r}\n")
    for agent, (gx, gy) in log.goals.items():
        buf.write(f"# goal {agent} {gx!r} {gy!r}\n")
    buf.write(f"# termination {log.termination}\n")
    return buf.getvalue()


def import_csv(text: str) -> TrajectoryLog:
    """Rebuild a log from :func:`export_csv` output; force columns are not stored and stay empty."""
    lines = text.splitlines()
    body = [ln for ln in lines if not ln.startswith("#")]
    meta = [ln[1:].split() for ln in lines if ln.startswith("#")]
    reader = csv.reader(body)
    header = next(reader, None)
    if header is None or tuple(header) != HEADER:
        raise ValueError(f"not a trajectory CSV: expected header {','.join(HEADER)}")

    tracks: dict[str, AgentTrack] = {}
    times: list[float] = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(HEADER):
            raise ValueError(f"line {lineno}: expected {len(HEADER)} fields, got {len(row)}")
        t, agent = float(row[0]), row[1]
        if not times or t != times[-1]:
            times.append(t)
        robot = row[6] != ""
        tr = tracks.get(agent)
        if tr is None:
            tr = tracks[agent] = AgentTrack(agent, "robot" if robot else "human")
        tr.x.append(float(row[2]))
        tr.y.append(float(row[3]))
        tr.theta.append(float(row[4]))
        tr.v.append(float(row[5]))
        if robot:
            tr.z.append(float(row[6]))
            tr.u.append(float(row[7]))
            tr.gamma.append(int(row[8]))
            tr.rho.append(float(row[9]))

    dt = times[1] - times[0] if len(times) > 1 else 0.0
    log = TrajectoryLog(dt, times, list(tracks.values()))
    for parts in meta:
        if parts[:1] == ["dt"] and len(parts) == 2:
            log.dt = float(parts[1])
        elif parts[:1] == ["goal"] and len(parts) == 4:
            log.goals[parts[1]] = (float(parts[2]), float(parts[3]))
        elif parts[:1] == ["termination"] and len(parts) == 2:
            log.termination = parts[1]
    return log


def write_csv(log: TrajectoryLog, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(export_csv(log))


def read_csv(path: str) -> TrajectoryLog:
    with open(path, encoding="utf-8") as fh:
        return import_csv(fh.read())
