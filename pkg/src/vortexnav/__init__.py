"""Opinion-driven vortex-field social navigation simulator.

The robot forms a left/right passing preference with nonlinear opinion
dynamics and follows an oval limit-cycle field around the human it is
attending to. Opinion-only and potential-field-only baselines share the
same engine. Plotting (``vortexnav.report``) is imported lazily because it
pulls in matplotlib.
"""
from .agents import HumanModel, HumanState, RobotState, human_step, robot_step
from .controllers import ControlCommand, ControllerConfig, NavConfig, combined_step
from .fields import FieldParams, OvalSpec, limit_cycle_flow, rho, vortex_force
from .geometry import Pose, Vec2, wrap_angle
from .metrics import ComparisonTable, RunMetrics, compare_methods, run_metrics
from .opinion import OpinionParams, OpinionState, equilibrium_magnitude, step_opinion
from .scenario_io import ScenarioError, dump_scenario, load_scenario, read_scenario
from .simulation import (
    HumanSpec,
    ScenarioBounds,
    ScenarioSpec,
    SimConfig,
    SimResult,
    TrajectoryLog,
    random_scenario,
    run,
    run_dual_robot,
)
from .svg import SvgStyle, render_svg, write_svg
from .trajectory_io import export_csv, import_csv, read_csv, write_csv

__version__ = "0.1.0"

__all__ = [
    "ComparisonTable", "ControlCommand", "ControllerConfig", "FieldParams", "HumanModel", "HumanSpec",
    "HumanState", "NavConfig", "OpinionParams", "OpinionState", "OvalSpec", "Pose", "RobotState",
    "RunMetrics", "ScenarioBounds", "ScenarioError", "ScenarioSpec", "SimConfig", "SimResult", "SvgStyle",
    "TrajectoryLog", "Vec2", "combined_step", "compare_methods", "dump_scenario", "equilibrium_magnitude",
    "export_csv", "human_step", "import_csv", "limit_cycle_flow", "load_scenario", "random_scenario",
    "read_csv", "read_scenario", "render_svg", "rho", "robot_step", "run", "run_dual_robot", "run_metrics",
    "step_opinion", "vortex_force", "wrap_angle", "write_csv", "write_svg", "__version__",
]
