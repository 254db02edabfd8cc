"""Generators, experiments, file formats and the command line."""

from .experiments import (
    ExperimentReport,
    exp_angenent,
    exp_avoidance,
    exp_continuity,
    exp_crossing_chord,
    exp_gage,
    exp_sandwich,
)
from .generators import (
    PerturbationSpec,
    gen_latitude_circle,
    gen_perturbed_bisector,
    gen_perturbed_latitude,
    perturb_curve,
)
from .io import read_curve, read_trajectory, trajectory_lines, write_curve

__all__ = [
    "ExperimentReport",
    "PerturbationSpec",
    "exp_angenent",
    "exp_avoidance",
    "exp_continuity",
    "exp_crossing_chord",
    "exp_gage",
    "exp_sandwich",
    "gen_latitude_circle",
    "gen_perturbed_bisector",
    "gen_perturbed_latitude",
    "perturb_curve",
    "read_curve",
    "read_trajectory",
    "trajectory_lines",
    "write_curve",
]
