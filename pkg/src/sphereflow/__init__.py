"""Curve shortening flow of closed curves on the unit sphere."""

from .analysis import (
    MultiplicityReport,
    fit_great_circle,
    fitted_colatitude,
    gage_residual,
    gauss_bonnet_defect,
    intersection_count,
    r_multiplicity,
)
from .curve import (
    AreaPair,
    ClosedSphericalCurve,
    contains_left,
    curve_in_dilation,
    discrete_curvature,
    distance_point_to_curve,
    enclosed_areas,
    is_bisector,
    is_simple,
    make_bisector,
    min_mutual_distance,
    resample,
    total_length,
    turning_angles,
)
from .exceptions import *  # noqa: F401,F403
from .flow import (
    FlowParams,
    Trajectory,
    evolve,
    evolve_many,
    evolve_pair,
    flow_step,
    intersection_points,
    stable_dt,
    track_intersections,
)
from .metrics import CouplingResult, frechet_distance, hausdorff_distance
from .sphgeo import GreatCircle, exp_map, geodesic_distance, log_map, slerp

__version__ = "0.1.0"
