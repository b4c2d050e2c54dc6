"""Placing identical landmarks so unlabelled range+bearing readings fix a
planar pose, and recovering that pose."""

from .aliasing import AliasPair, bearing_alias, range_alias, verify_alias
from .confounder import ConfounderResult, GridSpec, evaluate_q, match_score
from .geometry import (
    Constellation,
    Disc,
    GeometryConfig,
    PlanarPose,
    Rect,
    angular_distance,
    contains,
    disc_set_distance,
    rotate,
    wrap_angle,
)
from .localizer import (
    LocalizationResult,
    MeasurementSet,
    fit_pose_fixed_assoc,
    localize,
    measure,
    pose_error,
)
from .oracle import OracleResolution, brute_force_q
from .positioner import OptimizerOptions, PlacementResult, initialize, optimize
from .simharness import ErrorStats, NoiseModel, TrialConfig, compare, run_trial

__version__ = "0.1.0"
