"""Minimal-repeater VHF network planning on a hexagonal grid."""

__version__ = "0.1.0"

from .allocation import build_channel_table, build_plan, check_reuse_distance, clusters_required
from .coverage import AntennaSpec, effective_radius
from .estimator import NetworkPlanner
from .exceptions import (
    BandViolationError,
    CapacityError,
    InfeasibleError,
    InvalidParameterError,
    NoRouteError,
    PlanError,
    ReuseViolationError,
    ToneExhaustionError,
    UnknownUserError,
)
from .hexgrid import HexCoord, Tessellation, rings_needed, tessellate
from .plan import Plan, UserId, load_plan, save_plan
from .routing import build_routes, simulate
from .sensitivity import sweep
from .terrain import Obstacle, augment, classify

__all__ = [
    "AntennaSpec", "BandViolationError", "CapacityError", "HexCoord", "InfeasibleError",
    "InvalidParameterError", "NetworkPlanner", "NoRouteError", "Obstacle", "Plan", "PlanError",
    "ReuseViolationError", "Tessellation", "ToneExhaustionError", "UnknownUserError", "UserId",
    "augment", "build_channel_table", "build_plan", "build_routes", "check_reuse_distance",
    "classify", "clusters_required", "effective_radius", "load_plan", "rings_needed", "save_plan",
    "simulate", "sweep", "tessellate",
]
