"""Repeater coverage radius from antenna height."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .exceptions import InvalidParameterError

EARTH_RADIUS_M = 6378e3
METERS_PER_MILE = 1609.344
FEET_PER_METER = 3.28084


@dataclass(frozen=True)
class AntennaSpec:
    height_m: float
    cap_miles: Optional[float] = None

    def __post_init__(self):
        if not self.height_m > 0:
            raise InvalidParameterError(f"antenna height must be > 0 m, got {self.height_m!r}")
        if self.cap_miles is not None and not self.cap_miles > 0:
            raise InvalidParameterError(f"coverage cap must be > 0 mi, got {self.cap_miles!r}")


def los_radius(height_m: float) -> float:
    """Geometric horizon distance sqrt(2 R_earth H), in miles."""
    if not height_m > 0:
        raise InvalidParameterError(f"height must be > 0 m, got {height_m!r}")
    return math.sqrt(2.0 * EARTH_RADIUS_M * height_m) / METERS_PER_MILE


def empirical_radius(height_ft: float) -> float:
    """Rule-of-thumb radio horizon sqrt(1.5 H); H in feet, result in miles."""
    if not height_ft > 0:
        raise InvalidParameterError(f"height must be > 0 ft, got {height_ft!r}")
    return math.sqrt(1.5 * height_ft)


def physical_radius(height_m: float) -> float:
    return min(los_radius(height_m), empirical_radius(height_m * FEET_PER_METER))


def effective_radius(spec: AntennaSpec) -> float:
    radius = physical_radius(spec.height_m)
    if spec.cap_miles is not None:
        radius = min(radius, spec.cap_miles)
    return radius
