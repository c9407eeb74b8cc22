"""Scikit-learn style front end for building plans.

``NetworkPlanner(...).fit()`` designs the network; the fitted estimator then
maps points of the service area to their serving repeater with ``predict``.
Because it follows the ``BaseEstimator`` parameter protocol, ``clone`` and
``set_params`` give parameter sweeps for free.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .allocation import build_channel_table, build_plan
from .coverage import AntennaSpec, effective_radius, physical_radius
from .exceptions import InvalidParameterError
from .hexgrid import nearest_coord, neighbors, tessellate
from .plan import CELL_MODE, GROUP_MODE

MODES = ("auto", CELL_MODE, GROUP_MODE)


class NetworkPlanner(BaseEstimator):
    """Minimal-repeater VHF network over a circular service area.

    Parameters
    ----------
    users : int
        Number of users that need a unique ID.
    area_radius : float
        Service radius in miles.
    antenna_height : float
        Antenna height in meters; bounds the coverage radius by line of sight.
    coverage_cap : float or None
        Working cell radius in miles. Must not exceed the line-of-sight limit.
    f_lo, f_hi, delta_f : float
        Usable carrier band and channel spacing, MHz.
    pl_catalog_size : int
        Number of PL tones available.
    mode : {"auto", "cell", "group"}
        ``auto`` picks cell mode while ``users <= auto_threshold``.
    auto_threshold : int or None
        Defaults to ``pl_catalog_size * channel count``.
    reuse_min : float
        Minimum distance in miles between clusters sharing a tone.
    cluster_sizes : tuple of int
        Cluster sizes allowed in cell mode.
    """

    def __init__(
        self,
        users=1000,
        area_radius=40.0,
        antenna_height=15.0,
        coverage_cap=None,
        f_lo=145.0,
        f_hi=147.4,
        delta_f=0.1,
        pl_catalog_size=54,
        mode="auto",
        auto_threshold=None,
        reuse_min=10.0,
        cluster_sizes=(1, 3),
    ):
        self.users = users
        self.area_radius = area_radius
        self.antenna_height = antenna_height
        self.coverage_cap = coverage_cap
        self.f_lo = f_lo
        self.f_hi = f_hi
        self.delta_f = delta_f
        self.pl_catalog_size = pl_catalog_size
        self.mode = mode
        self.auto_threshold = auto_threshold
        self.reuse_min = reuse_min
        self.cluster_sizes = cluster_sizes

    def _validate_params(self):
        if int(self.users) != self.users or self.users < 0:
            raise InvalidParameterError(f"users must be a non-negative integer, got {self.users!r}")
        if not self.area_radius > 0:
            raise InvalidParameterError(f"area_radius must be > 0, got {self.area_radius!r}")
        if self.mode not in MODES:
            raise InvalidParameterError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.reuse_min > 0:
            raise InvalidParameterError("reuse_min must be > 0")
        if self.pl_catalog_size < 1:
            raise InvalidParameterError("pl_catalog_size must be >= 1")

    def resolve_mode(self, n_channels: int) -> str:
        if self.mode != "auto":
            return self.mode
        threshold = self.auto_threshold
        if threshold is None:
            threshold = self.pl_catalog_size * n_channels
        return CELL_MODE if self.users <= threshold else GROUP_MODE

    def fit(self, X=None, y=None):
        """Design the plan. ``X`` and ``y`` are ignored."""
        self._validate_params()
        spec = AntennaSpec(self.antenna_height, self.coverage_cap)
        limit = physical_radius(spec.height_m)
        if self.coverage_cap is not None and self.coverage_cap > limit + 1e-9:
            raise InvalidParameterError(
                f"coverage cap {self.coverage_cap} mi exceeds the {limit:.2f} mi line-of-sight limit "
                f"of a {self.antenna_height} m antenna"
            )
        self.cell_radius_ = effective_radius(spec)
        self.tessellation_ = tessellate(self.area_radius, self.cell_radius_)
        self.channel_table_ = build_channel_table(self.f_lo, self.f_hi, self.delta_f)
        self.mode_ = self.resolve_mode(len(self.channel_table_))
        self.plan_ = build_plan(
            int(self.users),
            self.tessellation_,
            self.channel_table_,
            self.mode_,
            pl_catalog_size=self.pl_catalog_size,
            reuse_min_miles=self.reuse_min,
            cluster_sizes=tuple(self.cluster_sizes),
            antenna_height_m=self.antenna_height,
        )
        self._centers = np.array([c.center for c in self.tessellation_.cells])
        return self

    @property
    def n_repeaters_(self) -> int:
        check_is_fitted(self, "plan_")
        return self.plan_.n_repeaters

    def predict(self, X):
        """Serving repeater id for each point (miles), ``-1`` where no repeater covers it."""
        check_is_fitted(self, "plan_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"expected points with 2 coordinates, got {X.shape[1]}")
        tess = self.tessellation_
        out = np.full(len(X), -1, dtype=int)
        for k, (x, y) in enumerate(X):
            coord = nearest_coord(x, y, tess.r)
            # a coverage disk overhangs its hexagon, so look one ring further out
            best, best_d = -1, tess.r + 1e-9
            for c in [coord, *neighbors(coord)]:
                if c in tess:
                    idx = tess.index_of(c)
                    d = np.hypot(*(self._centers[idx] - (x, y)))
                    if d <= best_d:
                        best, best_d = idx, d
            out[k] = best
        return out

    def transform(self, X):
        """Distance from each point to every repeater, shape (n_points, n_repeaters)."""
        check_is_fitted(self, "plan_")
        X = check_array(X, dtype=float)
        diff = X[:, None, :] - self._centers[None, :, :]
        return np.sqrt((diff ** 2).sum(axis=-1))

    def score(self, X, y=None):
        """Fraction of points covered by some repeater."""
        return float(np.mean(self.predict(X) >= 0))
