"""One-parameter-at-a-time sweeps over a base planner configuration."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from sklearn.base import clone

from .allocation import build_channel_table, clusters_required
from .coverage import AntennaSpec, effective_radius
from .estimator import NetworkPlanner
from .exceptions import InvalidParameterError, PlanError
from .hexgrid import tessellate

# sweep name -> estimator parameter
PARAMETERS = {"H": "antenna_height", "delta_f": "delta_f", "R": "area_radius", "users": "users"}
CSV_HEADER = ("parameter", "value", "feasible", "cells", "repeaters", "channels",
              "clusters_required", "clusters", "group_codes", "mode", "error")


@dataclass(frozen=True)
class SweepPoint:
    value: float
    feasible: bool
    cells: Optional[int] = None
    repeaters: Optional[int] = None
    channels: Optional[int] = None
    clusters_required: Optional[int] = None
    clusters: Optional[int] = None
    group_codes: Optional[int] = None
    mode: Optional[str] = None
    error: str = ""
    constraint: str = ""


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    points: tuple[SweepPoint, ...] = field(default=())

    @property
    def values(self):
        return [p.value for p in self.points]

    def metric(self, name):
        return [getattr(p, name) for p in self.points]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for p in self.points:
            w.writerow([self.parameter, p.value, int(p.feasible), _blank(p.cells), _blank(p.repeaters),
                        _blank(p.channels), _blank(p.clusters_required), _blank(p.clusters),
                        _blank(p.group_codes), p.mode or "", p.error])
        return buf.getvalue()


def _blank(v):
    return "" if v is None else v


def _evaluate(base: NetworkPlanner, param: str, value) -> SweepPoint:
    est = clone(base).set_params(**{param: value})
    # counts that do not depend on a successful plan are reported regardless
    partial = {}
    try:
        r = effective_radius(AntennaSpec(est.antenna_height, est.coverage_cap))
        tess = tessellate(est.area_radius, r)
        partial.update(cells=len(tess), repeaters=len(tess))
        table = build_channel_table(est.f_lo, est.f_hi, est.delta_f)
        partial.update(channels=len(table), clusters_required=clusters_required(int(est.users), len(table)),
                       mode=est.resolve_mode(len(table)))
        est.fit()
    except PlanError as exc:
        return SweepPoint(value, False, error=str(exc), constraint=getattr(exc, "constraint", ""), **partial)
    plan = est.plan_
    return SweepPoint(
        value, True, cells=len(plan.tessellation), repeaters=plan.n_repeaters, channels=len(plan.channel_table),
        clusters_required=plan.clusters_required, clusters=len(plan.clusters),
        group_codes=len(plan.group_codes), mode=plan.mode,
    )


def sweep(base: NetworkPlanner, parameter: str, values: Sequence, n_jobs: int = 1) -> SweepResult:
    """Rebuild the plan for each value of one parameter; infeasible points are kept.

    For the antenna-height sweep the coverage cap is dropped so height alone
    sets the cell radius.
    """
    if parameter not in PARAMETERS:
        raise InvalidParameterError(f"unknown sweep parameter {parameter!r}; choose from {sorted(PARAMETERS)}")
    values = list(values)
    if not values:
        raise InvalidParameterError("sweep needs at least one value")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidParameterError("sweep values must be strictly increasing")
    if parameter == "H":
        base = clone(base).set_params(coverage_cap=None)
    param = PARAMETERS[parameter]
    if n_jobs == 1:
        points = [_evaluate(base, param, v) for v in values]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            points = list(pool.map(lambda v: _evaluate(base, param, v), values))
    return SweepResult(parameter, tuple(points))
