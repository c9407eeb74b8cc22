"""Mountains as blocking disks, and how a plan is patched around them."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .exceptions import InvalidParameterError
from .hexgrid import SQRT3, euclidean, tessellate

log = logging.getLogger(__name__)

SMALL = "Small"
LARGE = "Large"
NO_EFFECT = "NoEffect"
EMERGENCY = "Emergency"
MOBILE = "Mobile"


@dataclass(frozen=True)
class Obstacle:
    center: tuple[float, float]
    radius: float
    height_m: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidParameterError(f"obstacle radius must be > 0, got {self.radius!r}")
        if not self.height_m > 0:
            raise InvalidParameterError(f"obstacle height must be > 0, got {self.height_m!r}")

    def contains(self, point) -> bool:
        return euclidean(point, self.center) < self.radius

    def to_dict(self):
        return {"center": list(self.center), "radius": self.radius, "height_m": self.height_m}


@dataclass(frozen=True)
class AddedRepeater:
    position: tuple[float, float]
    radius: float
    cluster: int | None = None
    pl_tone: int | None = None
    channels: tuple[float, ...] = ()
    note: str = ""

    def to_dict(self):
        return {"x": float(self.position[0]), "y": float(self.position[1]), "radius": float(self.radius),
                "cluster": self.cluster, "pl": self.pl_tone, "channels": [float(c) for c in self.channels],
                "note": self.note}


@dataclass(frozen=True)
class AugmentationPlan:
    case_label: str
    obstacle: Obstacle
    added_repeaters: tuple[AddedRepeater, ...] = ()
    affected_cells: frozenset = frozenset()
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self):
        return {
            "case": self.case_label,
            "obstacle": self.obstacle.to_dict(),
            "affected_cells": sorted(self.affected_cells),
            "added_repeaters": [a.to_dict() for a in self.added_repeaters],
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, doc):
        ob = doc["obstacle"]
        return cls(
            case_label=doc["case"],
            obstacle=Obstacle(tuple(ob["center"]), ob["radius"], ob["height_m"]),
            added_repeaters=tuple(
                AddedRepeater((a["x"], a["y"]), a["radius"], a.get("cluster"), a.get("pl"),
                              tuple(a.get("channels", ())), a.get("note", ""))
                for a in doc.get("added_repeaters", ())
            ),
            affected_cells=frozenset(doc.get("affected_cells", ())),
            warnings=tuple(doc.get("warnings", ())),
        )


def segment_disk_distance(p, q, center) -> float:
    """Shortest distance from ``center`` to the segment pq."""
    px, py = p
    dx, dy = q[0] - px, q[1] - py
    length2 = dx * dx + dy * dy
    t = 0.0 if length2 == 0 else max(0.0, min(1.0, ((center[0] - px) * dx + (center[1] - py) * dy) / length2))
    return math.hypot(px + t * dx - center[0], py + t * dy - center[1])


def _blocks(plan, obstacle) -> bool:
    antenna = plan.antenna_height_m
    return antenna is None or obstacle.height_m > antenna


def blocked_links(plan, obstacle: Obstacle) -> set[tuple[int, int]]:
    if not _blocks(plan, obstacle):
        return set()
    cells = plan.tessellation.cells
    return {
        (a, b)
        for a, b in plan.tessellation.adjacent_pairs()
        if segment_disk_distance(cells[a].center, cells[b].center, obstacle.center) <= obstacle.radius
    }


def covered_cells(plan, obstacle: Obstacle) -> set[int]:
    """Cells whose repeater site lies on the obstacle."""
    return {c.repeater_id for c in plan.tessellation.cells if obstacle.contains(c.center)}


def classify(plan, obstacle: Obstacle) -> str:
    if not _blocks(plan, obstacle):
        return NO_EFFECT
    if covered_cells(plan, obstacle):
        return LARGE
    if blocked_links(plan, obstacle):
        return SMALL
    return NO_EFFECT


def _hex_edge_points(cell):
    verts = cell.vertices()
    return list(zip(verts, verts[1:] + verts[:1]))


def nearest_clear_boundary_point(cell, obstacle: Obstacle):
    """Point of the cell's hexagon outline outside the obstacle, nearest its original site.

    Returns ``None`` when the whole outline is under the obstacle.
    """
    c = cell.center
    best = None
    for a, b in _hex_edge_points(cell):
        candidates = [a, b]
        dx, dy = b[0] - a[0], b[1] - a[1]
        L2 = dx * dx + dy * dy
        t = max(0.0, min(1.0, ((c[0] - a[0]) * dx + (c[1] - a[1]) * dy) / L2))
        candidates.append((a[0] + t * dx, a[1] + t * dy))
        # where the edge crosses the obstacle rim
        fx, fy = a[0] - obstacle.center[0], a[1] - obstacle.center[1]
        qa, qb, qc = L2, 2 * (fx * dx + fy * dy), fx * fx + fy * fy - obstacle.radius ** 2
        disc = qb * qb - 4 * qa * qc
        if disc >= 0:
            for sign in (-1, 1):
                u = (-qb + sign * math.sqrt(disc)) / (2 * qa)
                if 0 <= u <= 1:
                    candidates.append((a[0] + u * dx, a[1] + u * dy))
        for pt in candidates:
            if euclidean(pt, obstacle.center) >= obstacle.radius - 1e-9:
                d = euclidean(pt, c)
                if best is None or d < best[0] - 1e-12:
                    best = (d, pt)
    return None if best is None else best[1]


def augment(plan, obstacle: Obstacle, mode: str, inner_scale: float = 2.0,
            inner_channels: int | None = None) -> AugmentationPlan:
    """Extra repeaters needed around ``obstacle``.

    ``mode`` is ``"Emergency"`` (users may be on the mountain) or ``"Mobile"``
    (users only drive around it). ``inner_scale`` sets the cell radius of the
    inner division over a large mountain relative to the plan's cell radius;
    ``inner_channels`` caps the channels each inner repeater takes over.
    """
    mode = mode.capitalize()
    if mode not in (EMERGENCY, MOBILE):
        raise InvalidParameterError(f"mode must be Emergency or Mobile, got {mode!r}")
    size = classify(plan, obstacle)
    if size == NO_EFFECT:
        raise InvalidParameterError("obstacle does not affect the plan")
    tess = plan.tessellation
    affected = frozenset(covered_cells(plan, obstacle) | {i for pair in blocked_links(plan, obstacle) for i in pair})
    warnings = []

    if mode == MOBILE and size == SMALL:
        return AugmentationPlan(f"{MOBILE}-{SMALL}", obstacle, (), affected)

    if mode == EMERGENCY and size == SMALL:
        reach = SQRT3 * tess.r
        within = [c.repeater_id for c in tess.cells if euclidean(c.center, obstacle.center) <= reach + 1e-9]
        if len(within) >= 2:
            summit = AddedRepeater(tuple(obstacle.center), tess.r, note=f"summit site reaching repeaters {within}")
            return AugmentationPlan(f"{EMERGENCY}-{SMALL}", obstacle, (summit,), affected)
        msg = f"summit reaches only {len(within)} repeater(s); handled as a large mountain"
        log.warning(msg)
        warnings.append(msg)
        size = LARGE

    if mode == MOBILE:
        added = []
        for idx in sorted(covered_cells(plan, obstacle)):
            cell = tess.cells[idx]
            cluster = plan.cluster_of_cell(idx)
            pt = nearest_clear_boundary_point(cell, obstacle)
            note = "original carrier frequencies and PL tone"
            if pt is None:
                # whole hexagon under the mountain: nearest foot of the slope instead
                dx, dy = cell.center[0] - obstacle.center[0], cell.center[1] - obstacle.center[1]
                d = math.hypot(dx, dy) or 1.0
                pt = (obstacle.center[0] + dx / d * obstacle.radius, obstacle.center[1] + dy / d * obstacle.radius)
                note += "; cell fully covered, sited at the mountain foot"
            added.append(AddedRepeater(pt, tess.r, cluster.id, cluster.pl_tone,
                                       cluster.channels_in_use, note=f"replaces repeater {idx}: {note}"))
        return AugmentationPlan(f"{MOBILE}-{LARGE}", obstacle, tuple(added), affected, tuple(warnings))

    # Emergency + Large: inner division with fewer, taller antennas
    inner_r = inner_scale * tess.r
    inner = tessellate(obstacle.radius, inner_r)
    displaced = sorted({plan.cluster_of_cell(i).id for i in covered_cells(plan, obstacle)})
    if not displaced:
        displaced = sorted({plan.cluster_of_cell(i).id for i in affected})
    added = []
    for k, cell in enumerate(inner.cells):
        cluster = plan.clusters[displaced[k % len(displaced)]]
        channels = cluster.channels_in_use or plan.channel_table.channels
        if inner_channels is not None:
            channels = channels[:inner_channels]
        pos = (obstacle.center[0] + cell.center[0], obstacle.center[1] + cell.center[1])
        added.append(AddedRepeater(pos, inner_r, cluster.id, cluster.pl_tone, tuple(channels),
                                   note=f"inner cell {k} inherits cluster {cluster.id}"))
    return AugmentationPlan(f"{EMERGENCY}-{LARGE}", obstacle, tuple(added), affected, tuple(warnings))
