"""Plan data model and its versioned JSON document."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

from .hexgrid import Cell, HexCoord, Tessellation, euclidean
from .exceptions import UnknownUserError

SCHEMA_VERSION = 1
CELL_MODE = "cell"
GROUP_MODE = "group"
BIG54 = "Big54"
SMALL7 = "Small7"


@dataclass(frozen=True)
class ChannelTable:
    f_lo: float
    f_hi: float
    delta_f: float
    duplex_offset: float
    channels: tuple[float, ...]

    def __len__(self):
        return len(self.channels)

    def index(self, frequency: float) -> int:
        for i, ch in enumerate(self.channels):
            if abs(ch - frequency) < 1e-6:
                return i
        raise ValueError(f"{frequency} MHz is not a channel of this table")


@dataclass(frozen=True)
class Cluster:
    id: int
    cells: tuple[int, ...]
    pl_tone: int
    size: int = 0  # nominal size; may exceed len(cells) when a cell falls outside the plan
    channels_in_use: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.cells:
            raise ValueError(f"cluster {self.id} has no cells")
        if self.size == 0:
            object.__setattr__(self, "size", len(self.cells))


@dataclass(frozen=True)
class Group:
    gc: int
    kind: str
    clusters: tuple[int, ...]
    composite: Optional[int] = None
    padded: bool = False


class UserId(NamedTuple):
    gc: Optional[int]
    pl_tone: int
    channel: float

    def __str__(self):
        head = f"gc{self.gc}/" if self.gc is not None else ""
        return f"{head}pl{self.pl_tone}@{self.channel:.3f}"

    @classmethod
    def parse(cls, text: str) -> "UserId":
        """Inverse of ``str``: ``pl12@145.300`` or ``gc3/pl12@145.300``."""
        text = text.strip()
        gc = None
        try:
            if "/" in text:
                head, text = text.split("/", 1)
                gc = int(head.removeprefix("gc"))
            tone, channel = text.split("@", 1)
            return cls(gc, int(tone.removeprefix("pl")), round(float(channel), 6))
        except ValueError:
            raise UnknownUserError(f"malformed user id {text!r}") from None


@dataclass(frozen=True)
class Plan:
    mode: str
    tessellation: Tessellation
    clusters: tuple[Cluster, ...]
    groups: tuple[Group, ...]
    channel_table: ChannelTable
    users: tuple[UserId, ...]
    reuse_min_miles: float = 10.0
    clusters_required: int = 0
    antenna_height_m: Optional[float] = None
    pl_catalog_size: int = 54
    augmentations: tuple = ()
    warnings: tuple[str, ...] = ()
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gc_of = {}
        for g in self.groups:
            for cid in g.clusters:
                gc_of[cid] = g.gc
        by_key = {}
        for c in self.clusters:
            by_key[(gc_of.get(c.id), c.pl_tone)] = c.id
        cell_cluster = {}
        for c in self.clusters:
            for idx in c.cells:
                cell_cluster[idx] = c.id
        object.__setattr__(
            self,
            "_lookup",
            {"gc_of": gc_of, "by_key": by_key, "cell_cluster": cell_cluster,
             "user_index": {u: i for i, u in enumerate(self.users)}},
        )

    # -- lookups -----------------------------------------------------------
    @property
    def n_repeaters(self) -> int:
        return len(self.tessellation)

    @property
    def group_codes(self) -> list[int]:
        return sorted({g.gc for g in self.groups})

    def gc_of(self, cluster_id: int) -> Optional[int]:
        return self._lookup["gc_of"].get(cluster_id)

    def cluster_of_cell(self, cell_idx: int) -> Cluster:
        return self.clusters[self._lookup["cell_cluster"][cell_idx]]

    def tone_of_cell(self, cell_idx: int) -> int:
        return self.cluster_of_cell(cell_idx).pl_tone

    def cluster_of_user(self, user: UserId) -> Cluster:
        try:
            return self.clusters[self._lookup["by_key"][(user.gc, user.pl_tone)]]
        except KeyError:
            raise UnknownUserError(f"no cluster carries user {user}") from None

    def user(self, key) -> UserId:
        """Resolve an index, a ``UserId`` or its string form to a planned user."""
        if isinstance(key, str):
            key = int(key) if key.isdigit() else UserId.parse(key)
        if isinstance(key, int):
            if not 0 <= key < len(self.users):
                raise UnknownUserError(f"user index {key} out of range")
            return self.users[key]
        if key not in self._lookup["user_index"]:
            raise UnknownUserError(f"unknown user {key}")
        return key

    def home_cell(self, user: UserId) -> int:
        """Repeater serving ``user``: channels are spread round-robin over the cluster's cells."""
        cluster = self.cluster_of_user(user)
        k = self.channel_table.index(user.channel)
        return cluster.cells[k % len(cluster.cells)]

    def cluster_position(self, cluster: Cluster) -> tuple[float, float]:
        pts = [self.tessellation.cells[i].center for i in cluster.cells]
        return (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))

    @property
    def capacity(self) -> int:
        return len(self.clusters) * len(self.channel_table)

    def with_augmentation(self, augmentation) -> "Plan":
        return replace(self, augmentations=self.augmentations + (augmentation,))

    def summary(self) -> dict:
        return {
            "mode": self.mode,
            "repeaters": self.n_repeaters,
            "cells": len(self.tessellation),
            "clusters": len(self.clusters),
            "clusters_required": self.clusters_required,
            "channels": len(self.channel_table),
            "tones_used": len({c.pl_tone for c in self.clusters}),
            "groups": len(self.groups),
            "group_codes": len(self.group_codes),
            "users": len(self.users),
        }

    def validate(self) -> list[str]:
        """Return a list of invariant violations (empty when the plan is sound)."""
        from .allocation import check_reuse_distance, is_valid_cluster_size

        problems = []
        for c in self.clusters:
            if not is_valid_cluster_size(c.size):
                problems.append(f"cluster {c.id} has invalid size {c.size}")
        report = check_reuse_distance(self)
        for a, b, d in report.violations:
            problems.append(f"clusters {a} and {b} share a tone at {d:.3f} mi")
        if len(set(self.users)) != len(self.users):
            problems.append("duplicate user ids")
        load = {}
        for u in self.users:
            cid = self.cluster_of_user(u).id
            load[cid] = load.get(cid, 0) + 1
        if load and max(load.values()) > len(self.channel_table):
            problems.append("cluster load exceeds channel count")
        for g in self.groups:
            tones = [self.clusters[cid].pl_tone for cid in g.clusters]
            if len(set(tones)) != len(tones):
                problems.append(f"group {g.gc} repeats a tone")
            if g.kind == BIG54 and len(tones) != 54:
                problems.append(f"Big54 group {g.gc} holds {len(tones)} clusters")
            if g.kind == SMALL7 and (len(tones) > 7 or (len(tones) < 7 and not g.padded)):
                problems.append(f"Small7 group {g.gc} holds {len(tones)} clusters")
        return problems


# -- serialization -----------------------------------------------------------

def _fmt(value, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        if math.isinf(value) or math.isnan(value):
            return "null"
        return f"{value:.6f}"
    if isinstance(value, (int, str)):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_fmt(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ", ".join(_fmt(v, indent, level + 1) for v in value) + "]"
        items = [pad + _fmt(v, indent, level + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps_fixed(doc, indent=1) -> str:
    """JSON text with every float written to 6 decimal places."""
    return _fmt(doc, indent, 0) + "\n"


def plan_to_dict(plan: Plan) -> dict:
    ct = plan.channel_table
    tess = plan.tessellation
    return {
        "version": SCHEMA_VERSION,
        "mode": plan.mode,
        "band": {"f_lo": float(ct.f_lo), "f_hi": float(ct.f_hi), "duplex_offset": float(ct.duplex_offset)},
        "delta_f": float(ct.delta_f),
        "cells": [
            {"q": c.coord.q, "s": c.coord.s, "x": float(c.center[0]), "y": float(c.center[1]), "r": float(c.r)}
            for c in tess.cells
        ],
        "clusters": [
            {"id": c.id, "cells": list(c.cells), "pl": c.pl_tone, "size": c.size} for c in plan.clusters
        ],
        "groups": [
            {"gc": g.gc, "kind": g.kind, "clusters": list(g.clusters),
             "composite": g.composite, "padded": g.padded}
            for g in plan.groups
        ],
        "users": [{"gc": u.gc, "pl": u.pl_tone, "channel": float(u.channel)} for u in plan.users],
        "service_radius": float(tess.R),
        "rings": tess.n_L,
        "antenna_height_m": None if plan.antenna_height_m is None else float(plan.antenna_height_m),
        "reuse_min_miles": float(plan.reuse_min_miles),
        "clusters_required": plan.clusters_required,
        "pl_catalog_size": plan.pl_catalog_size,
        "warnings": list(plan.warnings),
        "augmentations": [a.to_dict() for a in plan.augmentations],
    }


def plan_to_json(plan: Plan) -> str:
    return dumps_fixed(plan_to_dict(plan))


def plan_from_dict(doc: dict) -> Plan:
    from .terrain import AugmentationPlan

    if doc.get("version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported plan version {doc.get('version')!r}")
    cells = []
    for i, c in enumerate(doc["cells"]):
        cells.append(Cell(coord=HexCoord(c["q"], c["s"]), center=(c["x"], c["y"]), r=c["r"], repeater_id=i))
    r = cells[0].r
    tess = Tessellation(cells=tuple(cells), R=doc["service_radius"], r=r, n_L=doc["rings"])
    band = doc["band"]
    from .allocation import build_channel_table

    ct = build_channel_table(band["f_lo"], band["f_hi"], doc["delta_f"], duplex_offset=band["duplex_offset"])
    users = tuple(UserId(u["gc"], u["pl"], round(u["channel"], 6)) for u in doc["users"])
    in_use = {}
    gc_of = {}
    for g in doc["groups"]:
        for cid in g["clusters"]:
            gc_of[cid] = g["gc"]
    key_to_cluster = {(gc_of.get(c["id"]), c["pl"]): c["id"] for c in doc["clusters"]}
    for u in users:
        in_use.setdefault(key_to_cluster.get((u.gc, u.pl_tone)), []).append(u.channel)
    clusters = tuple(
        Cluster(id=c["id"], cells=tuple(c["cells"]), pl_tone=c["pl"], size=c.get("size", len(c["cells"])),
                channels_in_use=tuple(sorted(in_use.get(c["id"], ()))))
        for c in doc["clusters"]
    )
    groups = tuple(
        Group(gc=g["gc"], kind=g["kind"], clusters=tuple(g["clusters"]),
              composite=g.get("composite"), padded=g.get("padded", False))
        for g in doc["groups"]
    )
    return Plan(
        mode=doc["mode"],
        tessellation=tess,
        clusters=clusters,
        groups=groups,
        channel_table=ct,
        users=users,
        reuse_min_miles=doc.get("reuse_min_miles", 10.0),
        clusters_required=doc.get("clusters_required", 0),
        antenna_height_m=doc.get("antenna_height_m"),
        pl_catalog_size=doc.get("pl_catalog_size", 54),
        augmentations=tuple(AugmentationPlan.from_dict(a) for a in doc.get("augmentations", ())),
        warnings=tuple(doc.get("warnings", ())),
    )


def plan_from_json(text: str) -> Plan:
    return plan_from_dict(json.loads(text))


def save_plan(plan: Plan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(plan_to_json(plan))


def load_plan(path) -> Plan:
    with open(path, encoding="utf-8") as fh:
        return plan_from_json(fh.read())


def pairwise_cluster_distance(plan: Plan, a: Cluster, b: Cluster) -> float:
    return euclidean(plan.cluster_position(a), plan.cluster_position(b))
