"""Frequency, PL-tone and group-code allocation.

Two layouts are produced:

* Cell mode: cells are merged into clusters of allowed sizes (1 or 3 by
  default); every cluster gets its own tone, so tones never repeat.
* Group mode: every cell is its own cluster. Clusters are packed into
  groups of 54 (all tones once) and 7, each group carrying a group code.
  Tones repeat across groups, so their placement must respect the reuse
  distance.

Group-mode tones are keyed on the cell's residue class modulo the lattice
spanned by three straight steps, ``(q mod 3, s mod 3)``. Each of the nine
classes owns six tones. Two cells of one class are at least three straight
steps apart, so any two clusters sharing a tone are at least ``3*sqrt(3)*r``
apart regardless of how groups are shaped.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .exceptions import (
    BandViolationError,
    CapacityError,
    InfeasibleError,
    InvalidParameterError,
    ReuseViolationError,
    ToneExhaustionError,
)
from .hexgrid import DIRECTIONS, HexCoord, Tessellation, euclidean, hex_center, spiral
from .plan import (
    BIG54,
    CELL_MODE,
    GROUP_MODE,
    SMALL7,
    ChannelTable,
    Cluster,
    Group,
    Plan,
    UserId,
)

DUPLEX_OFFSET = 0.6
BAND_CEILING = 148.0
BIG_GROUP = 54
SMALL_GROUP = 7
COMPOSITE = BIG_GROUP + SMALL_GROUP  # a radius-4 super-hexagon
TONES_PER_CLASS = 6
REUSE_CLASSES = tuple((a, b) for a in range(3) for b in range(3))


# -- channels ------------------------------------------------------------------

def build_channel_table(f_lo, f_hi, delta_f, duplex_offset=DUPLEX_OFFSET, ceiling=BAND_CEILING):
    if not delta_f > 0:
        raise InvalidParameterError(f"delta_f must be > 0 MHz, got {delta_f!r}")
    if not f_lo < f_hi:
        raise InvalidParameterError(f"band is inverted: f_lo={f_lo} >= f_hi={f_hi}")
    n = math.floor((f_hi - f_lo) / delta_f + 1e-9)
    channels = tuple(round(f_lo + k * delta_f, 6) for k in range(n))
    over = [ch for ch in channels if ch + duplex_offset > ceiling + 1e-9]
    if over:
        raise BandViolationError(
            f"channel {over[0]} MHz + {duplex_offset} MHz duplex offset exceeds {ceiling} MHz"
        )
    return ChannelTable(float(f_lo), float(f_hi), float(delta_f), float(duplex_offset), channels)


def clusters_required(users: int, capacity: int) -> int:
    if capacity < 1:
        raise InvalidParameterError(f"cluster capacity must be >= 1, got {capacity}")
    if users < 0:
        raise InvalidParameterError(f"user count must be >= 0, got {users}")
    return -(-users // capacity)


# -- cluster sizes ---------------------------------------------------------------

def is_valid_cluster_size(n_c: int) -> bool:
    """True when ``n_c = i^2 + i*j + j^2`` for some ``i, j >= 0`` not both zero."""
    if n_c < 1:
        return False
    i = 0
    while i * i <= n_c:
        # solve j^2 + i j + i^2 - n_c = 0 for integer j >= 0
        disc = 4 * n_c - 3 * i * i
        if disc >= 0:
            root = math.isqrt(disc)
            if root * root == disc and (root - i) % 2 == 0 and root >= i:
                return True
        i += 1
    return False


@dataclass(frozen=True)
class Partition:
    """How many clusters of each size; ``slack`` cells of capacity are unused."""

    counts: dict
    num_cells: int

    @property
    def x(self) -> int:
        return self.counts.get(3, 0)

    @property
    def y(self) -> int:
        return self.counts.get(1, 0)

    @property
    def total(self) -> int:
        return sum(size * n for size, n in self.counts.items())

    @property
    def num_clusters(self) -> int:
        return sum(self.counts.values())

    @property
    def slack(self) -> int:
        return self.total - self.num_cells


def partition_cells(num_cells: int, num_clusters: int, allowed_sizes: Iterable[int] = (1, 3)) -> Partition:
    """Choose cluster sizes covering ``num_cells`` with the least over-provisioning."""
    sizes = sorted(set(allowed_sizes))
    if num_cells < 1 or num_clusters < 1:
        raise InvalidParameterError("num_cells and num_clusters must be >= 1")
    if not sizes or any(not is_valid_cluster_size(s) for s in sizes):
        raise InvalidParameterError(f"allowed sizes must satisfy i^2+ij+j^2, got {sizes}")
    if sizes[-1] * num_clusters < num_cells:
        raise InfeasibleError(
            f"{num_clusters} clusters of at most {sizes[-1]} cells hold {sizes[-1] * num_clusters} "
            f"< {num_cells} cells",
            constraint="partition",
        )
    if num_clusters > num_cells:
        raise InfeasibleError(
            f"{num_clusters} clusters cannot be formed from only {num_cells} cells", constraint="partition"
        )
    limit = max(num_cells, num_clusters * sizes[0]) + sizes[-1]
    mask = (1 << limit) - 1
    # reach[i][k]: bitmask of totals reachable with exactly k clusters drawn from sizes[i:]
    reach = []
    for i in range(len(sizes)):
        row = [1]
        for _ in range(num_clusters):
            bits = 0
            for size in sizes[i:]:
                bits |= row[-1] << size
            row.append(bits & mask)
        reach.append(row)
    ok = reach[0][num_clusters] >> num_cells
    total = num_cells + (ok & -ok).bit_length() - 1
    # greedy: take as many of each smaller size as still lets the rest reach the total
    counts, k, t = {}, num_clusters, total
    for i, size in enumerate(sizes):
        if i == len(sizes) - 1:
            counts[size] = k
            break
        c = min(k, t // size)
        while not (reach[i + 1][k - c] >> (t - c * size)) & 1:
            c -= 1
        counts[size] = c
        k, t = k - c, t - c * size
    return Partition(counts=counts, num_cells=num_cells)


def _connected_shapes(anchor: int, size: int, tess: Tessellation, free: set) -> list[tuple[int, ...]]:
    """Connected cell sets of ``size`` containing ``anchor``, drawn from ``free``."""
    found = set()
    frontier = [frozenset([anchor])]
    for _ in range(size - 1):
        grown = set()
        for shape in frontier:
            for c in shape:
                for n in tess.neighbor_ids(c):
                    if n in free and n not in shape:
                        grown.add(shape | {n})
        frontier = grown
    for shape in frontier:
        found.add(tuple(sorted(shape)))
    return sorted(found)


def layout_clusters(tess: Tessellation, partition: Partition, max_nodes: int = 200_000) -> list[Cluster]:
    """Place clusters on the tessellation as connected polyhexes.

    Cells are visited outermost-first; each unassigned cell anchors a new
    cluster. ``partition.slack`` capacity is absorbed by clusters that lose a
    cell (their missing cell falls outside the plan), largest clusters first.
    """
    pieces = []  # (nominal size, real size)
    slack = partition.slack
    for size in sorted(partition.counts, reverse=True):
        for _ in range(partition.counts[size]):
            cut = min(slack, size - 1)
            slack -= cut
            pieces.append((size, size - cut))
    remaining = {}
    for piece in pieces:
        remaining[piece] = remaining.get(piece, 0) + 1
    kinds = sorted(remaining, key=lambda p: (-p[1], -p[0]))

    visit = list(range(len(tess)))[::-1]
    free = set(visit)
    chosen: list[tuple[tuple[int, int], tuple[int, ...]]] = []
    nodes = 0

    def solve(pos):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise InfeasibleError("cluster layout search exceeded its budget", constraint="partition")
        while pos < len(visit) and visit[pos] not in free:
            pos += 1
        if pos == len(visit):
            return all(v == 0 for v in remaining.values())
        anchor = visit[pos]
        for kind in kinds:
            if remaining[kind] == 0:
                continue
            for shape in _connected_shapes(anchor, kind[1], tess, free):
                remaining[kind] -= 1
                free.difference_update(shape)
                chosen.append((kind, shape))
                if solve(pos + 1):
                    return True
                chosen.pop()
                free.update(shape)
                remaining[kind] += 1
        return False

    if not solve(0):
        raise InfeasibleError("no connected cluster layout exists for this partition", constraint="partition")
    # number clusters from the center outward
    chosen.sort(key=lambda item: min(item[1]))
    return [
        Cluster(id=i, cells=shape, pl_tone=0, size=kind[0]) for i, (kind, shape) in enumerate(chosen)
    ]


# -- groups ----------------------------------------------------------------------

@dataclass(frozen=True)
class GroupLayout:
    composites: int      # Big54 + Small7 pairs sharing a 61-cluster super-hexagon
    standalone_big: int  # extra Big54 groups without a partner
    small: int           # Small7 groups outside any composite
    padded_size: int     # clusters in the last, undersized small group (0 = none)

    @property
    def big(self) -> int:
        return self.composites + self.standalone_big

    @property
    def gc_count(self) -> int:
        return 2 * self.composites + self.standalone_big + self.small

    @property
    def total_clusters(self) -> int:
        pad = SMALL_GROUP - self.padded_size if self.padded_size else 0
        return COMPOSITE * self.composites + BIG_GROUP * self.standalone_big + SMALL_GROUP * self.small - pad


def build_groups(num_clusters: int) -> GroupLayout:
    if num_clusters < 1:
        raise InvalidParameterError(f"num_clusters must be >= 1, got {num_clusters}")
    composites, rest = divmod(num_clusters, COMPOSITE)
    standalone = 0
    if rest >= BIG_GROUP:
        standalone, rest = 1, rest - BIG_GROUP
    small = -(-rest // SMALL_GROUP)
    return GroupLayout(composites, standalone, small, rest % SMALL_GROUP)


def reuse_class(coord) -> tuple[int, int]:
    return (coord[0] % 3, coord[1] % 3)


def _class_order() -> list[tuple[int, int]]:
    order = []
    for c in spiral(1):
        k = reuse_class(c)
        if k not in order:
            order.append(k)
    order.extend(k for k in REUSE_CLASSES if k not in order)
    return order


CLASS_ORDER = _class_order()


def tone_for(klass: tuple[int, int], rank: int) -> int:
    """Tone index (1..54) for the ``rank``-th tone of a reuse class.

    Rank-0 tones of the seven classes around the origin come first (1..7);
    they are the "central" tones shared by every 7-cluster group.
    """
    if not 0 <= rank < TONES_PER_CLASS:
        raise ToneExhaustionError(f"reuse class {klass} has only {TONES_PER_CLASS} tones")
    idx = CLASS_ORDER.index(klass)
    if rank == 0 and idx < SMALL_GROUP:
        return idx + 1
    seq = [(k, r) for k in CLASS_ORDER for r in range(TONES_PER_CLASS)
           if not (r == 0 and CLASS_ORDER.index(k) < SMALL_GROUP)]
    return SMALL_GROUP + 1 + seq.index((klass, rank))


SUPER_STEP = HexCoord(5, 4)  # adjacent super-hexagon centers (norm 61)


def super_centers(limit_ring: int) -> list[HexCoord]:
    a, b = SUPER_STEP, SUPER_STEP.rotate(1)
    m = limit_ring // 4 + 2
    pts = set()
    for i in range(-m, m + 1):
        for j in range(-m, m + 1):
            c = HexCoord(i * a.q + j * b.q, i * a.s + j * b.s)
            if c.ring <= limit_ring:
                pts.add(c)
    return sorted(pts, key=_radial_key)


def _radial_key(c) -> tuple:
    x, y = hex_center(c, 1.0)
    return (HexCoord(*c).ring, round(math.atan2(y, x) % (2 * math.pi), 9), c)


def _template(anchor: HexCoord, turn: int):
    """Radius-4 super-hexagon at ``anchor`` split into 54 body cells and a 7-cell hole."""
    step = DIRECTIONS[turn]
    hole_center = anchor + (3 * step[0], 3 * step[1])
    hole = [hole_center + d for d in ((0, 0),) + DIRECTIONS]
    hole_set = set(hole)
    body = [c for c in spiral(4, anchor) if c not in hole_set]
    return body, hole


class _Placer:
    """Greedy, deterministic placement of groups on the cells of a tessellation."""

    def __init__(self, tess: Tessellation):
        self.tess = tess
        self.free = set(range(len(tess)))
        self.centers = [c.center for c in tess.cells]

    def _nearest_free(self, point, pool=None):
        pool = self.free if pool is None else pool
        return min(pool, key=lambda i: (round(euclidean(self.centers[i], point), 9), i))

    def take_template(self, anchor: HexCoord):
        tess = self.tess
        for turn in range(6):
            body, hole = _template(anchor, turn)
            if all(c in tess and tess.index_of(c) in self.free for c in body + hole):
                body_ids = [tess.index_of(c) for c in body]
                hole_ids = [tess.index_of(c) for c in hole]
                self.free.difference_update(body_ids + hole_ids)
                return body_ids, hole_ids
        return None

    def grow_balanced(self, seed_point) -> list[int]:
        """Grow 54 cells around ``seed_point`` holding exactly six cells of each reuse class."""
        tess = self.tess
        quota = {k: TONES_PER_CLASS for k in REUSE_CLASSES}
        chosen = []
        heap = []
        seen = set()

        def push(i):
            if i not in seen and i in self.free:
                seen.add(i)
                key = (round(euclidean(self.centers[i], seed_point), 9), _radial_key(tess.cells[i].coord))
                heapq.heappush(heap, (key, i))

        push(self._nearest_free(seed_point))
        while len(chosen) < BIG_GROUP:
            if not heap:
                pool = [i for i in self.free if i not in seen and quota[reuse_class(tess.cells[i].coord)]]
                if not pool:
                    raise InfeasibleError("not enough cells of every reuse class for a 54-group",
                                          constraint="groups")
                push(self._nearest_free(seed_point, pool))
                continue
            _, i = heapq.heappop(heap)
            k = reuse_class(tess.cells[i].coord)
            if quota[k] == 0:
                continue
            quota[k] -= 1
            chosen.append(i)
            for n in tess.neighbor_ids(i):
                push(n)
        self.free.difference_update(chosen)
        return chosen

    def grow_small(self, seed_point, size=SMALL_GROUP) -> list[int]:
        """Breadth-first blob of ``size`` free cells starting nearest ``seed_point``."""
        tess = self.tess
        start = self._nearest_free(seed_point)
        chosen = [start]
        taken = {start}
        while len(chosen) < size:
            cand = {n for c in chosen for n in tess.neighbor_ids(c) if n in self.free and n not in taken}
            if not cand:
                cand = self.free - taken
                if not cand:
                    break
            nxt = min(cand, key=lambda i: (round(euclidean(self.centers[i], seed_point), 9), i))
            chosen.append(nxt)
            taken.add(nxt)
        self.free.difference_update(chosen)
        return chosen


def _rank_cells(cells: Sequence[int], tess: Tessellation, anchor_point) -> dict:
    """Per reuse class, order a group's cells by distance from its anchor."""
    by_class = {}
    for i in sorted(cells, key=lambda i: (round(euclidean(tess.cells[i].center, anchor_point), 9),
                                          _radial_key(tess.cells[i].coord))):
        by_class.setdefault(reuse_class(tess.cells[i].coord), []).append(i)
    tones = {}
    for klass, members in by_class.items():
        for rank, i in enumerate(members):
            tones[i] = tone_for(klass, rank)
    return tones


def layout_groups(tess: Tessellation, layout: GroupLayout):
    """Place groups on the tessellation; returns (clusters, groups), tones unset.

    Big groups are seeded at super-hexagon centers, innermost first. A seed
    whose full super-hexagon is free takes the exact template: 54 body cells
    plus a 7-cell partner hole three steps from the center, which therefore
    repeats the central tones at the shortest legal distance. Other seeds
    grow a class-balanced blob instead. Leftover cells form 7-cell groups,
    partners first, then margin groups from the outside in.
    """
    if layout.total_clusters != len(tess):
        raise InvalidParameterError(f"layout covers {layout.total_clusters} clusters, tessellation has {len(tess)}")
    placer = _Placer(tess)
    seeds = super_centers(tess.n_L + 4)
    bigs = []  # (cells, partner cells or None, anchor point)
    for k in range(layout.big):
        seed = seeds[k] if k < len(seeds) else tess.cells[placer._nearest_free((0.0, 0.0))].coord
        anchor_point = hex_center(seed, tess.r)
        wants_partner = k < layout.composites
        fitted = placer.take_template(seed) if wants_partner and seed in tess else None
        if fitted:
            bigs.append((fitted[0], fitted[1], anchor_point))
        else:
            bigs.append((placer.grow_balanced(anchor_point), None, anchor_point))

    smalls = []  # (cells, composite index or None, anchor point)
    for k, (cells, partner, anchor_point) in enumerate(bigs[: layout.composites]):
        if partner is None:
            centroid = _centroid(tess, cells)
            partner = placer.grow_small(centroid)
        smalls.append((partner, k, _centroid(tess, partner)))
    for j in range(layout.small):
        outer = max(placer.free, key=lambda i: _radial_key(tess.cells[i].coord))
        size = layout.padded_size if (j == layout.small - 1 and layout.padded_size) else SMALL_GROUP
        cells = placer.grow_small(tess.cells[outer].center, size)
        smalls.append((cells, None, _centroid(tess, cells)))
    if placer.free:
        raise InfeasibleError(f"{len(placer.free)} cells left without a group", constraint="groups")

    ordered = []
    for k, (cells, _, _) in enumerate(bigs):
        ordered.append((BIG54, cells, k if k < layout.composites else None, False))
        if k < layout.composites:
            ordered.append((SMALL7, smalls[k][0], k, False))
    for cells, _, _ in smalls[layout.composites:]:
        ordered.append((SMALL7, cells, None, len(cells) < SMALL_GROUP))

    clusters = [Cluster(id=i, cells=(i,), pl_tone=0) for i in range(len(tess))]
    groups = [
        Group(gc=gc, kind=kind, clusters=tuple(sorted(cells)), composite=comp, padded=padded)
        for gc, (kind, cells, comp, padded) in enumerate(ordered, start=1)
    ]
    return clusters, groups


def _centroid(tess, cells):
    xs = [tess.cells[i].center[0] for i in cells]
    ys = [tess.cells[i].center[1] for i in cells]
    return (sum(xs) / len(xs), sum(ys) / len(ys))


# -- tones and reuse ---------------------------------------------------------------

@dataclass(frozen=True)
class ReuseReport:
    min_distance: float  # inf when no tone is shared
    violations: tuple    # (cluster a, cluster b, distance), sorted by distance then ids
    shared_pairs: int

    @property
    def ok(self) -> bool:
        return not self.violations


def check_reuse_distance(plan: Plan, threshold: float | None = None) -> ReuseReport:
    threshold = plan.reuse_min_miles if threshold is None else threshold
    by_tone = {}
    for c in plan.clusters:
        by_tone.setdefault(c.pl_tone, []).append(c)
    positions = {c.id: plan.cluster_position(c) for c in plan.clusters}
    best = math.inf
    bad = []
    pairs = 0
    for members in by_tone.values():
        for a, b in itertools.combinations(members, 2):
            d = euclidean(positions[a.id], positions[b.id])
            pairs += 1
            best = min(best, d)
            if d < threshold - 1e-9:
                bad.append((min(a.id, b.id), max(a.id, b.id), d))
    bad.sort(key=lambda t: (t[2], t[0], t[1]))
    return ReuseReport(min_distance=best, violations=tuple(bad), shared_pairs=pairs)


def assign_pl_tones(plan: Plan) -> Plan:
    """Recompute every cluster's tone from the plan's layout and enforce reuse distance."""
    if plan.mode == CELL_MODE:
        if len(plan.clusters) > plan.pl_catalog_size:
            raise ToneExhaustionError(
                f"{len(plan.clusters)} clusters need distinct tones but only {plan.pl_catalog_size} exist; "
                "use group mode"
            )
        clusters = tuple(replace(c, pl_tone=c.id + 1) for c in plan.clusters)
    else:
        if plan.pl_catalog_size < BIG_GROUP:
            raise ToneExhaustionError(f"group mode needs {BIG_GROUP} tones, catalog has {plan.pl_catalog_size}")
        tone = {}
        tess = plan.tessellation
        for g in plan.groups:
            cells = [i for cid in g.clusters for i in plan.clusters[cid].cells]
            tone.update(_rank_cells(cells, tess, _group_anchor(plan, g)))
        clusters = tuple(replace(c, pl_tone=tone[c.cells[0]]) for c in plan.clusters)
    out = replace(plan, clusters=clusters)
    report = check_reuse_distance(out)
    if report.violations:
        raise ReuseViolationError(
            f"{len(report.violations)} same-tone cluster pairs closer than {plan.reuse_min_miles} mi "
            f"(closest {report.violations[0][2]:.3f} mi)",
            pairs=report.violations,
        )
    return out


def _group_anchor(plan, group):
    """Anchor used to rank a group's cells: its super-hexagon center if it has one, else its centroid."""
    tess = plan.tessellation
    cells = [i for cid in group.clusters for i in plan.clusters[cid].cells]
    if group.kind == BIG54:
        centroid = _centroid(tess, cells)
        near = tess.cells[min(cells, key=lambda i: euclidean(tess.cells[i].center, centroid))]
        seeds = super_centers(tess.n_L + 4)
        best = min(seeds, key=lambda s: euclidean(hex_center(s, tess.r), centroid))
        return hex_center(best, tess.r) if best in tess else near.center
    return _centroid(tess, cells)


# -- users ------------------------------------------------------------------------

def assign_users(plan: Plan, user_count: int) -> tuple[UserId, ...]:
    """Round-robin users over clusters, then channels; IDs are (gc, tone, channel)."""
    n_ch = len(plan.channel_table)
    capacity = len(plan.clusters) * n_ch
    if user_count < 0:
        raise InvalidParameterError("user count must be >= 0")
    if user_count > capacity:
        raise CapacityError(
            f"{user_count} users exceed capacity {capacity} by {user_count - capacity}",
            shortfall=user_count - capacity,
        )
    users = []
    n = len(plan.clusters)
    for k in range(user_count):
        cluster = plan.clusters[k % n]
        users.append(UserId(plan.gc_of(cluster.id), cluster.pl_tone, plan.channel_table.channels[k // n]))
    return tuple(users)


def _with_users(plan: Plan, user_count: int) -> Plan:
    users = assign_users(plan, user_count)
    in_use = {}
    for u in users:
        in_use.setdefault(plan.cluster_of_user(u).id, []).append(u.channel)
    clusters = tuple(replace(c, channels_in_use=tuple(sorted(in_use.get(c.id, ())))) for c in plan.clusters)
    return replace(plan, clusters=clusters, users=users)


# -- whole plans ---------------------------------------------------------------------

def build_plan(
    users: int,
    tess: Tessellation,
    channel_table: ChannelTable,
    mode: str,
    pl_catalog_size: int = 54,
    reuse_min_miles: float = 10.0,
    cluster_sizes: Iterable[int] = (1, 3),
    antenna_height_m: float | None = None,
) -> Plan:
    n_ch = len(channel_table)
    required = clusters_required(users, n_ch)
    warnings = []
    if mode == CELL_MODE:
        sizes = sorted(set(cluster_sizes))
        n_clusters = max(required, -(-len(tess) // sizes[-1]), 1)
        if n_clusters > pl_catalog_size:
            raise ToneExhaustionError(
                f"cell mode needs {n_clusters} clusters but only {pl_catalog_size} tones exist; use group mode"
            )
        partition = partition_cells(len(tess), n_clusters, sizes)
        clusters = layout_clusters(tess, partition)
        groups = []
        if partition.slack:
            warnings.append(f"{partition.slack} cluster cell(s) fall outside the service layout")
    elif mode == GROUP_MODE:
        if required > len(tess):
            raise CapacityError(
                f"{users} users need {required} clusters but the coverage layout has {len(tess)} cells; "
                "reduce the cell radius",
                shortfall=(required - len(tess)) * n_ch,
            )
        layout = build_groups(len(tess))
        if layout.padded_size:
            warnings.append(f"last small group padded to {layout.padded_size} clusters")
        if pl_catalog_size < BIG_GROUP:
            raise ToneExhaustionError(f"group mode needs {BIG_GROUP} tones, catalog has {pl_catalog_size}")
        clusters, groups = layout_groups(tess, layout)
    else:
        raise InvalidParameterError(f"mode must be 'cell' or 'group', got {mode!r}")

    plan = Plan(
        mode=mode,
        tessellation=tess,
        clusters=tuple(clusters),
        groups=tuple(groups),
        channel_table=channel_table,
        users=(),
        reuse_min_miles=reuse_min_miles,
        clusters_required=required,
        antenna_height_m=antenna_height_m,
        pl_catalog_size=pl_catalog_size,
        warnings=tuple(warnings),
    )
    plan = assign_pl_tones(plan)
    return _with_users(plan, users)
