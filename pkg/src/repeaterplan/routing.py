"""Store-and-forward relay between repeaters.

A call from user X to user Y travels X -> A -> ... -> B -> Y, where A and B are
the users' home repeaters. Every transmission is stamped with the PL tone of
the repeater that should pick it up, and repeaters ignore anything stamped
with another tone. Each repeater shifts the carrier by the 0.6 MHz duplex
offset, so the first transmission is chosen by parity to make the last one
land on Y's own channel.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from .exceptions import BandViolationError, NoRouteError
from .plan import GROUP_MODE, Plan, UserId

BAND_LO = 145.0
BAND_HI = 148.0
OFFSET = 0.6


@dataclass(frozen=True)
class Repeater:
    id: int
    pl_tone: int


@dataclass(frozen=True)
class Message:
    src: UserId
    dst: UserId
    hop_index: int
    carried_frequency: float
    stamped_pl: int
    payload: bytes = b""


@dataclass(frozen=True)
class Route:
    hops: tuple[int, ...]  # repeater ids, source repeater through destination repeater

    @property
    def links(self) -> list[tuple[int, int]]:
        return list(zip(self.hops, self.hops[1:]))

    @property
    def total_transmissions(self) -> int:
        # user -> first repeater, each repeater link, last repeater -> user
        return len(self.hops) + 1


def first_hop_frequency(dst_channel: float, total_transmissions: int) -> float:
    if total_transmissions < 1:
        raise ValueError("a call needs at least one transmission")
    if total_transmissions % 2:
        return round(dst_channel, 6)
    return round(dst_channel + OFFSET, 6)


def relay_step(repeater: Repeater, message: Message, next_pl: int) -> Optional[Message]:
    """Forward ``message`` if it carries this repeater's tone; ``None`` means ignored."""
    if message.stamped_pl != repeater.pl_tone:
        return None
    on_channel = abs(message.carried_frequency - message.dst.channel) < 1e-6
    freq = round(message.carried_frequency + (OFFSET if on_channel else -OFFSET), 6)
    if not BAND_LO - 1e-9 <= freq <= BAND_HI + 1e-9:
        raise BandViolationError(f"repeater {repeater.id} would transmit on {freq} MHz")
    return replace(message, hop_index=message.hop_index + 1, carried_frequency=freq, stamped_pl=next_pl)


class RoutingTable:
    """Shortest repeater paths, computed per destination on first use.

    In group mode a route may not pass through any cluster that shares the
    destination's tone (other than the destination cluster), so a cluster with
    the same tone elsewhere cannot mistake the call for its own.
    """

    def __init__(self, plan: Plan, exclude_same_tone: Optional[bool] = None):
        self.plan = plan
        self.exclude_same_tone = plan.mode == GROUP_MODE if exclude_same_tone is None else exclude_same_tone
        tess = plan.tessellation
        self._adj = [sorted(tess.neighbor_ids(i), key=lambda j: tess.cells[j].coord) for i in range(len(tess))]
        self._cache: dict = {}

    def excluded_for(self, dst: int) -> frozenset:
        if not self.exclude_same_tone:
            return frozenset()
        plan = self.plan
        dst_cluster = plan.cluster_of_cell(dst)
        return frozenset(
            i for c in plan.clusters if c.pl_tone == dst_cluster.pl_tone and c.id != dst_cluster.id for i in c.cells
        )

    def _tree(self, dst: int):
        if dst not in self._cache:
            banned = self.excluded_for(dst)
            dist = {dst: 0}
            queue = deque([dst])
            while queue:
                u = queue.popleft()
                for v in self._adj[u]:
                    if v not in dist and v not in banned:
                        dist[v] = dist[u] + 1
                        queue.append(v)
            self._cache[dst] = (dist, banned)
        return self._cache[dst]

    def next_hop(self, at: int, dst: int) -> int:
        dist, banned = self._tree(dst)
        best = None
        for v in self._adj[at]:  # sorted by (q, s): first minimum wins
            if v in dist and (best is None or dist[v] < dist[best]):
                best = v
        if best is None or (at in dist and dist[best] >= dist[at]):
            raise NoRouteError(f"repeater {dst} unreachable from {at}", excluded=banned)
        return best

    def route(self, src: int, dst: int) -> Route:
        hops = [src]
        while hops[-1] != dst:
            hops.append(self.next_hop(hops[-1], dst))
        return Route(tuple(hops))

    def distance(self, src: int, dst: int) -> Optional[int]:
        """Hop count used by :meth:`route`, ``None`` when unreachable."""
        if src == dst:
            return 0
        dist, _ = self._tree(dst)
        options = [dist[v] for v in self._adj[src] if v in dist]
        return min(options) + 1 if options else None

    def __getitem__(self, pair) -> Route:
        return self.route(*pair)


def build_routes(plan: Plan, **kwargs) -> RoutingTable:
    return RoutingTable(plan, **kwargs)


def repeaters(plan: Plan) -> list[Repeater]:
    return [Repeater(i, plan.tone_of_cell(i)) for i in range(plan.n_repeaters)]


def user_route(plan: Plan, table: RoutingTable, src: UserId, dst: UserId) -> Route:
    return table.route(plan.home_cell(src), plan.home_cell(dst))


def trace_call(plan: Plan, table: RoutingTable, src: UserId, dst: UserId) -> list[dict]:
    """Hop-by-hop transmissions of one call, without queueing."""
    route = user_route(plan, table, src, dst)
    reps = [Repeater(i, plan.tone_of_cell(i)) for i in route.hops]
    freq = first_hop_frequency(dst.channel, route.total_transmissions)
    msg = Message(src, dst, 0, freq, reps[0].pl_tone)
    out = [{"from": "user", "to": reps[0].id, "frequency": msg.carried_frequency, "pl": msg.stamped_pl}]
    for k, rep in enumerate(reps):
        nxt_pl = reps[k + 1].pl_tone if k + 1 < len(reps) else dst.pl_tone
        msg = relay_step(rep, msg, nxt_pl)
        if msg is None:
            raise RuntimeError(f"repeater {rep.id} rejected its own call")
        to = reps[k + 1].id if k + 1 < len(reps) else "user"
        out.append({"from": rep.id, "to": to, "frequency": msg.carried_frequency, "pl": msg.stamped_pl})
    return out


# -- discrete-tick simulation -------------------------------------------------------

@dataclass
class _InFlight:
    msg_id: int
    message: Message
    hops: tuple[int, ...]
    position: int  # index into hops of the repeater holding the message
    ready_tick: int


@dataclass
class DeliveryLog:
    records: list = field(default_factory=list)

    def add(self, **rec):
        self.records.append(rec)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=False) + "\n" for r in self.records)

    def for_message(self, msg_id: int) -> list[dict]:
        return [r for r in self.records if r["msg_id"] == msg_id]

    def delivered(self) -> dict:
        return {r["msg_id"]: r for r in self.records if r["action"] == "deliver"}

    def failed(self) -> dict:
        return {r["msg_id"]: r for r in self.records if r["action"] == "fail"}


def simulate(
    plan: Plan,
    requests: Iterable[tuple],
    table: Optional[RoutingTable] = None,
    max_ticks: int = 1_000_000,
) -> DeliveryLog:
    """Run calls ``(src, dst, arrival_tick)`` through FIFO repeater queues.

    Each tick a repeater forwards at most the head of its queue; a message
    received on tick t can be forwarded from tick t + 1 on. Repeaters are full
    duplex, so receiving and forwarding happen in the same tick.
    """
    table = table or build_routes(plan)
    log = DeliveryLog()
    pending = []
    for msg_id, (src, dst, tick) in enumerate(requests):
        pending.append((tick, msg_id, plan.user(src), plan.user(dst)))
    pending.sort(key=lambda p: (p[0], p[1]))
    queues: dict[int, deque] = {}
    tones = {i: plan.tone_of_cell(i) for i in range(plan.n_repeaters)}
    p = 0
    in_flight = 0
    tick = pending[0][0] if pending else 0
    while p < len(pending) or in_flight:
        if tick > max_ticks:
            raise RuntimeError("simulation exceeded max_ticks")
        # forward heads of queues that were loaded before this tick
        arrivals = []
        for rid in sorted(queues):
            q = queues[rid]
            if not q or q[0].ready_tick > tick:
                continue
            item = q.popleft()
            rep = Repeater(rid, tones[rid])
            last = item.position == len(item.hops) - 1
            next_pl = item.message.dst.pl_tone if last else tones[item.hops[item.position + 1]]
            out = relay_step(rep, item.message, next_pl)
            if out is None:
                log.add(msg_id=item.msg_id, tick=tick, repeater=rid, action="reject",
                        frequency=item.message.carried_frequency, pl=item.message.stamped_pl)
                in_flight -= 1
                continue
            if last:
                log.add(msg_id=item.msg_id, tick=tick, repeater=rid, action="deliver",
                        frequency=out.carried_frequency, pl=out.stamped_pl)
                in_flight -= 1
            else:
                log.add(msg_id=item.msg_id, tick=tick, repeater=rid, action="forward",
                        frequency=out.carried_frequency, pl=out.stamped_pl)
                arrivals.append(_InFlight(item.msg_id, out, item.hops, item.position + 1, tick + 1))
        # new calls: the user's own transmission reaches the home repeater
        while p < len(pending) and pending[p][0] == tick:
            _, msg_id, src, dst = pending[p]
            p += 1
            try:
                route = user_route(plan, table, src, dst)
            except NoRouteError as exc:
                log.add(msg_id=msg_id, tick=tick, repeater=plan.home_cell(src), action="fail",
                        frequency=None, pl=None, reason=str(exc))
                continue
            freq = first_hop_frequency(dst.channel, route.total_transmissions)
            msg = Message(src, dst, 0, freq, tones[route.hops[0]])
            arrivals.append(_InFlight(msg_id, msg, route.hops, 0, tick + 1))
            in_flight += 1
        for item in arrivals:
            rid = item.hops[item.position]
            log.add(msg_id=item.msg_id, tick=tick, repeater=rid, action="receive",
                    frequency=item.message.carried_frequency, pl=item.message.stamped_pl)
            queues.setdefault(rid, deque()).append(item)
        tick += 1
        if p < len(pending) and not in_flight:
            tick = max(tick, pending[p][0])
    return log


def audit_log(plan: Plan, log: DeliveryLog, requests: Sequence[tuple]) -> list[str]:
    """Check alternation, final channel and PL filtering for every delivered call."""
    problems = []
    tones = {i: plan.tone_of_cell(i) for i in range(plan.n_repeaters)}
    by_msg: dict = {}
    for r in log.records:
        by_msg.setdefault(r["msg_id"], []).append(r)
    for msg_id, (src, dst, _) in enumerate(requests):
        dst = plan.user(dst)
        recs = by_msg.get(msg_id, [])
        if not any(r["action"] == "deliver" for r in recs):
            problems.append(f"message {msg_id} not delivered")
            continue
        freqs = [r["frequency"] for r in recs if r["action"] in ("forward", "deliver")]
        first = [r["frequency"] for r in recs if r["action"] == "receive"][0]
        chain = [first] + freqs
        for a, b in zip(chain, chain[1:]):
            if abs(abs(a - b) - OFFSET) > 1e-6:
                problems.append(f"message {msg_id}: step {a} -> {b} is not a 0.6 MHz shift")
        if abs(chain[-1] - dst.channel) > 1e-6:
            problems.append(f"message {msg_id}: delivered on {chain[-1]}, expected {dst.channel}")
        # every forwarding repeater must have been addressed with its own tone
        received_pl = {}
        for r in recs:
            if r["action"] == "receive":
                received_pl[r["repeater"]] = r["pl"]
            elif r["action"] in ("forward", "deliver"):
                if received_pl.get(r["repeater"]) != tones[r["repeater"]]:
                    problems.append(f"message {msg_id}: repeater {r['repeater']} forwarded a foreign tone")
            elif r["action"] == "reject":
                problems.append(f"message {msg_id}: rejected at repeater {r['repeater']}")
    return problems
