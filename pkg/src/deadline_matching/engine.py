"""Deterministic event-driven simulator for online matching policies.

Arrivals and critical events are replayed in time order (arrivals first at
a tick, then criticals, lower vertex index first within a kind). A vertex
departs at the end of its critical period. Policies see the market only
through a MarketView, which reveals an edge weight exactly when the two
endpoints' presence windows allow a match; randomness comes from a stream
of fair bits so that expectations can be enumerated exactly.
"""

from __future__ import annotations

import csv
import hashlib
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import permutations

from .graphs import (ArrivalOrder, Matching, OnlineInstance, Pair,
                     build_online_graph, format_rational, ordered_pair,
                     validate_matching)
from .departures import sample_departures
from .offline import offline_optimum

ARRIVAL = "arrival"
CRITICAL = "critical"


@dataclass(frozen=True)
class Event:
    time: int
    kind: str
    vertex: int

    def sort_key(self):
        return (self.time, 0 if self.kind == ARRIVAL else 1, self.vertex)


def event_schedule(instance: OnlineInstance, departures: tuple[int, ...]) -> list[Event]:
    events = []
    for v in instance.graph.vertices():
        slot = instance.order.slot_of(v)
        events.append(Event(slot, ARRIVAL, v))
        events.append(Event(slot + departures[v - 1], CRITICAL, v))
    return sorted(events, key=Event.sort_key)


class BitStream:
    """Fair random bits, deterministic per seed."""

    def __init__(self, seed: int):
        self._rng = random.Random(seed)
        self.used = 0

    def flip(self) -> int:
        self.used += 1
        return self._rng.getrandbits(1)


class OutOfBits(Exception):
    """A scripted replay ran past its prefix (used by the exact enumerator)."""


class ScriptedBits:
    def __init__(self, script: tuple[int, ...]):
        self.script = script
        self.used = 0

    def flip(self) -> int:
        if self.used >= len(self.script):
            raise OutOfBits(self.used)
        bit = self.script[self.used]
        self.used += 1
        return bit


class MarketView:
    """What a policy may observe: presence, slots, and matchable weights.

    A weight is revealed only between vertices that have both arrived
    (information about the future does not exist), and it reads as zero when
    the earlier endpoint's presence window cannot reach the later arrival.
    Policies granted a lookahead allowance of l may additionally treat
    windows as extended by l periods; that models knowing the next l
    arrivals, implemented as a time extension per the batching reduction.
    """

    def __init__(self, instance: OnlineInstance, departures: tuple[int, ...],
                 lookahead: int):
        self._instance = instance
        self._departures = departures
        self._lookahead = lookahead
        self._arrived: set[int] = set()
        self._matched: set[int] = set()
        self.now = 0

    # engine-side hooks
    def _advance(self, time: int):
        self.now = time

    def _mark_arrived(self, v: int):
        self._arrived.add(v)

    def _mark_matched(self, v: int):
        self._matched.add(v)

    # policy-facing API
    @property
    def n(self) -> int:
        return self._instance.n

    @property
    def deadline(self) -> int:
        return self._instance.deadline

    @property
    def lookahead(self) -> int:
        return self._lookahead

    def roles(self) -> dict[int, str] | None:
        return self._instance.roles

    def slot_of(self, v: int) -> int:
        if v not in self._arrived:
            raise LookupError(f"vertex {v} has not arrived")
        return self._instance.order.slot_of(v)

    def has_arrived(self, v: int) -> bool:
        return v in self._arrived

    def departure_time(self, v: int) -> int:
        """Known only once the critical event has been reached."""
        t = self._instance.order.slot_of(v) + self._departures[v - 1]
        if v not in self._arrived or t > self.now:
            raise LookupError(f"vertex {v}'s departure is not yet known")
        return t

    def has_departed(self, v: int) -> bool:
        if v not in self._arrived:
            return False
        return self._instance.order.slot_of(v) + self._departures[v - 1] < self.now

    def is_matched(self, v: int) -> bool:
        return v in self._matched

    def present(self) -> list[int]:
        """Arrived, not past their departure period, not matched away."""
        return sorted(v for v in self._arrived
                      if not self.has_departed(v) and v not in self._matched)

    def weight(self, u: int, v: int) -> Fraction:
        if u not in self._arrived or v not in self._arrived:
            raise LookupError("weights to vertices that have not arrived are hidden")
        slot = self._instance.order.slot_of
        a, b = (u, v) if slot(u) <= slot(v) else (v, u)
        # the deadline defines which edges exist; a realized departure can
        # only shorten the window, never extend it past the deadline graph
        window = min(self._departures[a - 1], self._instance.deadline)
        if slot(b) > slot(a) + window + self._lookahead:
            return Fraction(0)  # b arrived after a could last be matched
        return self._instance.graph.weight(u, v)

    def revealed_neighbors(self, v: int) -> dict[int, Fraction]:
        """Positive matchable weights from v to currently present vertices."""
        out = {}
        for u in self.present():
            if u == v:
                continue
            w = self.weight(u, v)
            if w > 0:
                out[u] = w
        return out


class OnlinePolicy:
    """Base class: hooks return pairs to finalize at the current tick."""

    name = "policy"
    lookahead = 0

    def reset(self, view: MarketView, rng) -> None:
        self.view = view
        self.rng = rng
        self.log: list[tuple] = []

    def on_arrival(self, v: int):
        return ()

    def on_critical(self, v: int):
        return ()


@dataclass(frozen=True)
class RunResult:
    pairs: frozenset[Pair]
    schedule: dict[Pair, int]
    collected: Fraction
    trace: tuple[tuple, ...]
    bits_used: int

    def matching(self, instance: OnlineInstance) -> Matching:
        return Matching.from_pairs(build_online_graph(instance), self.pairs)


def realized_departures(instance: OnlineInstance, seed: int) -> tuple[int, ...]:
    if instance.departures is not None:
        return instance.departures
    if instance.departure_model is not None:
        return sample_departures(instance.departure_model, instance.n,
                                 _derive_seed(seed, "departures"))
    return tuple([instance.deadline] * instance.n)


def simulate(instance: OnlineInstance, policy: OnlinePolicy, seed: int = 0,
             bits=None) -> RunResult:
    """Replay the instance against the policy; exact, reproducible per seed.

    The policy's emitted pairs are validated on the spot: both endpoints
    arrived and unmatched, and the tick inside both presence windows (plus
    the policy's lookahead allowance). An invalid pair aborts the run.
    """
    departures = realized_departures(instance, seed)
    rng = bits if bits is not None else BitStream(_derive_seed(seed, "policy-bits"))
    view = MarketView(instance, departures, policy.lookahead)
    policy.reset(view, rng)
    pairs: dict[Pair, int] = {}
    matched: set[int] = set()
    collected = Fraction(0)
    trace: list[tuple] = []
    for event in event_schedule(instance, departures):
        view._advance(event.time)
        if event.kind == ARRIVAL:
            view._mark_arrived(event.vertex)
            emitted = policy.on_arrival(event.vertex)
        else:
            emitted = policy.on_critical(event.vertex)
        trace.append((event.time, event.kind, event.vertex))
        for raw in emitted or ():
            pair = ordered_pair(*raw)
            i, j = pair
            slot = instance.order.slot_of
            if i in matched or j in matched:
                raise ValueError(f"policy re-matched a vertex in pair {pair}")
            if not (view.has_arrived(i) and view.has_arrived(j)):
                raise ValueError(f"policy matched unarrived vertex in {pair}")
            if abs(slot(i) - slot(j)) > instance.deadline + policy.lookahead:
                raise ValueError(f"pair {pair} has no edge in the online graph")
            latest = min(slot(i) + departures[i - 1],
                         slot(j) + departures[j - 1]) + policy.lookahead
            if not (max(slot(i), slot(j)) <= event.time <= latest):
                raise ValueError(
                    f"pair {pair} at time {event.time} outside its window "
                    f"[{max(slot(i), slot(j))}, {latest}]")
            matched.update(pair)
            view._mark_matched(i)
            view._mark_matched(j)
            pairs[pair] = event.time
            collected += instance.graph.weight(i, j)
            trace.append((event.time, "match", pair))
    result = RunResult(frozenset(pairs), dict(pairs), collected, tuple(trace),
                       rng.used)
    violation = validate_matching(instance.with_departures(departures)
                                  if instance.departures is None else instance,
                                  result.pairs, result.schedule,
                                  lookahead=policy.lookahead)
    if violation is not None:
        raise AssertionError(f"engine admitted an invalid matching: {violation}")
    return result


class BranchingLimitExceeded(ValueError):
    pass


def enumerate_branches(instance: OnlineInstance, policy: OnlinePolicy,
                       max_flips: int = 20):
    """Yield (bits, RunResult) over the policy's full fair-coin tree.

    Refuses runs that consume more than max_flips bits (2**max_flips leaves).
    The instance must have deterministic or explicit departures; model-driven
    sampling is not enumerable.
    """
    if instance.departures is None and instance.departure_model is not None:
        if instance.departure_model.kind != "deterministic":
            raise BranchingLimitExceeded(
                "stochastic departure models are not exactly enumerable")
    stack: list[tuple[int, ...]] = [()]
    while stack:
        prefix = stack.pop()
        try:
            result = simulate(instance, policy, bits=ScriptedBits(prefix))
        except OutOfBits:
            if len(prefix) >= max_flips:
                raise BranchingLimitExceeded(
                    f"policy consumed more than {max_flips} fair bits")
            stack.append(prefix + (1,))
            stack.append(prefix + (0,))
            continue
        assert result.bits_used == len(prefix)
        yield prefix, result


def exact_expectation(instance: OnlineInstance, policy: OnlinePolicy,
                      max_flips: int = 20) -> Fraction:
    """Exact expected collected value over the policy's fair coin flips."""
    total = Fraction(0)
    for bits, result in enumerate_branches(instance, policy, max_flips):
        total += result.collected * Fraction(1, 2 ** len(bits))
    return total


# ---------------------------------------------------------------------------
# Competitive reports

@dataclass(frozen=True)
class ReportRow:
    instance_id: str
    policy: str
    arrival_model: str
    n: int
    d: int
    samples_or_exact: str
    alg_value: Fraction
    off_value: Fraction

    @property
    def ratio(self) -> Fraction | None:
        if self.off_value == 0:
            return None
        return self.alg_value / self.off_value


REPORT_COLUMNS = ["instance_id", "policy", "arrival_model", "n", "d",
                  "samples_or_exact", "alg_value", "off_value", "ratio"]

EXHAUSTIVE_ORDER_CAP = 8


def competitive_report(instances, policies, arrival_model: str = "fixed",
                       seeds: int = 0, max_flips: int = 20,
                       base_seed: int = 0) -> list[ReportRow]:
    """Expected policy value vs offline optimum per (instance, policy).

    arrival_model "fixed" keeps each instance's own order; "uniform"
    averages over arrival orders, exhaustively for n <= 8 when seeds == 0,
    else by Monte Carlo over `seeds` sampled orders. Coin randomness is
    enumerated exactly when it fits the flip cap, else averaged over seeds.
    """
    if arrival_model not in ("fixed", "uniform"):
        raise ValueError("arrival_model is 'fixed' or 'uniform'")
    rows = []
    for idx, (instance_id, instance) in enumerate(_as_named(instances)):
        orders, exhaustive = _order_family(instance, arrival_model, seeds,
                                           _derive_seed(base_seed, f"orders-{idx}"))
        off_total = Fraction(0)
        for order in orders:
            off_total += offline_optimum(instance.with_order(order)).weight
        off_value = off_total / len(orders)
        for policy_name, factory in _as_named(policies):
            alg_total = Fraction(0)
            exact = exhaustive
            samples = 0
            for k, order in enumerate(orders):
                variant = instance.with_order(order)
                policy = factory() if callable(factory) else factory
                try:
                    if seeds:
                        raise BranchingLimitExceeded("seeded run requested")
                    alg_total += exact_expectation(variant, policy, max_flips)
                except BranchingLimitExceeded:
                    exact = False
                    runs = max(seeds, 1)
                    for s in range(runs):
                        policy = factory() if callable(factory) else factory
                        alg_total += simulate(
                            variant, policy,
                            seed=_derive_seed(base_seed, f"run-{idx}-{k}-{s}")
                        ).collected / runs
                    samples += runs
            alg_value = alg_total / len(orders)
            rows.append(ReportRow(
                instance_id, policy_name, arrival_model,
                instance.n, instance.deadline,
                "exact" if exact else str(samples),
                alg_value, off_value))
    return rows


def write_report_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            ratio = row.ratio
            writer.writerow([
                row.instance_id, row.policy, row.arrival_model, row.n, row.d,
                row.samples_or_exact, format_rational(row.alg_value),
                format_rational(row.off_value),
                format_rational(ratio) if ratio is not None else "",
            ])


def _order_family(instance, arrival_model, seeds, seed):
    if arrival_model == "fixed":
        return [instance.order], True
    n = instance.n
    if seeds == 0:
        if n > EXHAUSTIVE_ORDER_CAP:
            raise ValueError(
                f"exhaustive uniform orders need n <= {EXHAUSTIVE_ORDER_CAP}; "
                "pass seeds=N for Monte Carlo")
        return [ArrivalOrder(p) for p in permutations(range(1, n + 1))], True
    rng = random.Random(seed)
    orders = []
    for _ in range(seeds):
        slots = list(range(1, n + 1))
        rng.shuffle(slots)
        orders.append(ArrivalOrder(tuple(slots)))
    return orders, False


def _as_named(items):
    named = []
    for i, item in enumerate(items):
        if isinstance(item, tuple) and len(item) == 2:
            named.append(item)
        else:
            label = getattr(item, "name", None) or f"item-{i}"
            named.append((label, item))
    return named


def _derive_seed(seed: int, label: str) -> int:
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")
