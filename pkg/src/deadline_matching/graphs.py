"""Weighted graphs, arrival orders, matchings, and the online deadline model.

Everything numeric is an exact `fractions.Fraction`, end to end, so that
conservation identities and dual-feasibility checks can use equality instead
of tolerances. Vertices and arrival slots are 1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

from .departures import DepartureModel, departure_model_to_json, parse_departure_model

Pair = tuple[int, int]


class InstanceFormatError(ValueError):
    """Raised for malformed instance files."""


def as_rational(value) -> Fraction:
    """Coerce ints, 'num/den' strings, and Fractions to an exact Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not weights")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def ordered_pair(i: int, j: int) -> Pair:
    if i == j:
        raise ValueError(f"self-loop at vertex {i}")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric nonnegative edge weights on vertices 1..n; absent edge = 0."""

    n: int
    weights: dict[Pair, Fraction]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        normalized: dict[Pair, Fraction] = {}
        for (i, j), w in self.weights.items():
            pair = ordered_pair(i, j)
            if not (1 <= pair[0] and pair[1] <= self.n):
                raise ValueError(f"edge {pair} outside 1..{self.n}")
            w = as_rational(w)
            if w < 0:
                raise ValueError(f"negative weight on {pair}")
            if pair in normalized and normalized[pair] != w:
                raise ValueError(f"conflicting weights for {pair}")
            if w != 0:
                normalized[pair] = w
        object.__setattr__(self, "weights", normalized)

    def weight(self, i: int, j: int) -> Fraction:
        return self.weights.get(ordered_pair(i, j), Fraction(0))

    def edges(self):
        """Positive-weight edges as (i, j, weight) with i < j."""
        for (i, j), w in sorted(self.weights.items()):
            yield i, j, w

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def total_weight(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))


@dataclass(frozen=True)
class ArrivalOrder:
    """A bijection vertex -> arrival slot, both in 1..n."""

    slots: tuple[int, ...]

    def __post_init__(self):
        slots = tuple(int(s) for s in self.slots)
        n = len(slots)
        if sorted(slots) != list(range(1, n + 1)):
            raise ValueError("arrival order must be a permutation of 1..n")
        inverse = [0] * n
        for v, s in enumerate(slots, start=1):
            inverse[s - 1] = v
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "_inverse", tuple(inverse))

    @classmethod
    def identity(cls, n: int) -> "ArrivalOrder":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.slots)

    def slot_of(self, v: int) -> int:
        return self.slots[v - 1]

    def vertex_at(self, slot: int) -> int:
        return self._inverse[slot - 1]


@dataclass(frozen=True)
class OnlineInstance:
    """A weighted graph arriving over time, with a deadline model.

    ``deadline`` is the deterministic number of periods a vertex stays after
    arrival; ``departures`` optionally overrides it per vertex (realized
    offsets d_i). ``roles`` optionally declares a seller/buyer side per vertex
    for constrained bipartite inputs; it is in-memory metadata only.
    """

    graph: WeightedGraph
    order: ArrivalOrder
    deadline: int
    departures: tuple[int, ...] | None = None
    departure_model: DepartureModel | None = None
    roles: dict[int, str] | None = None

    def __post_init__(self):
        if self.deadline < 0:
            raise ValueError("deadline must be >= 0")
        if self.order.n != self.graph.n:
            raise ValueError("arrival order and graph disagree on n")
        if self.departures is not None:
            deps = tuple(int(t) for t in self.departures)
            if len(deps) != self.graph.n:
                raise ValueError("departures must list one offset per vertex")
            if any(t < 0 for t in deps):
                raise ValueError("departure offsets must be >= 0")
            object.__setattr__(self, "departures", deps)
        if self.roles is not None:
            if set(self.roles) != set(self.graph.vertices()):
                raise ValueError("roles must cover every vertex")
            if any(r not in ("seller", "buyer") for r in self.roles.values()):
                raise ValueError("roles are 'seller' or 'buyer'")

    @property
    def n(self) -> int:
        return self.graph.n

    def departure_offset(self, v: int) -> int:
        return self.departures[v - 1] if self.departures is not None else self.deadline

    def critical_time(self, v: int) -> int:
        """Last period at which v can still be matched; it departs at its end."""
        return self.order.slot_of(v) + self.departure_offset(v)

    def with_order(self, order: ArrivalOrder) -> "OnlineInstance":
        return replace(self, order=order)

    def with_departures(self, departures) -> "OnlineInstance":
        return replace(self, departures=tuple(departures))


def build_online_graph(instance: OnlineInstance) -> WeightedGraph:
    """Keep edge (i, j) iff |slot(i) - slot(j)| <= deadline; others become 0."""
    d = instance.deadline
    slot = instance.order.slot_of
    kept = {
        (i, j): w
        for (i, j), w in instance.graph.weights.items()
        if abs(slot(i) - slot(j)) <= d
    }
    return WeightedGraph(instance.n, kept)


@dataclass(frozen=True)
class Matching:
    """Vertex-disjoint unordered pairs with their exact total weight."""

    pairs: frozenset[Pair]
    weight: Fraction

    def __post_init__(self):
        pairs = frozenset(ordered_pair(i, j) for i, j in self.pairs)
        seen: set[int] = set()
        for i, j in pairs:
            if i in seen or j in seen:
                raise ValueError(f"vertex reused by pair ({i}, {j})")
            seen.update((i, j))
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "weight", Fraction(self.weight))

    @classmethod
    def from_pairs(cls, graph: WeightedGraph, pairs) -> "Matching":
        pairs = frozenset(ordered_pair(i, j) for i, j in pairs)
        total = sum((graph.weight(i, j) for i, j in pairs), Fraction(0))
        return cls(pairs, total)

    def sorted_pairs(self) -> tuple[Pair, ...]:
        return tuple(sorted(self.pairs))


def matching_weight(graph: WeightedGraph, matching) -> Fraction:
    """Exact sum of edge weights of a pair set; absent edges contribute 0.

    Raises on overlapping pairs (disjointness violation).
    """
    pairs = matching.pairs if isinstance(matching, Matching) else matching
    seen: set[int] = set()
    total = Fraction(0)
    for i, j in pairs:
        i, j = ordered_pair(i, j)
        if i in seen or j in seen:
            raise ValueError(f"pairs overlap at vertex {i if i in seen else j}")
        seen.update((i, j))
        total += graph.weight(i, j)
    return total


@dataclass(frozen=True)
class MatchViolation:
    pair: Pair
    time: int | None
    reasons: tuple[str, ...]

    def __str__(self):
        at = f" at time {self.time}" if self.time is not None else ""
        return f"pair {self.pair}{at} invalid: {', '.join(self.reasons)}"


def validate_matching(instance: OnlineInstance, matching, schedule: dict[Pair, int],
                      lookahead: int = 0) -> MatchViolation | None:
    """Check a matched pair set with its match times against the online rules.

    A pair (i, j) is valid when the deadline edge exists
    (|slot(i) - slot(j)| <= deadline + lookahead) and its match time lies in
    [max slot, min critical time + lookahead]. The lookahead allowance covers
    policies granted knowledge of upcoming arrivals; it is 0 for the base
    model. Returns None when everything checks out, otherwise the first
    violated pair (by match time) with every violated condition listed.
    """
    pairs = matching.pairs if isinstance(matching, Matching) else frozenset(
        ordered_pair(i, j) for i, j in matching)
    seen: set[int] = set()
    overlap: set[int] = set()
    for i, j in pairs:
        for v in (i, j):
            if v in seen:
                overlap.add(v)
            seen.add(v)
    slot = instance.order.slot_of
    for pair in sorted(pairs, key=lambda p: (schedule.get(p, -1), p)):
        i, j = pair
        reasons = []
        if pair not in schedule:
            reasons.append("no match time scheduled")
            return MatchViolation(pair, None, tuple(reasons))
        t = schedule[pair]
        if i in overlap or j in overlap:
            reasons.append("overlaps another pair")
        if abs(slot(i) - slot(j)) > instance.deadline + lookahead:
            reasons.append("edge absent in the online graph")
        if t < max(slot(i), slot(j)):
            reasons.append("matched before both arrived")
        departs = min(instance.critical_time(i), instance.critical_time(j))
        if t > departs + lookahead:
            late = i if instance.critical_time(i) <= instance.critical_time(j) else j
            reasons.append(
                f"matched after vertex {late} departed at time {instance.critical_time(late)}")
        if reasons:
            return MatchViolation(pair, t, tuple(reasons))
    return None


# ---------------------------------------------------------------------------
# Instance files

_INSTANCE_FIELDS = {"n", "d", "edges", "sigma", "departures", "departure_model"}


def instance_to_json(instance: OnlineInstance) -> dict:
    data: dict = {
        "n": instance.n,
        "d": instance.deadline,
        "edges": [[i, j, format_rational(w)] for i, j, w in instance.graph.edges()],
    }
    if instance.order.slots != ArrivalOrder.identity(instance.n).slots:
        data["sigma"] = list(instance.order.slots)
    if instance.departures is not None:
        data["departures"] = list(instance.departures)
    if instance.departure_model is not None:
        data["departure_model"] = departure_model_to_json(instance.departure_model)
    return data


def instance_from_json(data: dict) -> OnlineInstance:
    if not isinstance(data, dict):
        raise InstanceFormatError("instance file must hold a JSON object")
    unknown = set(data) - _INSTANCE_FIELDS
    if unknown:
        raise InstanceFormatError(f"unknown instance fields: {sorted(unknown)}")
    try:
        n = int(data["n"])
        d = int(data["d"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError("instance needs integer 'n' and 'd'") from exc
    weights: dict[Pair, Fraction] = {}
    for entry in data.get("edges", []):
        if len(entry) != 3:
            raise InstanceFormatError(f"edge entry {entry!r} is not [i, j, weight]")
        i, j, w = entry
        try:
            weights[ordered_pair(int(i), int(j))] = as_rational(w)
        except (TypeError, ValueError) as exc:
            raise InstanceFormatError(f"bad edge entry {entry!r}: {exc}") from exc
    sigma = data.get("sigma")
    order = ArrivalOrder(tuple(sigma)) if sigma is not None else ArrivalOrder.identity(n)
    departures = data.get("departures")
    model = None
    if "departure_model" in data:
        try:
            model = parse_departure_model(data["departure_model"])
        except ValueError as exc:
            raise InstanceFormatError(str(exc)) from exc
    try:
        return OnlineInstance(
            WeightedGraph(n, weights), order, d,
            departures=tuple(departures) if departures is not None else None,
            departure_model=model)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc


def save_instance(instance: OnlineInstance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_json(instance), indent=2) + "\n",
                          encoding="utf-8")


def load_instance(path) -> OnlineInstance:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    return instance_from_json(data)
