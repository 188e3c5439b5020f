"""Departure-time models: deterministic deadlines, memoryless lifetimes, tables."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction


@dataclass(frozen=True)
class DepartureModel:
    """How long a vertex stays matchable after arriving.

    kind is one of:
      * ``deterministic`` -- every vertex departs exactly ``d`` periods after
        arrival (the base model),
      * ``geometric`` -- i.i.d. offsets with P[X = t] = delta * (1-delta)**t
        for t = 0, 1, 2, ...; memoryless in discrete time and equal to the
        deterministic model in distribution only when delta -> 1,
      * ``explicit`` -- a fixed per-vertex list of offsets,
      * ``tabulated`` -- i.i.d. offsets drawn from a finite pmf table.
    """

    kind: str
    d: int | None = None
    delta: Fraction | None = None
    offsets: tuple[int, ...] | None = None
    pmf: tuple[tuple[int, Fraction], ...] | None = None

    def __post_init__(self):
        if self.kind == "deterministic":
            if self.d is None or self.d < 0:
                raise ValueError("deterministic model needs d >= 0")
        elif self.kind == "geometric":
            if self.delta is None or not (0 < self.delta < 1):
                raise ValueError("geometric model needs delta in (0, 1)")
        elif self.kind == "explicit":
            if self.offsets is None or any(t < 0 for t in self.offsets):
                raise ValueError("explicit model needs offsets >= 0")
        elif self.kind == "tabulated":
            if not self.pmf:
                raise ValueError("tabulated model needs a pmf table")
            total = sum(p for _, p in self.pmf)
            if total != 1 or any(p < 0 for _, p in self.pmf) or any(t < 0 for t, _ in self.pmf):
                raise ValueError("tabulated pmf must be nonnegative on offsets >= 0 and sum to 1")
        else:
            raise ValueError(f"unknown departure model kind {self.kind!r}")

    def is_iid(self) -> bool:
        return self.kind in ("deterministic", "geometric", "tabulated")

    def pmf_table(self) -> dict[int, Fraction]:
        """Finite pmf for models with enumerable support; geometric has none."""
        if self.kind == "deterministic":
            return {self.d: Fraction(1)}
        if self.kind == "tabulated":
            return dict(self.pmf)
        raise ValueError(f"{self.kind} model has no finite pmf table")


def deterministic(d: int) -> DepartureModel:
    return DepartureModel("deterministic", d=d)


def geometric(delta) -> DepartureModel:
    return DepartureModel("geometric", delta=Fraction(delta))


def explicit(offsets) -> DepartureModel:
    return DepartureModel("explicit", offsets=tuple(int(t) for t in offsets))


def tabulated(pmf) -> DepartureModel:
    table = tuple(sorted((int(t), Fraction(p)) for t, p in dict(pmf).items()))
    return DepartureModel("tabulated", pmf=table)


def sample_departures(model: DepartureModel, n: int, seed: int) -> tuple[int, ...]:
    """Draw per-vertex departure offsets, reproducibly from the seed.

    Offsets count whole periods beyond the arrival period; a vertex arriving
    at slot s with offset t becomes critical at period s + t and departs at
    the end of that period.
    """
    if model.kind == "deterministic":
        return tuple([model.d] * n)
    if model.kind == "explicit":
        if len(model.offsets) != n:
            raise ValueError(f"explicit model has {len(model.offsets)} offsets, instance has {n}")
        return model.offsets
    rng = random.Random(seed)
    if model.kind == "geometric":
        # inverse CDF of the failures-before-success convention
        log_q = math.log(1 - float(model.delta))
        draws = []
        for _ in range(n):
            u = rng.random()
            draws.append(int(math.log(1 - u) / log_q) if u > 0 else 0)
        return tuple(draws)
    # tabulated
    support = [t for t, _ in model.pmf]
    weights = [float(p) for _, p in model.pmf]
    return tuple(rng.choices(support, weights=weights, k=n))


def hazard_alpha(model: DepartureModel, horizon: int) -> Fraction:
    """Exact worst-case probability that an earlier vertex frees up in time.

    For arrival slots i < j within the horizon, with i.i.d. offsets X (for i)
    and Y (for j), computes min over gaps g = j - i of
        P[i + X <= j + Y | i + X >= j] = P[X <= Y + g | X >= g],
    skipping gaps whose conditioning event has probability zero.
    """
    if horizon < 2:
        raise ValueError("horizon must cover at least two arrival slots")
    if model.kind == "deterministic":
        return Fraction(1)  # i + d <= j + d whenever i <= j
    if model.kind == "geometric":
        # By memorylessness X - g | X >= g is again geometric, so the value is
        # sum_t delta(1-delta)^t * P[Y >= t] = 1 / (2 - delta) for every gap.
        return Fraction(1, 1) / (2 - model.delta)
    if model.kind == "explicit":
        raise ValueError("hazard_alpha needs a distributional model, not explicit offsets")
    pmf = model.pmf_table()
    tail = _tail_table(pmf)
    best: Fraction | None = None
    for g in range(1, horizon):
        denom = tail.get(g, Fraction(0))
        if denom == 0:
            continue  # degenerate conditioning event
        num = Fraction(0)
        for t, p in pmf.items():
            if t >= g:
                num += p * tail.get(t - g, Fraction(0))
        value = num / denom
        if best is None or value < best:
            best = value
    if best is None:
        raise ValueError("conditioning event has probability zero at every gap")
    return best


def _tail_table(pmf: dict[int, Fraction]) -> dict[int, Fraction]:
    top = max(pmf)
    tails: dict[int, Fraction] = {}
    acc = Fraction(0)
    for t in range(top, -1, -1):
        acc += pmf.get(t, Fraction(0))
        tails[t] = acc
    return tails


def parse_departure_model(data: dict) -> DepartureModel:
    """Parse the instance-file form, e.g. {"kind": "geometric", "delta": "1/2"}."""
    if not isinstance(data, dict) or "kind" not in data:
        raise ValueError("departure_model must be an object with a 'kind'")
    kind = data["kind"]
    fields = set(data) - {"kind"}
    if kind == "deterministic":
        if fields != {"d"}:
            raise ValueError("deterministic departure_model takes exactly 'd'")
        return deterministic(int(data["d"]))
    if kind == "geometric":
        if fields != {"delta"}:
            raise ValueError("geometric departure_model takes exactly 'delta'")
        return geometric(Fraction(str(data["delta"])))
    if kind == "tabulated":
        if fields != {"pmf"}:
            raise ValueError("tabulated departure_model takes exactly 'pmf'")
        return tabulated({int(t): Fraction(str(p)) for t, p in data["pmf"].items()})
    raise ValueError(f"unknown departure_model kind {kind!r}")


def departure_model_to_json(model: DepartureModel) -> dict:
    if model.kind == "deterministic":
        return {"kind": "deterministic", "d": model.d}
    if model.kind == "geometric":
        return {"kind": "geometric", "delta": f"{model.delta.numerator}/{model.delta.denominator}"}
    if model.kind == "tabulated":
        return {"kind": "tabulated",
                "pmf": {str(t): f"{p.numerator}/{p.denominator}" for t, p in model.pmf}}
    raise ValueError(f"{model.kind} model does not serialize; store 'departures' instead")
