"""Mask graphs over arrival structure: cycle powers, path powers, batchings.

These are the {0,1}-weighted graphs the covering analysis is phrased in,
plus the pointwise algebra (linear combination, product, cover test) and the
enumeration of periodic batch partitions used as covering-LP columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graphs import ArrivalOrder, Pair, WeightedGraph, ordered_pair

ONE = Fraction(1)


def cyclic_distance(i: int, j: int, n: int) -> int:
    raw = abs(i - j) % n
    return min(raw, n - raw)


def cycle_power(n: int, d: int) -> WeightedGraph:
    """The n-cycle to the power d: edge iff cyclic distance <= d."""
    if d < 1:
        raise ValueError("cycle power needs d >= 1")
    if n <= 2 * d:
        raise ValueError(f"n={n} <= 2d={2 * d}: cycle power degenerates")
    weights = {}
    for i in range(1, n + 1):
        for step in range(1, d + 1):
            j = (i + step - 1) % n + 1
            weights[ordered_pair(i, j)] = ONE
    return WeightedGraph(n, weights)


def _slots(sigma, n: int) -> tuple[int, ...]:
    if isinstance(sigma, ArrivalOrder):
        slots = sigma.slots
    else:
        slots = tuple(int(s) for s in sigma)
    if len(slots) != n:
        raise ValueError("sigma length disagrees with n")
    return ArrivalOrder(slots).slots  # validates the permutation


def path_power(sigma, n: int, d: int) -> WeightedGraph:
    """Edge (i, j) iff |slot(i) - slot(j)| <= d: the arrival path to power d."""
    slots = _slots(sigma, n)
    weights = {}
    for i, j in combinations(range(1, n + 1), 2):
        if abs(slots[i - 1] - slots[j - 1]) <= d:
            weights[(i, j)] = ONE
    return WeightedGraph(n, weights)


def batch_index(slot: int, d: int) -> int:
    """The unique b with (d+1)(b-1) < slot <= (d+1)b."""
    return (slot + d) // (d + 1)


def batched_graph(sigma, n: int, d: int) -> WeightedGraph:
    """Edge (i, j) iff i and j fall in the same (d+1)-slot batch."""
    slots = _slots(sigma, n)
    weights = {}
    for i, j in combinations(range(1, n + 1), 2):
        if batch_index(slots[i - 1], d) == batch_index(slots[j - 1], d):
            weights[(i, j)] = ONE
    return WeightedGraph(n, weights)


# ---------------------------------------------------------------------------
# Pointwise graph algebra

def combine(a, h: WeightedGraph, b, h2: WeightedGraph) -> WeightedGraph:
    """The weighted sum a*h + b*h2 (coefficients must keep weights >= 0)."""
    if h.n != h2.n:
        raise ValueError("graph sizes differ")
    a, b = Fraction(a), Fraction(b)
    sums: dict[Pair, Fraction] = {}
    for pair, w in h.weights.items():
        sums[pair] = sums.get(pair, Fraction(0)) + a * w
    for pair, w in h2.weights.items():
        sums[pair] = sums.get(pair, Fraction(0)) + b * w
    return WeightedGraph(h.n, sums)


def multiply(h: WeightedGraph, h2: WeightedGraph) -> WeightedGraph:
    """Pointwise product; masking a weighted graph by a {0,1} mask is h*mask."""
    if h.n != h2.n:
        raise ValueError("graph sizes differ")
    out = {
        pair: w * h2.weights[pair]
        for pair, w in h.weights.items()
        if pair in h2.weights
    }
    return WeightedGraph(h.n, out)


def is_cover(h: WeightedGraph, h2: WeightedGraph) -> bool:
    """True iff h dominates h2 edgewise (every weight of h >= that of h2)."""
    if h.n != h2.n:
        raise ValueError("graph sizes differ")
    return all(h.weight(i, j) >= w for i, j, w in h2.edges())


def cover_deficits(h: WeightedGraph, h2: WeightedGraph):
    """Edges where h falls short of h2, with the (positive) deficit."""
    if h.n != h2.n:
        raise ValueError("graph sizes differ")
    out = []
    for i, j, w in h2.edges():
        have = h.weight(i, j)
        if have < w:
            out.append(((i, j), w - have))
    return out


def contract_cycle_mask(n: int, d: int, u: int) -> WeightedGraph:
    """Group u consecutive vertices of C_n^d; edge between groups with any edge."""
    if n % u:
        raise ValueError("u must divide n")
    base = cycle_power(n, d)
    m = n // u
    group = lambda v: (v - 1) // u + 1
    weights = {}
    for i, j, _ in base.edges():
        gi, gj = group(i), group(j)
        if gi != gj:
            weights[ordered_pair(gi, gj)] = ONE
    return WeightedGraph(m, weights)


# ---------------------------------------------------------------------------
# Periodic batch partitions

@dataclass(frozen=True)
class PeriodicBatching:
    """A partition of 1..n into batches that repeats with period p.

    Shifting every vertex by p (mod n) maps batches to batches. Full batches
    have batch_size vertices; at most one boundary batch may be smaller, and
    only when n is not a multiple of the batch size.
    """

    n: int
    batch_size: int
    period: int
    batches: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        batches = tuple(tuple(sorted(b)) for b in self.batches)
        batches = tuple(sorted(batches, key=lambda b: b[0]))
        object.__setattr__(self, "batches", batches)
        flat = [v for b in batches for v in b]
        if sorted(flat) != list(range(1, self.n + 1)):
            raise ValueError("batches must partition 1..n")
        sizes = sorted(len(b) for b in batches)
        if sizes[1:] and sizes[1:] != [self.batch_size] * (len(sizes) - 1):
            raise ValueError("all but at most one batch must have the full size")
        if sizes and sizes[0] != self.batch_size:
            if self.n % self.batch_size == 0:
                raise ValueError("no boundary batch allowed when the size divides n")
        if self.n % self.period:
            raise ValueError("period must divide n")
        if self.period < self.n:
            # shifting by p must permute the batches
            key = set(batches)
            for batch in batches:
                image = tuple(sorted((v + self.period - 1) % self.n + 1 for v in batch))
                if image not in key:
                    raise ValueError("partition is not periodic with the stated period")

    def batch_of(self, v: int) -> tuple[int, ...]:
        for batch in self.batches:
            if v in batch:
                return batch
        raise KeyError(v)

    def mask(self) -> WeightedGraph:
        weights = {}
        for batch in self.batches:
            for i, j in combinations(batch, 2):
                weights[ordered_pair(i, j)] = ONE
        return WeightedGraph(self.n, weights)

    def shifted(self, r: int) -> "PeriodicBatching":
        moved = tuple(
            tuple((v + r - 1) % self.n + 1 for v in batch) for batch in self.batches
        )
        return PeriodicBatching(self.n, self.batch_size, self.period, moved)

    def canonical_key(self) -> tuple[tuple[int, ...], ...]:
        return self.batches

    def rotation_orbit(self) -> list["PeriodicBatching"]:
        seen: dict[tuple, PeriodicBatching] = {}
        for r in range(self.n):
            moved = self.shifted(r)
            seen.setdefault(moved.canonical_key(), moved)
        return list(seen.values())

    def generator_batches(self) -> tuple[tuple[int, ...], ...]:
        """One representative batch per period-shift orbit (for storage)."""
        reps = []
        covered: set[tuple[int, ...]] = set()
        for batch in self.batches:
            if batch in covered:
                continue
            reps.append(batch)
            cur = batch
            for _ in range(self.n // self.period):
                cur = tuple(sorted((v + self.period - 1) % self.n + 1 for v in cur))
                covered.add(cur)
        return tuple(reps)

    @classmethod
    def from_generators(cls, n: int, batch_size: int, period: int,
                        generators) -> "PeriodicBatching":
        batches: set[tuple[int, ...]] = set()
        for gen in generators:
            cur = tuple(sorted(int(v) for v in gen))
            for _ in range(n // period):
                batches.add(cur)
                cur = tuple(sorted((v + period - 1) % n + 1 for v in cur))
        return cls(n, batch_size, period, tuple(batches))


def batching_from_order(sigma, n: int, d: int, period: int | None = None) -> PeriodicBatching:
    """The batch partition induced by an arrival order with (d+1)-slot batches."""
    slots = _slots(sigma, n)
    buckets: dict[int, list[int]] = {}
    for v in range(1, n + 1):
        buckets.setdefault(batch_index(slots[v - 1], d), []).append(v)
    return PeriodicBatching(n, d + 1, period if period is not None else n,
                            tuple(tuple(b) for b in buckets.values()))


def enumerate_periodic_permutations(n: int, p: int):
    """All p-periodic permutations of 1..n (slot values of vertices 1..p fix the rest).

    A p-periodic permutation is determined by sigma on 1..p, which must take
    pairwise distinct values mod p; the remaining slots follow from
    sigma(i + p) = sigma(i) + p (mod n). Exponential in p; test-scale only.
    """
    if n % p:
        raise ValueError("p must divide n")
    u = n // p

    def extend(sigma_head: list[int], used_residues: set[int]):
        i = len(sigma_head)
        if i == p:
            full = [0] * n
            for base in range(p):
                for t in range(u):
                    full[base + t * p] = (sigma_head[base] + t * p - 1) % n + 1
            yield tuple(full)
            return
        for value in range(1, n + 1):
            if value % p in used_residues:
                continue
            used_residues.add(value % p)
            sigma_head.append(value)
            yield from extend(sigma_head, used_residues)
            sigma_head.pop()
            used_residues.discard(value % p)

    yield from extend([], set())


def enumerate_periodic_batchings(n: int, p: int, d: int) -> list[PeriodicBatching]:
    """All distinct p-periodic (d+1)-batch partitions realizable by p-periodic
    permutations, i.e. the deduplicated covering-LP columns.

    Realizability requires every batch to hit pairwise distinct residues mod p
    (so its period-shift orbit has full length n/p and batch labels can follow
    the slot blocks). The enumeration places the batch of the smallest
    uncovered vertex together with its whole shift orbit, which yields each
    partition exactly once.
    """
    if (d + 1) > p or p % (d + 1):
        raise ValueError("batch size d+1 must divide the period")
    if n % p:
        raise ValueError("p must divide n")
    u = n // p
    size = d + 1
    results: list[PeriodicBatching] = []

    def orbit(batch: tuple[int, ...]):
        out = []
        cur = batch
        for _ in range(u):
            cur = tuple(sorted((v + p - 1) % n + 1 for v in cur))
            out.append(cur)
        return out

    def recurse(remaining: set[int], placed: list[tuple[int, ...]]):
        if not remaining:
            results.append(PeriodicBatching(n, size, p, tuple(placed)))
            return
        anchor = min(remaining)
        pool = sorted(v for v in remaining if v != anchor and (v - anchor) % p)
        for extra in combinations(pool, size - 1):
            batch = (anchor, *extra)
            residues = {v % p for v in batch}
            if len(residues) != size:
                continue
            cells = orbit(batch)
            flat = [v for cell in cells for v in cell]
            if len(set(flat)) != len(flat) or any(v not in remaining for v in flat):
                continue
            recurse(remaining - set(flat), placed + cells)

    recurse(set(range(1, n + 1)), [])
    return results
