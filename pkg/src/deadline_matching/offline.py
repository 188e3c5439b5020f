"""Exact offline benchmarks: optimal matchings and bipartite auction duals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import (Matching, OnlineInstance, Pair, WeightedGraph,
                     build_online_graph, ordered_pair)

EXACT_MATCHING_CAP = 24  # 2**n subset states; larger inputs are refused


class SizeLimitError(ValueError):
    """Input too large for the exact-by-enumeration guarantee."""


def max_weight_matching_value(graph: WeightedGraph, vertices=None) -> Fraction:
    """Optimal matching value on an induced subset via DP over vertex subsets."""
    verts = sorted(vertices) if vertices is not None else list(graph.vertices())
    k = len(verts)
    if k > EXACT_MATCHING_CAP:
        raise SizeLimitError(f"{k} vertices exceed the exact cap of {EXACT_MATCHING_CAP}")
    index = {v: i for i, v in enumerate(verts)}
    adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(k)]
    for (i, j), w in graph.weights.items():
        if i in index and j in index:
            a, b = index[i], index[j]
            adj[a].append((b, w))
            adj[b].append((a, w))
    zero = Fraction(0)
    dp = [zero] * (1 << k)
    for mask in range(1, 1 << k):
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        best = dp[rest]  # leave `low` unmatched
        for other, w in adj[low]:
            bit = 1 << other
            if mask & bit:
                cand = w + dp[rest ^ bit]
                if cand > best:
                    best = cand
        dp[mask] = best
    return dp[(1 << k) - 1]


def max_weight_matching_exact(graph: WeightedGraph) -> Matching:
    """Maximum-weight matching, exact, with a deterministic tie-break.

    Among all optimal matchings returns the one whose sorted pair list is
    lexicographically smallest. Refuses graphs beyond the subset-DP cap
    rather than silently approximating.
    """
    verts = list(graph.vertices())
    k = len(verts)
    if k > EXACT_MATCHING_CAP:
        raise SizeLimitError(f"n={k} exceeds the exact cap of {EXACT_MATCHING_CAP}")
    index = {v: i for i, v in enumerate(verts)}
    zero = Fraction(0)
    dp = [zero] * (1 << k)
    adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(k)]
    for (i, j), w in graph.weights.items():
        a, b = index[i], index[j]
        adj[a].append((b, w))
        adj[b].append((a, w))
    for mask in range(1, 1 << k):
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        best = dp[rest]
        for other, w in adj[low]:
            bit = 1 << other
            if mask & bit:
                cand = w + dp[rest ^ bit]
                if cand > best:
                    best = cand
        dp[mask] = best
    # Reconstruct lexicographically smallest optimum: resolve the lowest
    # vertex first, preferring the smallest partner that preserves optimality,
    # then leaving it unmatched.
    pairs: list[Pair] = []
    mask = (1 << k) - 1
    while mask:
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        chosen = None
        for other, w in sorted(adj[low]):
            bit = 1 << other
            if (mask & bit) and w + dp[rest ^ bit] == dp[mask]:
                chosen = (other, bit)
                break
        if chosen is not None:
            other, bit = chosen
            pairs.append(ordered_pair(verts[low], verts[other]))
            mask = rest ^ bit
        else:
            mask = rest
    return Matching.from_pairs(graph, pairs)


def offline_optimum(instance: OnlineInstance) -> Matching:
    """Maximum-weight matching of the deadline-masked online graph."""
    return max_weight_matching_exact(build_online_graph(instance))


def realized_online_graph(instance: OnlineInstance,
                          departures: tuple[int, ...]) -> WeightedGraph:
    """Keep edge (i, j) iff the later arrival comes while the earlier vertex
    is still present under the realized departure offsets.

    The deadline still bounds which edges exist at all; realized departures
    can only shorten a window, never stretch it past the deadline graph.
    """
    slot = instance.order.slot_of
    kept = {}
    for (i, j), w in instance.graph.weights.items():
        earlier, later = (i, j) if slot(i) <= slot(j) else (j, i)
        window = min(departures[earlier - 1], instance.deadline)
        if slot(later) <= slot(earlier) + window:
            kept[(i, j)] = w
    return WeightedGraph(instance.n, kept)


def realized_offline_optimum(instance: OnlineInstance,
                             departures: tuple[int, ...]) -> Matching:
    """The offline benchmark under realized departures: optimal matching over
    pairs whose presence windows overlap."""
    return max_weight_matching_exact(realized_online_graph(instance, departures))


# ---------------------------------------------------------------------------
# Fast exact evaluators for permutation sweeps. Both are cross-checked against
# max_weight_matching_value in the tests; they exist because summing matchings
# over all n! arrival orders with the subset DP would be needlessly slow.

def arrival_window_matching_value(graph: WeightedGraph, slots: tuple[int, ...],
                                  d: int) -> Fraction:
    """m(G masked to |slot(i) - slot(j)| <= d), by a DP along the arrival order.

    State: availability bits of the previous d arrivals (an available vertex
    may still match someone arriving within its window).
    """
    n = graph.n
    inverse = [0] * n
    for v, s in enumerate(slots, start=1):
        inverse[s - 1] = v
    zero = Fraction(0)
    states: dict[tuple[int, ...], Fraction] = {(): zero}
    window: list[int] = []  # vertices at slots t-d .. t-1
    for t in range(1, n + 1):
        v = inverse[t - 1]
        nxt: dict[tuple[int, ...], Fraction] = {}

        def push(state, value):
            cur = nxt.get(state)
            if cur is None or value > cur:
                nxt[state] = value

        for state, value in states.items():
            # leave v available
            push(state + (1,), value)
            # or match v to an available window vertex
            for pos, avail in enumerate(state):
                if not avail:
                    continue
                w = graph.weight(window[pos], v)
                if w == 0:
                    continue
                used = state[:pos] + (0,) + state[pos + 1:] + (0,)
                push(used, value + w)
        if len(window) == d:
            # the oldest window vertex falls out of range
            states = {}
            for state, value in nxt.items():
                key = state[1:]
                cur = states.get(key)
                if cur is None or value > cur:
                    states[key] = value
            window = window[1:] + [v]
        else:
            states = nxt
            window = window + [v]
    return max(states.values())


def batched_matching_value(graph: WeightedGraph, slots: tuple[int, ...],
                           d: int) -> Fraction:
    """Sum of optimal matchings inside each consecutive (d+1)-slot batch."""
    n = graph.n
    inverse = [0] * n
    for v, s in enumerate(slots, start=1):
        inverse[s - 1] = v
    total = Fraction(0)
    weight = graph.weight
    for start in range(0, n, d + 1):
        batch = inverse[start:start + d + 1]
        if len(batch) < 2:
            continue
        if len(batch) == 2:
            total += weight(batch[0], batch[1])
        elif len(batch) == 3:
            a, b, c = batch
            total += max(weight(a, b), weight(a, c), weight(b, c))
        else:
            total += max_weight_matching_value(graph, batch)
    return total


# ---------------------------------------------------------------------------
# Offline dual feasibility

@dataclass(frozen=True)
class DualReport:
    feasible: bool
    total: Fraction
    weak_duality_ok: bool
    violations: tuple[tuple[Pair, Fraction], ...]  # (edge, positive slack deficit)

    def __str__(self):
        if self.feasible:
            return f"feasible, sum = {self.total}"
        lines = ", ".join(f"{e}: short by {s}" for e, s in self.violations)
        return f"infeasible on {len(self.violations)} edge(s): {lines}"


def verify_offline_dual(instance: OnlineInstance, lambdas: dict[int, Fraction],
                        claimed_primal: Fraction | None = None) -> DualReport:
    """Check v_ij <= lambda_i + lambda_j on every edge of the online graph.

    Also reports the dual objective and, when a primal value is claimed,
    whether weak duality (sum >= claimed) holds.
    """
    lam = {v: Fraction(lambdas.get(v, 0)) for v in instance.graph.vertices()}
    if any(x < 0 for x in lam.values()):
        bad = [v for v, x in lam.items() if x < 0]
        raise ValueError(f"dual values must be nonnegative; negative at {bad}")
    masked = build_online_graph(instance)
    violations = []
    for i, j, w in masked.edges():
        slack = lam[i] + lam[j] - w
        if slack < 0:
            violations.append(((i, j), -slack))
    total = sum(lam.values(), Fraction(0))
    weak = True if claimed_primal is None else total >= claimed_primal
    return DualReport(not violations, total, weak, tuple(violations))


# ---------------------------------------------------------------------------
# Incremental maximum-weight bipartite matching with exact dual prices.
# Buyers are inserted one at a time; each insertion either augments along
# tight edges or raises prices along an alternating tree until a zero-margin
# buyer is reached. Prices only rise and margins only fall, and the sum of
# prices and margins over pre-existing vertices is conserved per insertion.

class AuctionMarket:
    def __init__(self):
        self.prices: dict[int, Fraction] = {}
        self.margins: dict[int, Fraction] = {}
        self.edges: dict[Pair, Fraction] = {}  # (seller, buyer) -> weight
        self.match_sb: dict[int, int] = {}
        self.match_bs: dict[int, int] = {}

    # -- construction -------------------------------------------------------
    def add_seller(self, s: int, price: Fraction = Fraction(0)):
        if s in self.prices or s in self.margins:
            raise ValueError(f"vertex {s} already in the market")
        if price < 0:
            raise ValueError("prices are nonnegative")
        self.prices[s] = Fraction(price)

    def add_buyer(self, b: int, edges: dict[int, Fraction]) -> Fraction:
        """Insert a buyer with its seller edges and rebalance; returns q_b.

        The initial margin is max(0, max_s v_sb - p_s): a buyer with no
        profitable seller stays unmatched at margin zero, which keeps the
        duals feasible and complementary slackness intact.
        """
        if b in self.margins or b in self.prices:
            raise ValueError(f"vertex {b} already in the market")
        clean: dict[int, Fraction] = {}
        for s, w in edges.items():
            if s not in self.prices:
                raise ValueError(f"buyer {b} references unknown seller {s}")
            w = Fraction(w)
            if w < 0:
                raise ValueError("weights are nonnegative")
            if w > 0:
                clean[s] = w
                self.edges[(s, b)] = w
        margin = max((w - self.prices[s] for s, w in clean.items()), default=Fraction(0))
        self.margins[b] = max(Fraction(0), margin)
        if self.margins[b] > 0:
            self._rebalance(b)
        return self.margins[b]

    # -- removal (departures and finalized pairs) ---------------------------
    def remove_pair(self, s: int, b: int):
        if self.match_sb.get(s) != b:
            raise ValueError(f"({s}, {b}) is not a tentative pair")
        del self.match_sb[s]
        del self.match_bs[b]
        self._drop_seller(s)
        self._drop_buyer(b)

    def remove_seller(self, s: int):
        if s in self.match_sb:
            raise ValueError(f"seller {s} departs while matched")
        self._drop_seller(s)

    def remove_buyer(self, b: int):
        if b in self.match_bs:
            raise ValueError(f"buyer {b} departs while matched")
        self._drop_buyer(b)

    def _drop_seller(self, s: int):
        del self.prices[s]
        for pair in [p for p in self.edges if p[0] == s]:
            del self.edges[pair]

    def _drop_buyer(self, b: int):
        del self.margins[b]
        for pair in [p for p in self.edges if p[1] == b]:
            del self.edges[pair]

    # -- queries -------------------------------------------------------------
    def matched_buyer(self, s: int) -> int | None:
        return self.match_sb.get(s)

    def matching_value(self) -> Fraction:
        return sum((self.edges[(s, b)] for s, b in self.match_sb.items()), Fraction(0))

    def dual_total(self) -> Fraction:
        return sum(self.prices.values(), Fraction(0)) + sum(self.margins.values(), Fraction(0))

    def check_optimal(self):
        """Assert dual feasibility and complementary slackness (CS1-CS3)."""
        for (s, b), w in self.edges.items():
            if self.prices[s] + self.margins[b] < w:
                raise AssertionError(f"dual infeasible on ({s}, {b})")
        for s, b in self.match_sb.items():
            if self.prices[s] + self.margins[b] != self.edges.get((s, b)):
                raise AssertionError(f"matched edge ({s}, {b}) not tight")
        for s, p in self.prices.items():
            if s not in self.match_sb and p != 0:
                raise AssertionError(f"unmatched seller {s} has price {p}")
        for b, q in self.margins.items():
            if b not in self.match_bs and q != 0:
                raise AssertionError(f"unmatched buyer {b} has margin {q}")

    # -- the insertion procedure ---------------------------------------------
    def _tight(self, s: int, b: int) -> bool:
        w = self.edges.get((s, b))
        return w is not None and self.prices[s] + self.margins[b] == w

    def _rebalance(self, b_star: int):
        while True:
            blue = [b_star]
            blue_set = {b_star}
            red: list[int] = []
            red_set: set[int] = set()
            parent: dict[int, int] = {}
            frontier = [b_star]
            augment_from: int | None = None
            while frontier and augment_from is None:
                nxt = []
                for b in frontier:
                    for s in sorted(self.prices):
                        if s in red_set or not self._tight(s, b):
                            continue
                        if self.match_bs.get(b) == s:
                            continue
                        parent[s] = b
                        if s not in self.match_sb:
                            augment_from = s
                            break
                        red.append(s)
                        red_set.add(s)
                        mate = self.match_sb[s]
                        parent[mate] = s
                        blue.append(mate)
                        blue_set.add(mate)
                        nxt.append(mate)
                    if augment_from is not None:
                        break
                frontier = nxt
            if augment_from is not None:
                self._flip(augment_from, parent)
                return
            delta1 = min(self.margins[b] for b in blue)
            if delta1 == 0:
                # free a zero-margin buyer instead of augmenting
                b0 = min(b for b in blue if self.margins[b] == 0)
                self._flip(b0, parent)
                return
            candidates = [
                self.prices[s] + self.margins[b] - w
                for (s, b), w in self.edges.items()
                if b in blue_set and s not in red_set and self.match_bs.get(b) != s
            ]
            delta2 = min((c for c in candidates if c > 0), default=None)
            delta = delta1 if delta2 is None else min(delta1, delta2)
            for s in red:
                self.prices[s] += delta
            for b in blue:
                self.margins[b] -= delta
            # loop: either a new tight edge appeared (delta = delta2) or some
            # blue buyer reached margin zero (delta = delta1) and terminates

    def _flip(self, end, parent: dict[int, int]):
        """Alternate matched/unmatched along the tree path ending at `end`.

        `end` is an unmatched seller (augmenting path: the new buyer becomes
        matched) or a zero-margin buyer (its seller is handed up the path and
        it becomes unmatched).
        """
        node = end
        if node in self.margins:  # ends at a buyer: detach its seller first
            s = self.match_bs.pop(node, None)
            if s is not None:
                del self.match_sb[s]
            node = parent.get(node)
            if node is None:
                return  # the new buyer itself hit margin zero; stays unmatched
        while node is not None:
            s = node
            b = parent[s]
            old = self.match_bs.get(b)
            if old is not None:
                del self.match_sb[old]
            self.match_sb[s] = b
            self.match_bs[b] = s
            node = parent.get(b)


def hungarian_bipartite(sellers, buyers, weights: dict[Pair, Fraction],
                        prices: dict[int, Fraction] | None = None,
                        margins: dict[int, Fraction] | None = None,
                        matching: dict[int, int] | None = None):
    """Maximum-weight bipartite matching with optimal duals, exact.

    Warm-startable: pass prices/margins/matching from a previous solve over a
    subset of the buyers; they must be feasible and complementary for the
    current subgraph or the call is rejected. Remaining buyers are inserted
    one at a time (the incremental procedure DDA uses). Returns
    (Matching, prices, margins).
    """
    sellers = list(sellers)
    buyers = list(buyers)
    weights = {(s, b): Fraction(w) for (s, b), w in weights.items()
               if s in set(sellers) and b in set(buyers)}
    market = AuctionMarket()
    prices = dict(prices or {})
    margins = dict(margins or {})
    matching = dict(matching or {})
    for s in sellers:
        market.add_seller(s, prices.get(s, Fraction(0)))
    warm = [b for b in buyers if b in margins]
    cold = [b for b in buyers if b not in margins]
    for b in warm:
        q = Fraction(margins[b])
        if q < 0:
            raise ValueError("warm-start margins must be nonnegative")
        market.margins[b] = q
        for s in sellers:
            w = Fraction(weights.get((s, b), 0))
            if w > 0:
                market.edges[(s, b)] = w
                if market.prices[s] + q < w:
                    raise ValueError(f"warm-start duals infeasible on ({s}, {b})")
    for s, b in matching.items():
        market.match_sb[s] = b
        market.match_bs[b] = s
    try:
        market.check_optimal()
    except AssertionError as exc:
        raise ValueError(f"warm start rejected: {exc}") from exc
    for b in cold:
        market.add_buyer(b, {s: w for (s, bb), w in weights.items() if bb == b})
    market.check_optimal()
    graph_pairs = [(s, b) for s, b in market.match_sb.items()]
    n = max([*sellers, *buyers], default=0)
    graph = WeightedGraph(n, {ordered_pair(s, b): w for (s, b), w in weights.items() if w > 0})
    return (Matching.from_pairs(graph, graph_pairs),
            dict(market.prices), dict(market.margins))
