import itertools
import random
from fractions import Fraction as F

import pytest

from deadline_matching import (ArrivalOrder, AuctionMarket, OnlineInstance,
                               SizeLimitError, WeightedGraph,
                               arrival_window_matching_value,
                               batched_matching_value, build_online_graph,
                               hungarian_bipartite, make_instance,
                               matching_weight, max_weight_matching_exact,
                               max_weight_matching_value, multiply,
                               offline_optimum, path_power,
                               realized_offline_optimum, verify_offline_dual)
from helpers import random_complete_graph, random_instance


def all_matchings(vertices):
    """Every matching (as a frozenset of pairs) on the vertex list."""
    vertices = list(vertices)
    if not vertices:
        yield frozenset()
        return
    v, rest = vertices[0], vertices[1:]
    for m in all_matchings(rest):
        yield m
    for i, u in enumerate(rest):
        others = rest[:i] + rest[i + 1:]
        for m in all_matchings(others):
            yield m | {(v, u) if v < u else (u, v)}


def brute_force_optimum(g: WeightedGraph) -> F:
    return max(matching_weight(g, m) for m in all_matchings(list(g.vertices())))


class TestMaxWeightMatching:
    def test_dominant_edge_triangle(self):
        eps = F(1, 100)
        g = WeightedGraph(3, {(1, 2): eps, (2, 3): eps, (1, 3): F(1)})
        m = max_weight_matching_exact(g)
        assert m.sorted_pairs() == ((1, 3),)
        assert m.weight == 1

    def test_tightness_instance_optimum(self):
        named = make_instance("pg-tightness", eps=F(1, 10))
        m = offline_optimum(named.instance)
        assert m.weight == F(2) - F(1, 10)
        assert m.pairs == frozenset({(1, 3), (2, 4)})

    def test_matches_brute_force_on_random_k8(self):
        rng = random.Random(11)
        for _ in range(8):
            g = random_complete_graph(rng, 8)
            assert max_weight_matching_exact(g).weight == brute_force_optimum(g)

    def test_lexicographic_tie_break(self):
        g = WeightedGraph(4, {(1, 2): F(1), (3, 4): F(1), (1, 3): F(1), (2, 4): F(1)})
        assert max_weight_matching_exact(g).sorted_pairs() == ((1, 2), (3, 4))

    def test_size_cap_refusal(self):
        g = WeightedGraph(25, {(1, 2): F(1)})
        with pytest.raises(SizeLimitError):
            max_weight_matching_exact(g)

    def test_never_below_any_valid_matching(self):
        rng = random.Random(12)
        g = random_complete_graph(rng, 7)
        best = max_weight_matching_exact(g).weight
        for m in itertools.islice(all_matchings(list(range(1, 8))), 200):
            assert best >= matching_weight(g, m)


class TestOfflineOptimum:
    def test_two_edge_path_takes_max(self):
        named = make_instance("basic-tradeoff", y=F(2))
        m = offline_optimum(named.instance)
        assert m.weight == 2
        assert m.pairs == frozenset({(2, 3)})

    def test_deadline_zero_collects_nothing(self):
        rng = random.Random(13)
        inst = random_instance(rng, 5, 0)
        assert offline_optimum(inst).weight == 0

    def test_loose_deadline_equals_unconstrained(self):
        rng = random.Random(14)
        g = random_complete_graph(rng, 6)
        inst = OnlineInstance(g, ArrivalOrder.identity(6), 5)
        assert offline_optimum(inst).weight == max_weight_matching_exact(g).weight


class TestWindowEvaluators:
    """The sweep evaluators must agree with the subset DP on masked graphs."""

    def test_arrival_window_dp_cross_check(self):
        rng = random.Random(15)
        for _ in range(25):
            n, d = rng.randint(2, 7), rng.choice([1, 2, 3])
            g = random_complete_graph(rng, n)
            slots = list(range(1, n + 1))
            rng.shuffle(slots)
            masked = multiply(g, path_power(slots, n, d))
            assert (arrival_window_matching_value(g, tuple(slots), d)
                    == max_weight_matching_value(masked))

    def test_batched_value_cross_check(self):
        from deadline_matching import batched_graph
        rng = random.Random(16)
        for _ in range(25):
            n, d = rng.randint(2, 8), rng.choice([1, 2, 3])
            g = random_complete_graph(rng, n)
            slots = list(range(1, n + 1))
            rng.shuffle(slots)
            masked = multiply(g, batched_graph(slots, n, d))
            assert (batched_matching_value(g, tuple(slots), d)
                    == max_weight_matching_value(masked))


class TestRealizedOptimum:
    def test_short_departures_prune_edges(self):
        g = WeightedGraph(3, {(1, 2): F(5), (2, 3): F(4)})
        inst = OnlineInstance(g, ArrivalOrder.identity(3), 2)
        assert realized_offline_optimum(inst, (0, 0, 0)).weight == 0
        assert realized_offline_optimum(inst, (1, 0, 0)).weight == 5
        assert realized_offline_optimum(inst, (2, 2, 2)).weight == 5


class TestOfflineDual:
    def test_two_edge_path_dual(self):
        named = make_instance("basic-tradeoff", y=F(0))
        report = verify_offline_dual(named.instance, {1: F(0), 2: F(1), 3: F(0)},
                                     claimed_primal=F(1))
        assert report.feasible
        assert report.total == 1
        assert report.weak_duality_ok

    def test_zero_weights(self):
        inst = OnlineInstance(WeightedGraph(3, {}), ArrivalOrder.identity(3), 1)
        report = verify_offline_dual(inst, {})
        assert report.feasible and report.total == 0

    def test_violations_listed_with_slack(self):
        named = make_instance("basic-tradeoff", y=F(3))
        report = verify_offline_dual(named.instance, {1: F(0), 2: F(1), 3: F(0)})
        assert not report.feasible
        assert report.violations == (((2, 3), F(2)),)

    def test_negative_duals_rejected(self):
        named = make_instance("basic-tradeoff")
        with pytest.raises(ValueError):
            verify_offline_dual(named.instance, {1: F(-1)})


class TestHungarian:
    def brute(self, sellers, buyers, w):
        best = F(0)
        for r in range(min(len(sellers), len(buyers)) + 1):
            for bs in itertools.combinations(buyers, r):
                for ss in itertools.permutations(sellers, r):
                    best = max(best, sum((w[(s, b)] for s, b in zip(ss, bs)), F(0)))
        return best

    def test_single_edge_complementary_slackness(self):
        m, p, q = hungarian_bipartite([1], [2], {(1, 2): F(5)})
        assert m.weight == 5
        assert p[1] + q[2] == 5
        assert p[1] >= 0 and q[2] >= 0

    def test_two_sellers_one_buyer(self):
        w = {(1, 3): F(3, 5), (2, 3): F(1)}
        m, p, q = hungarian_bipartite([1, 2], [3], w)
        assert m.weight == 1
        assert m.pairs == frozenset({(2, 3)})
        assert p[1] == 0  # unmatched seller keeps price zero
        assert p[2] + q[3] == 1
        assert p[1] + q[3] >= F(3, 5)  # dual feasibility on the losing edge

    def test_random_5x5_against_brute_force(self):
        rng = random.Random(17)
        for _ in range(20):
            sellers, buyers = [1, 2, 3, 4, 5], [6, 7, 8, 9, 10]
            w = {(s, b): F(rng.randint(0, 12), rng.choice([1, 2, 3]))
                 for s in sellers for b in buyers}
            m, p, q = hungarian_bipartite(sellers, buyers, w)
            best = self.brute(sellers, buyers, w)
            assert m.weight == best
            # strong duality, exactly
            assert sum(p.values(), F(0)) + sum(q.values(), F(0)) == best

    def test_warm_start_equals_scratch(self):
        rng = random.Random(18)
        for _ in range(15):
            ns, nb = rng.randint(1, 4), rng.randint(2, 5)
            sellers = list(range(1, ns + 1))
            buyers = list(range(ns + 1, ns + nb + 1))
            w = {(s, b): F(rng.randint(0, 9), rng.choice([1, 2]))
                 for s in sellers for b in buyers}
            m1, p1, q1 = hungarian_bipartite(sellers, buyers[:-1], w)
            match1 = {}
            for a, b in m1.pairs:
                s, bb = (a, b) if a in sellers else (b, a)
                match1[s] = bb
            m2, _, _ = hungarian_bipartite(sellers, buyers, w,
                                           prices=p1, margins=q1, matching=match1)
            assert m2.weight == self.brute(sellers, buyers, w)

    def test_infeasible_warm_start_rejected(self):
        w = {(1, 2): F(5)}
        with pytest.raises(ValueError, match="warm start|infeasible"):
            hungarian_bipartite([1], [2], w, prices={1: F(0)}, margins={2: F(1)})

    def test_insertion_conserves_preexisting_dual_mass(self):
        rng = random.Random(19)
        for _ in range(20):
            ns, nb = rng.randint(1, 5), rng.randint(1, 6)
            market = AuctionMarket()
            for s in range(1, ns + 1):
                market.add_seller(s)
            for b in range(1, nb + 1):
                buyer = ns + b
                edges = {s: F(rng.randint(0, 10), rng.choice([1, 2]))
                         for s in range(1, ns + 1)}
                before = market.dual_total()
                market.add_buyer(buyer, edges)
                after = market.dual_total() - market.margins[buyer]
                assert before == after
                market.check_optimal()
