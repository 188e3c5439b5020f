import random
from fractions import Fraction as F

import pytest

from deadline_matching import (ArrivalOrder, BranchingLimitExceeded,
                               OnlineInstance, OnlinePolicy, WeightedGraph,
                               batching, competitive_report,
                               enumerate_branches, exact_expectation,
                               make_instance, naive_greedy, offline_optimum,
                               patient_baseline, postponed_greedy, simulate,
                               write_report_csv)
from deadline_matching.engine import ScriptedBits
from helpers import random_instance


def zero_instance(n=5, d=2):
    return OnlineInstance(WeightedGraph(n, {}), ArrivalOrder.identity(n), d)


class TestSimulate:
    def test_zero_weights_collect_nothing(self):
        for policy in (batching(), patient_baseline(), postponed_greedy()):
            assert simulate(zero_instance(), policy).collected == 0

    def test_batching_on_two_edge_path(self):
        inst = make_instance("basic-tradeoff", y=F(100)).instance
        result = simulate(inst, batching())
        assert result.collected == 1
        assert result.schedule == {(1, 2): 2}

    def test_pg_tightness_branches(self):
        inst = make_instance("pg-tightness", eps=F(1, 10)).instance
        outcomes = {simulate(inst, postponed_greedy(), bits=ScriptedBits((b,))).collected
                    for b in (0, 1)}
        assert outcomes == {F(0), F(1)}  # buyer branch departs unmatched

    def test_determinism_per_seed(self):
        rng = random.Random(21)
        inst = random_instance(rng, 7, 2)
        a = simulate(inst, naive_greedy(), seed=5)
        b = simulate(inst, naive_greedy(), seed=5)
        assert a.trace == b.trace and a.pairs == b.pairs
        c = simulate(inst, naive_greedy(), seed=6)
        assert (a.pairs, a.collected) != (c.pairs, c.collected) or a.trace != c.trace

    def test_finalized_before_earlier_critical(self):
        rng = random.Random(22)
        for _ in range(15):
            inst = random_instance(rng, rng.randint(2, 8), rng.choice([1, 2]))
            for policy in (patient_baseline(), postponed_greedy(), batching()):
                result = simulate(inst, policy, seed=1)
                for (i, j), t in result.schedule.items():
                    assert t <= min(inst.critical_time(i), inst.critical_time(j))

    def test_collected_equals_replayed_matching_weight(self):
        from deadline_matching import matching_weight, validate_matching
        rng = random.Random(28)
        for _ in range(20):
            inst = random_instance(rng, rng.randint(2, 8), rng.choice([1, 2]))
            for policy in (patient_baseline(), batching(), postponed_greedy()):
                result = simulate(inst, policy, seed=2)
                assert validate_matching(inst, result.pairs, result.schedule) is None
                assert result.collected == matching_weight(inst.graph, result.pairs)

    def test_invalid_emission_aborts(self):
        class Cheater(OnlinePolicy):
            def on_arrival(self, v):
                return [(1, 3)] if v == 3 else ()

        inst = make_instance("basic-tradeoff").instance  # (1,3) has no edge
        with pytest.raises(ValueError, match="no edge|window"):
            simulate(inst, Cheater())


class TestInformationHygiene:
    def test_probe_never_sees_the_future(self):
        class Probe(OnlinePolicy):
            def reset(self, view, rng):
                super().reset(view, rng)
                self.seen = set()

            def on_arrival(self, v):
                self.seen.add(v)
                for u in range(1, self.view.n + 1):
                    if u in self.seen:
                        continue
                    with pytest.raises(LookupError):
                        self.view.slot_of(u)
                    with pytest.raises(LookupError):
                        self.view.weight(v, u)
                assert set(self.view.present()) <= self.seen
                return ()

        rng = random.Random(23)
        for _ in range(5):
            simulate(random_instance(rng, 6, 2), Probe())

    def test_departure_time_hidden_until_critical(self):
        inst = OnlineInstance(WeightedGraph(3, {(1, 2): F(1)}),
                              ArrivalOrder.identity(3), 2, departures=(0, 1, 2))
        seen = {}

        class Probe(OnlinePolicy):
            def on_arrival(self, v):
                try:
                    self.view.departure_time(1)
                    seen[("arrival", v)] = True
                except LookupError:
                    seen[("arrival", v)] = False
                return ()

        simulate(inst, Probe())
        assert seen[("arrival", 1)] is True   # arrives and is critical at t=1
        assert seen[("arrival", 2)] is True   # t=2 > 1: departure already public
        assert seen[("arrival", 3)] is True

        inst2 = OnlineInstance(WeightedGraph(3, {(1, 2): F(1)}),
                               ArrivalOrder.identity(3), 2, departures=(2, 2, 2))
        simulate(inst2, Probe())
        assert seen[("arrival", 2)] is False  # t=2 < 3: still unknown


class TestExactExpectation:
    def test_deterministic_policy_equals_simulate(self):
        rng = random.Random(24)
        inst = random_instance(rng, 6, 2)
        value = exact_expectation(inst, patient_baseline())
        assert value == simulate(inst, patient_baseline(), seed=9).collected

    def test_pg_tightness_half(self):
        inst = make_instance("pg-tightness", eps=F(1, 3)).instance
        assert exact_expectation(inst, postponed_greedy()) == F(1, 2)

    def test_naive_greedy_single_edge_quarter(self):
        inst = OnlineInstance(WeightedGraph(2, {(1, 2): F(12)}),
                              ArrivalOrder.identity(2), 1)
        assert exact_expectation(inst, naive_greedy()) == 3  # w/4

    def test_branch_weights_sum_to_one(self):
        rng = random.Random(25)
        inst = random_instance(rng, 6, 2)
        total = sum(F(1, 2 ** len(bits))
                    for bits, _ in enumerate_branches(inst, postponed_greedy()))
        assert total == 1

    def test_flip_cap_refusal(self):
        class CoinEater(OnlinePolicy):
            def on_arrival(self, v):
                for _ in range(25):
                    self.rng.flip()
                return ()

        inst = zero_instance(2, 1)
        with pytest.raises(BranchingLimitExceeded):
            exact_expectation(inst, CoinEater(), max_flips=20)


class TestCompetitiveReport:
    def three_cycle(self, v12, v23, v31):
        return make_instance("random-order-3cycle", v12=v12, v23=v23, v31=v31).instance

    def test_batching_uniform_three_cycle(self):
        v12, v23, v31 = F(1, 7), F(2, 7), F(5)
        rows = competitive_report(
            [("c3", self.three_cycle(v12, v23, v31))],
            [("batching", batching)], arrival_model="uniform")
        row = rows[0]
        assert row.samples_or_exact == "exact"
        assert row.alg_value == (v12 + v23 + v31) / 3
        assert row.off_value == (max(v12, v23) + max(v23, v31) + max(v31, v12)) / 3

    def test_ratio_approaches_half_in_the_limit(self):
        v = F(1, 1000)
        rows = competitive_report([("c3", self.three_cycle(v, v, F(1)))],
                                  [("batching", batching)],
                                  arrival_model="uniform")
        ratio = rows[0].ratio
        assert F(499, 1000) < ratio < F(501, 1000)

    def test_csv_deterministic(self, tmp_path):
        rng = random.Random(26)
        inst = random_instance(rng, 5, 1)
        rows = competitive_report([("r", inst)],
                                  [("naive-greedy", naive_greedy)],
                                  arrival_model="uniform", seeds=8, base_seed=3)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_report_csv(rows, p1)
        rows2 = competitive_report([("r", inst)],
                                   [("naive-greedy", naive_greedy)],
                                   arrival_model="uniform", seeds=8, base_seed=3)
        write_report_csv(rows2, p2)
        assert p1.read_bytes() == p2.read_bytes()
        header = p1.read_text().splitlines()[0]
        assert header == ("instance_id,policy,arrival_model,n,d,"
                          "samples_or_exact,alg_value,off_value,ratio")

    def test_exhaustive_cap(self):
        rng = random.Random(27)
        inst = random_instance(rng, 9, 2)
        with pytest.raises(ValueError, match="n <= 8"):
            competitive_report([("big", inst)], [("patient", patient_baseline)],
                               arrival_model="uniform")
