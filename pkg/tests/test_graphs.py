import json
import random
from fractions import Fraction as F

import pytest

from deadline_matching import (ArrivalOrder, InstanceFormatError, Matching,
                               OnlineInstance, WeightedGraph,
                               build_online_graph, instance_from_json,
                               instance_to_json, load_instance,
                               matching_weight, save_instance,
                               validate_matching)
from helpers import random_instance


def fig1_instance(y=F(2)):
    graph = WeightedGraph(3, {(1, 2): F(1), (2, 3): y})
    return OnlineInstance(graph, ArrivalOrder.identity(3), 1)


class TestWeightedGraph:
    def test_symmetry_and_default_zero(self):
        g = WeightedGraph(4, {(3, 1): F(5, 2)})
        assert g.weight(1, 3) == F(5, 2)
        assert g.weight(3, 1) == F(5, 2)
        assert g.weight(1, 2) == 0

    def test_rejects_self_loops_and_negative(self):
        with pytest.raises(ValueError):
            WeightedGraph(3, {(2, 2): F(1)})
        with pytest.raises(ValueError):
            WeightedGraph(3, {(1, 2): F(-1)})

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            WeightedGraph(3, {(1, 4): F(1)})


class TestArrivalOrder:
    def test_roundtrip(self):
        order = ArrivalOrder((2, 3, 1))
        assert order.slot_of(1) == 2
        assert order.vertex_at(1) == 3
        assert order.vertex_at(2) == 1

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            ArrivalOrder((1, 1, 3))


class TestBuildOnlineGraph:
    def test_two_edge_path_loses_long_edge(self):
        # d = 1 with identity order: no edge between the first and third arrival
        graph = WeightedGraph(3, {(1, 2): F(1), (2, 3): F(7), (1, 3): F(9)})
        inst = OnlineInstance(graph, ArrivalOrder.identity(3), 1)
        masked = build_online_graph(inst)
        assert masked.weight(1, 2) == 1
        assert masked.weight(2, 3) == 7
        assert masked.weight(1, 3) == 0

    def test_loose_deadline_is_identity(self):
        rng = random.Random(0)
        inst = random_instance(rng, 7, 6)
        assert build_online_graph(inst) == inst.graph

    def test_matches_pairwise_filter(self):
        rng = random.Random(1)
        inst = random_instance(rng, 7, 2)
        masked = build_online_graph(inst)
        slot = inst.order.slot_of
        for i in range(1, 8):
            for j in range(i + 1, 8):
                expected = inst.graph.weight(i, j) if abs(slot(i) - slot(j)) <= 2 else F(0)
                assert masked.weight(i, j) == expected

    def test_idempotent(self):
        rng = random.Random(2)
        inst = random_instance(rng, 6, 2)
        once = build_online_graph(inst)
        twice = build_online_graph(OnlineInstance(once, inst.order, inst.deadline))
        assert once == twice


class TestMatchingWeight:
    def test_empty_matching(self):
        assert matching_weight(WeightedGraph(3, {}), frozenset()) == 0

    def test_single_pair(self):
        inst = fig1_instance()
        assert matching_weight(inst.graph, {(1, 2)}) == 1

    def test_equals_term_by_term_sum(self):
        rng = random.Random(3)
        weights = {(i, j): F(rng.randint(1, 20), rng.choice([1, 2, 4]))
                   for i in range(1, 7) for j in range(i + 1, 7)}
        g = WeightedGraph(6, weights)
        pairs = {(1, 4), (2, 6), (3, 5)}
        assert matching_weight(g, pairs) == sum(weights[p] for p in pairs)

    def test_overlap_rejected(self):
        g = WeightedGraph(4, {(1, 2): F(1), (1, 3): F(1)})
        with pytest.raises(ValueError, match="overlap"):
            matching_weight(g, {(1, 2), (1, 3)})

    def test_matching_invariants(self):
        g = WeightedGraph(4, {(1, 2): F(3)})
        m = Matching.from_pairs(g, [(2, 1)])
        assert m.pairs == frozenset({(1, 2)})
        assert m.weight == 3
        with pytest.raises(ValueError):
            Matching(frozenset({(1, 2), (2, 3)}), F(0))


class TestValidateMatching:
    def test_ok_pair(self):
        inst = fig1_instance()
        assert validate_matching(inst, {(1, 2)}, {(1, 2): 2}) is None

    def test_absent_edge_reported(self):
        inst = fig1_instance()
        for t in (1, 2, 3, 4):
            violation = validate_matching(inst, {(1, 3)}, {(1, 3): t})
            assert violation is not None
            assert any("edge absent" in r for r in violation.reasons)

    def test_departure_reported(self):
        graph = WeightedGraph(4, {(1, 4): F(1)})
        inst = OnlineInstance(graph, ArrivalOrder.identity(4), 2)
        violation = validate_matching(inst, {(1, 4)}, {(1, 4): 4})
        assert violation is not None
        assert any("departed at time 3" in r for r in violation.reasons)

    def test_before_arrival_reported(self):
        inst = fig1_instance()
        violation = validate_matching(inst, {(2, 3)}, {(2, 3): 2})
        assert violation is not None
        assert any("before both arrived" in r for r in violation.reasons)


class TestInstanceFiles:
    def test_round_trip_bit_exact(self, tmp_path):
        graph = WeightedGraph(4, {(1, 2): F(355, 113), (3, 4): F(10**12, 7)})
        inst = OnlineInstance(graph, ArrivalOrder((2, 1, 4, 3)), 2,
                              departures=(1, 0, 2, 2))
        path = tmp_path / "inst.json"
        save_instance(inst, path)
        loaded = load_instance(path)
        assert loaded.graph.weight(1, 2) == F(355, 113)
        assert loaded.graph.weight(3, 4) == F(10**12, 7)
        assert loaded.order == inst.order
        assert loaded.departures == inst.departures

    def test_unknown_fields_rejected(self):
        data = {"n": 2, "d": 1, "edges": [], "color": "blue"}
        with pytest.raises(InstanceFormatError, match="unknown"):
            instance_from_json(data)

    def test_integer_and_string_weights(self):
        data = {"n": 2, "d": 1, "edges": [[1, 2, "3/7"]]}
        inst = instance_from_json(data)
        assert inst.graph.weight(1, 2) == F(3, 7)
        data["edges"] = [[1, 2, 4]]
        assert instance_from_json(data).graph.weight(1, 2) == 4

    def test_defaults(self):
        inst = instance_from_json({"n": 3, "d": 1, "edges": []})
        assert inst.order == ArrivalOrder.identity(3)
        assert inst.departures is None

    def test_departure_model_field(self):
        data = {"n": 2, "d": 1, "edges": [],
                "departure_model": {"kind": "geometric", "delta": "1/2"}}
        inst = instance_from_json(data)
        assert inst.departure_model.kind == "geometric"
        assert inst.departure_model.delta == F(1, 2)
        again = instance_from_json(instance_to_json(inst))
        assert again.departure_model == inst.departure_model

    def test_json_is_plain_text(self):
        inst = fig1_instance(F(1, 3))
        text = json.dumps(instance_to_json(inst))
        assert "1/3" in text
