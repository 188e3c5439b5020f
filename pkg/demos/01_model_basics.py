"""The online deadline model in five minutes.

Vertices arrive one per period and can only be matched while present: a
vertex arriving at slot s departs at the end of period s + d. Weights are
exact rationals throughout, so every identity printed here is checked with
equality, not tolerance.
"""

from fractions import Fraction as F

from deadline_matching import (ArrivalOrder, OnlineInstance, WeightedGraph,
                               build_online_graph, instance_to_json,
                               matching_weight, offline_optimum,
                               validate_matching)

# A three-vertex path: the planner sees v12 = 1 at period 2 but learns the
# second weight only when vertex 3 arrives, after vertex 1 is gone.
graph = WeightedGraph(3, {(1, 2): F(1), (2, 3): F(7, 2)})
instance = OnlineInstance(graph, ArrivalOrder.identity(3), deadline=1)

masked = build_online_graph(instance)
print("online graph edges (deadline 1):", list(masked.edges()))
print("note: no edge between vertices 1 and 3; their arrivals are 2 periods apart")

opt = offline_optimum(instance)
print("offline optimum:", opt.weight, "via", opt.sorted_pairs())

# validate_matching checks both the edge window and the match time
print()
print("pair (1,2) matched at period 2:",
      validate_matching(instance, {(1, 2)}, {(1, 2): 2}) or "ok")
print("pair (1,3) matched at period 3:",
      validate_matching(instance, {(1, 3)}, {(1, 3): 3}))
print("pair (1,2) matched at period 3:",
      validate_matching(instance, {(1, 2)}, {(1, 2): 3}))

# weights are exact: matching_weight is a plain rational sum
assert matching_weight(graph, {(1, 2)}) == 1

# instances serialize to a small JSON schema with "num/den" weights
print()
print("instance as JSON:")
import json

print(json.dumps(instance_to_json(instance), indent=2))
