"""Enumerate task allocations and cluster interdependent robots.

An allocation assigns each atomic instance a team of capable robots.
Robots sharing a constraint subtree must be scheduled together; the
transitive closure of that relation yields the clusters.
"""

from pathlib import Path

from kanoa import (
    AllocatorConfig,
    count_feasible,
    enumerate_allocations,
    expand_mission,
    parse_problem,
    prune_subtrees,
    relation_matrix,
    transitive_closure,
    validate_problem,
)
from kanoa.clustering import cluster_robots, clusters, format_clusters

HERE = Path(__file__).parent
v = validate_problem(
    parse_problem((HERE.parent / "fixtures" / "hospital.kanoa").read_text())
)
tree, pairs = expand_mission(v)
leaves = tree.leaves
subtrees = prune_subtrees(tree)

total = count_feasible(v, leaves)
print(f"feasible allocation space: {total:,} assignments")

allocations = enumerate_allocations(v, leaves, AllocatorConfig(max_allocations=5))
print(f"sampled {len(allocations)} of them\n")

for a in allocations:
    loads = {}
    for team in a.assignments.values():
        for r in team:
            loads[r] = loads.get(r, 0) + 1
    print(f"allocation {a.index}: loads {dict(sorted(loads.items()))}")
    print(f"  move teams: {sorted(a.assignments['at1_move_0'])} and "
          f"{sorted(a.assignments['at1_move_1'])}")
    groups = cluster_robots(a, subtrees)
    print(f"  clusters: {[sorted(g.robots) for g in groups]}")

# the relation matrix and its Warshall closure, spelled out for one allocation
a = allocations[0]
m = relation_matrix(a, subtrees)
closed = transitive_closure(m)
print("\nrelation matrix and clusters for allocation 0:")
print(format_clusters(closed, clusters(closed, a)))
