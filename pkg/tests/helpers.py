"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the production code paths they check:
policy evaluation is plain memoized recursion over one induced chain, and
problem text is assembled by string formatting rather than the printer.
"""

from __future__ import annotations

import random
from itertools import product

from kanoa.allocation import AllocatorConfig, enumerate_allocations
from kanoa.clustering import cluster_robots
from kanoa.mdp import Mdp, build_mdp
from kanoa.parser import parse_problem
from kanoa.permutations import PermutationSet, random_task_permutation
from kanoa.taskgraph import expand_mission, prune_subtrees
from kanoa.validation import validate_problem


def load(text):
    return validate_problem(parse_problem(text))


def single_robot_problem(tt=10, dist=2, duration=3, prob=1.0):
    return load(f"""
world {{ loc base (0,0) loc site ({dist},0) }}
tasks {{ atomic job robots 1 }}
robots {{ robot r1 at base velocity 1 {{ can job time {duration} prob {prob} }} }}
mission {{ task job at site; time {tt} }}
""")


def expanded(v):
    """(leaves, instances-by-id, pairs, subtrees) for a validated problem."""
    tree, pairs = expand_mission(v)
    leaves = tree.leaves
    return leaves, {l.instance_id: l for l in leaves}, pairs, prune_subtrees(tree)


def first_allocation(v, n=1):
    leaves, instances, pairs, subtrees = expanded(v)
    allocation = enumerate_allocations(v, leaves, AllocatorConfig(max_allocations=n))[0]
    clusters = cluster_robots(allocation, subtrees)
    return allocation, clusters, instances, pairs


def build_single_cluster_mdp(v, seed=0, permutation=None):
    allocation, clusters, instances, pairs = first_allocation(v)
    assert len(clusters) == 1
    cluster = clusters[0]
    if permutation is None:
        permutation = random_task_permutation(allocation, cluster, pairs, seed=seed)
    mdp = build_mdp(v, allocation, cluster, permutation, pairs, instances)
    return mdp, allocation, cluster, permutation


# -- policy enumeration oracle ------------------------------------------------


def decision_states(mdp: Mdp, label="done"):
    target = mdp.label_states(label)
    return [
        s
        for s in range(mdp.n_states)
        if s not in target and len(mdp.choices[s]) > 1
    ]


def enumerate_policy_values(mdp: Mdp, reward="idle", label="done", limit=1 << 14):
    """(max reach probability, min expected reward over surely-reaching
    policies or None) by brute force over deterministic memoryless policies.

    Returns None for the reward when no enumerated policy reaches the label
    with probability 1.  Raises if the policy space exceeds ``limit``.
    """
    target = mdp.label_states(label)
    dec = decision_states(mdp, label)
    count = 1
    for s in dec:
        count *= len(mdp.choices[s])
        if count > limit:
            raise ValueError(f"policy space too large: >{limit}")

    best_prob = 0.0
    best_reward = None
    for combo in product(*(range(len(mdp.choices[s])) for s in dec)):
        pick = dict(zip(dec, combo))

        prob_memo: dict[int, float] = {}
        rew_memo: dict[int, float] = {}
        visiting: set[int] = set()

        def chosen(s):
            if s in pick:
                return mdp.choices[s][pick[s]]
            return mdp.choices[s][0] if mdp.choices[s] else None

        def reach(s):
            if s in target:
                return 1.0
            if s in prob_memo:
                return prob_memo[s]
            if s in visiting:  # cycle under this policy: pessimistic zero
                return 0.0
            c = chosen(s)
            if c is None:
                prob_memo[s] = 0.0
                return 0.0
            visiting.add(s)
            val = sum(p * reach(t) for p, t in c.branches)
            visiting.discard(s)
            prob_memo[s] = val
            return val

        def expected(s):
            if s in target:
                return 0.0
            if s in rew_memo:
                return rew_memo[s]
            c = chosen(s)
            val = c.reward(reward) + sum(p * expected(t) for p, t in c.branches)
            rew_memo[s] = val
            return val

        p = reach(mdp.initial)
        best_prob = max(best_prob, p)
        if p >= 1.0 - 1e-9:
            r = expected(mdp.initial)
            if best_reward is None or r < best_reward:
                best_reward = r
    return best_prob, best_reward


# -- random scheduling problems ----------------------------------------------


def random_problem_text(rng: random.Random):
    """Small random mission: 1-3 robots, 2-4 atomic instances, TT <= 20."""
    nrobots = rng.randint(1, 3)
    nlocs = rng.randint(2, 4)
    locs = [f"p{i}" for i in range(nlocs)]
    coords = {}
    taken = set()
    for l in locs:
        while True:
            xy = (rng.randint(0, 6), rng.randint(0, 6))
            if xy not in taken:
                taken.add(xy)
                coords[l] = xy
                break

    ntasks = rng.randint(2, 4)
    types = []
    for i in range(ntasks):
        joint = nrobots >= 2 and rng.random() < 0.3
        types.append((f"t{i}", 2 if joint else 1, rng.randint(1, 3)))

    ordered = ntasks >= 2 and rng.random() < 0.6
    lines = ["world {"]
    lines += [f"  loc {l} ({coords[l][0]}, {coords[l][1]})" for l in locs]
    lines.append("}")
    lines.append("tasks {")
    for name, k, _ in types:
        lines.append(f"  atomic {name} robots {k}")
    if ordered:
        members = ", ".join(t[0] for t in types[:2])
        lines.append(f"  compound seq = ordered {{ {members} }}")
    lines.append("}")
    lines.append("robots {")
    for r in range(nrobots):
        lines.append(
            f"  robot r{r} at {locs[rng.randrange(nlocs)]} velocity "
            f"{rng.choice([1, 1, 2])} {{"
        )
        for name, _, dur in types:
            prob = rng.choice([1, 1, 0.9, 0.8])
            lines.append(f"    can {name} time {dur} prob {prob}")
        lines.append("  }")
    lines.append("}")
    lines.append("mission {")
    if ordered:
        lines.append(f"  task seq at {locs[rng.randrange(nlocs)]}")
        rest = types[2:]
    else:
        rest = types
    for name, _, _ in rest:
        lines.append(f"  task {name} at {locs[rng.randrange(nlocs)]}")
    lines.append(f"  time {rng.randint(8, 20)}")
    lines.append("}")
    return "\n".join(lines)


def random_scheduling_model(rng: random.Random, max_decision=12):
    """A built model for a random mission, or None when it is degenerate
    (unsatisfiable capability needs or an oversized policy space)."""
    try:
        v = load(random_problem_text(rng))
    except Exception:
        return None
    leaves, instances, pairs, subtrees = expanded(v)
    try:
        allocations = enumerate_allocations(
            v, leaves, AllocatorConfig(max_allocations=3)
        )
    except Exception:
        return None
    allocation = allocations[rng.randrange(len(allocations))]
    clusters = cluster_robots(allocation, subtrees)
    cluster = clusters[rng.randrange(len(clusters))]
    permutation = random_task_permutation(
        allocation, cluster, pairs, seed=rng.random()
    )
    mdp = build_mdp(v, allocation, cluster, permutation, pairs, instances)
    if len(decision_states(mdp)) > max_decision:
        return None
    return v, allocation, cluster, permutation, mdp
