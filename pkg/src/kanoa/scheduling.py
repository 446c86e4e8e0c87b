"""Per-cluster scheduling: feasibility, objectives, and a concrete plan."""

from __future__ import annotations

from dataclasses import dataclass

from .allocation import Allocation
from .clustering import RobotCluster
from .mdp import DEFAULT_STATE_CAP, Mdp, build_mdp
from .permutations import PermutationSet, travel_cost
from .plans import Plan, extract_plan
from .problem import ValidatedProblem
from .solver import max_reach_probability, min_expected_reward_policy
from .taskgraph import PrecedencePair, TaskInstance


@dataclass(frozen=True)
class SchedulingResult:
    feasible: bool
    p_success: float
    idle: int | None
    travel: int | None
    plan: Plan | None


def success_probability(
    v: ValidatedProblem,
    allocation: Allocation,
    cluster: RobotCluster,
    instances: dict[str, TaskInstance],
) -> float:
    """Product of the capability success probabilities over every execution.

    A joint instance contributes every participant's probability, matching
    the synchronized action's branching in the scheduling model.
    """
    prob = 1.0
    for inst_id in sorted(cluster.instances):
        type_id = instances[inst_id].type_id
        for rid in sorted(allocation.assignments[inst_id]):
            prob *= v.robot(rid).capability_for(type_id).success_prob
    return prob


def schedule_cluster(
    v: ValidatedProblem,
    allocation: Allocation,
    cluster: RobotCluster,
    permutation: PermutationSet,
    pairs: list[PrecedencePair],
    instances: dict[str, TaskInstance],
    time_available: int | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> SchedulingResult:
    """Build and solve one cluster's model.

    Feasible when the done label is reachable (probability exactly 1 on
    these models); the attached plan realizes the minimum-idle policy.
    Travel is permutation-determined and equals the model's travel reward
    along any completing policy.
    """
    tt = v.time_available if time_available is None else time_available
    # waiting never shortens a schedule: a robot whose bare chain of travel
    # and execution already overruns the budget dooms the whole cluster
    for rid in sorted(cluster.robots):
        robot = v.robot(rid)
        clock = 0
        here = robot.initial_loc
        for inst_id in permutation.per_robot[rid]:
            inst = instances[inst_id]
            if inst.robots_needed >= 2:
                duration = max(
                    v.robot(r).capability_for(inst.type_id).required_time
                    for r in allocation.assignments[inst_id]
                )
            else:
                duration = robot.capability_for(inst.type_id).required_time
            clock += v.travel_time(robot, here, inst.location) + duration
            here = inst.location
        if clock > tt:
            return SchedulingResult(False, 0.0, None, None, None)

    mdp = build_mdp(
        v, allocation, cluster, permutation, pairs, instances,
        time_available=tt, state_cap=state_cap,
    )
    if max_reach_probability(mdp, "done") < 1.0:
        return SchedulingResult(False, 0.0, None, None, None)
    idle_value, policy = min_expected_reward_policy(mdp, "idle", "done")
    idle = round(idle_value)
    assert abs(idle_value - idle) < 1e-6
    plan = extract_plan(mdp, policy)
    return SchedulingResult(
        feasible=True,
        p_success=success_probability(v, allocation, cluster, instances),
        idle=idle,
        travel=travel_cost(permutation, v, instances),
        plan=plan,
    )
