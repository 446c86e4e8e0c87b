"""Multi-robot mission planning.

Pipeline: parse a mission file, validate it, expand the mission into
atomic task instances, enumerate capability-feasible allocations, cluster
interdependent robots, synthesize time-feasible schedules by policy
synthesis over explicit MDPs, and search the (allocation, permutation)
space with NSGA-II for the Pareto front over failure probability, idle
time, and travel cost.
"""

from .allocation import (
    Allocation,
    AllocatorConfig,
    count_feasible,
    enumerate_allocations,
)
from .clustering import (
    InterdependenceMatrix,
    RobotCluster,
    cluster_robots,
    clusters,
    relation_matrix,
    robots_of_subtree,
    transitive_closure,
)
from .errors import (
    DslSyntaxError,
    InfeasibleAllocation,
    KanoaError,
    NoFeasibleSolution,
    NonConvergence,
    StateExplosion,
    UndefinedReward,
    ValidationError,
)
from .gantt import emit_gantt, format_gantt_text
from .mdp import Mdp, build_mdp
from .mdp_export import write_mdp_text
from .optimizer import (
    Chromosome,
    GaConfig,
    Objectives,
    ParetoEntry,
    ParetoFront,
    SearchSpace,
    brute_force_front,
    dominates,
    evaluate,
    nsga2_run,
    prepare_search,
)
from .parser import parse_problem
from .permutations import PermutationSet, random_task_permutation, travel_cost
from .plans import Plan, PlanEvent, check_plan, extract_plan
from .printer import pretty_print
from .problem import ProblemSpec, ValidatedProblem
from .reporting import PipelineConfig, RunReport, run
from .scheduling import SchedulingResult, schedule_cluster, success_probability
from .solver import max_reach_probability, min_expected_reward
from .taskgraph import (
    PrecedencePair,
    Subtree,
    TaskInstance,
    TaskInstanceTree,
    expand_mission,
    prune_subtrees,
)
from .validation import validate_problem

__version__ = "0.1.0"
