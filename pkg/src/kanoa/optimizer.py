"""NSGA-II search over (allocation, permutation) chromosomes.

A chromosome is a pair of small indices into pools prepared up front: the
allocation list and, per allocation, a pool of whole-allocation task
permutations.  Evaluation solves one scheduling model per robot cluster
and aggregates the three objectives; infeasible chromosomes rank below
every feasible one (constrained domination).  Everything is driven by a
single seed and fully reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .allocation import Allocation, AllocatorConfig, enumerate_allocations
from .clustering import RobotCluster, cluster_robots
from .errors import NoFeasibleSolution, StateExplosion
from .mdp import DEFAULT_STATE_CAP
from .permutations import PermutationSet, random_task_permutation
from .plans import Plan
from .problem import ValidatedProblem
from .scheduling import SchedulingResult, schedule_cluster
from .taskgraph import (
    PrecedencePair,
    TaskInstance,
    expand_mission,
    prune_subtrees,
)


@dataclass(frozen=True)
class Chromosome:
    alloc_idx: int
    perm_idx: int


@dataclass(frozen=True)
class Objectives:
    p_fail: float
    idle: int
    travel: int

    def as_tuple(self) -> tuple[float, int, int]:
        return (self.p_fail, self.idle, self.travel)


def dominates(a: Objectives, b: Objectives) -> bool:
    """Pareto dominance: no worse everywhere, strictly better somewhere."""
    at, bt = a.as_tuple(), b.as_tuple()
    return all(x <= y for x, y in zip(at, bt)) and at != bt


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 50
    generations: int = 5
    permutations_per_allocation: int = 20
    crossover_rate: float = 0.9
    mutation_rate: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError("population_size must be even and at least 4")
        for rate in (self.crossover_rate, self.mutation_rate):
            if not 0.0 <= rate <= 1.0:
                raise ValueError("rates must lie in [0, 1]")


@dataclass
class EvalResult:
    feasible: bool
    objectives: Objectives | None = None
    plan: Plan | None = None
    cluster_results: list[SchedulingResult] = field(default_factory=list)
    diagnostic: str | None = None


@dataclass
class SearchSpace:
    """Pools and cached structure shared by every evaluation."""

    v: ValidatedProblem
    instances: dict[str, TaskInstance]
    pairs: list[PrecedencePair]
    allocations: list[Allocation]
    clusters: list[list[RobotCluster]]
    permutations: list[list[PermutationSet]]
    time_available: int
    state_cap: int = DEFAULT_STATE_CAP

    @property
    def size(self) -> int:
        return len(self.allocations) * len(self.permutations[0]) if self.allocations else 0

    def chromosomes(self):
        for a in range(len(self.allocations)):
            for p in range(len(self.permutations[a])):
                yield Chromosome(a, p)


def prepare_search(
    v: ValidatedProblem,
    allocator_cfg: AllocatorConfig,
    ga_cfg: GaConfig,
    state_cap: int = DEFAULT_STATE_CAP,
) -> SearchSpace:
    """Expand the mission, enumerate allocations, cluster robots, and draw
    the per-allocation permutation pools."""
    tree, pairs = expand_mission(v)
    leaves = tree.leaves
    instances = {inst.instance_id: inst for inst in leaves}
    subtrees = prune_subtrees(tree)
    allocations = enumerate_allocations(v, leaves, allocator_cfg)

    clusters = [cluster_robots(a, subtrees) for a in allocations]
    permutations: list[list[PermutationSet]] = []
    for a_idx, allocation in enumerate(allocations):
        whole = RobotCluster(
            robots=allocation.used_robots,
            instances=frozenset(allocation.assignments),
        )
        pool = [
            random_task_permutation(
                allocation, whole, pairs, seed=f"{ga_cfg.seed}:{a_idx}:{p_idx}"
            )
            for p_idx in range(ga_cfg.permutations_per_allocation)
        ]
        permutations.append(pool)

    return SearchSpace(
        v=v,
        instances=instances,
        pairs=pairs,
        allocations=allocations,
        clusters=clusters,
        permutations=permutations,
        time_available=v.time_available,
        state_cap=state_cap,
    )


def evaluate(
    space: SearchSpace,
    ch: Chromosome,
    cache: dict[tuple[int, int], EvalResult],
) -> EvalResult:
    """Solve every cluster of the chromosome's allocation; memoized.

    Objectives aggregate across clusters: failure probability composes
    multiplicatively, idle and travel add.  Any infeasible cluster makes
    the chromosome infeasible; a state-space blowup is reported as
    infeasibility with a diagnostic rather than an error.
    """
    key = (ch.alloc_idx, ch.perm_idx)
    hit = cache.get(key)
    if hit is not None:
        return hit

    allocation = space.allocations[ch.alloc_idx]
    permutation = space.permutations[ch.alloc_idx][ch.perm_idx]
    result = EvalResult(feasible=True)
    p_success = 1.0
    idle = 0
    travel = 0
    timelines: dict[str, tuple] = {}
    try:
        for cluster in space.clusters[ch.alloc_idx]:
            restricted = PermutationSet(
                {r: permutation.per_robot[r] for r in sorted(cluster.robots)}
            )
            sched = schedule_cluster(
                space.v,
                allocation,
                cluster,
                restricted,
                space.pairs,
                space.instances,
                time_available=space.time_available,
                state_cap=space.state_cap,
            )
            result.cluster_results.append(sched)
            if not sched.feasible:
                result.feasible = False
                break
            p_success *= sched.p_success
            idle += sched.idle
            travel += sched.travel
            timelines.update(sched.plan.timelines)
    except StateExplosion as exc:
        result.feasible = False
        result.diagnostic = str(exc)

    if result.feasible:
        result.objectives = Objectives(1.0 - p_success, idle, travel)
        result.plan = Plan(timelines)
    cache[key] = result
    return result


# -- NSGA-II machinery -------------------------------------------------------


def _constrained_dominates(a: EvalResult, b: EvalResult) -> bool:
    if a.feasible and not b.feasible:
        return True
    if not a.feasible:
        return False
    return dominates(a.objectives, b.objectives)


def fast_nondominated_sort(results: list[EvalResult]) -> list[list[int]]:
    n = len(results)
    dominated: list[list[int]] = [[] for _ in range(n)]
    count = [0] * n
    fronts: list[list[int]] = [[]]
    for p in range(n):
        for q in range(n):
            if p == q:
                continue
            if _constrained_dominates(results[p], results[q]):
                dominated[p].append(q)
            elif _constrained_dominates(results[q], results[p]):
                count[p] += 1
        if count[p] == 0:
            fronts[0].append(p)
    i = 0
    while fronts[i]:
        nxt = []
        for p in fronts[i]:
            for q in dominated[p]:
                count[q] -= 1
                if count[q] == 0:
                    nxt.append(q)
        i += 1
        fronts.append(nxt)
    fronts.pop()
    return fronts


def crowding_distance(front: list[int], results: list[EvalResult]) -> dict[int, float]:
    dist = {i: 0.0 for i in front}
    scored = [i for i in front if results[i].feasible]
    if len(scored) < 3:
        for i in scored:
            dist[i] = float("inf")
        return dist
    for m in range(3):
        ordered = sorted(scored, key=lambda i: results[i].objectives.as_tuple()[m])
        lo = results[ordered[0]].objectives.as_tuple()[m]
        hi = results[ordered[-1]].objectives.as_tuple()[m]
        dist[ordered[0]] = dist[ordered[-1]] = float("inf")
        if hi == lo:
            continue
        for k in range(1, len(ordered) - 1):
            prev = results[ordered[k - 1]].objectives.as_tuple()[m]
            nxt = results[ordered[k + 1]].objectives.as_tuple()[m]
            dist[ordered[k]] += (nxt - prev) / (hi - lo)
    return dist


@dataclass(frozen=True)
class ParetoEntry:
    chromosome: Chromosome
    objectives: Objectives
    plan: Plan


@dataclass(frozen=True)
class ParetoFront:
    entries: tuple[ParetoEntry, ...]


def _initial_population(space: SearchSpace, cfg: GaConfig, rng) -> list[Chromosome]:
    everything = list(space.chromosomes())
    if len(everything) <= cfg.population_size:
        pop = list(everything)
        while len(pop) < cfg.population_size:
            pop.append(everything[rng.randrange(len(everything))])
        return pop
    return [
        Chromosome(
            rng.randrange(len(space.allocations)),
            rng.randrange(len(space.permutations[0])),
        )
        for _ in range(cfg.population_size)
    ]


def nsga2_run(space: SearchSpace, cfg: GaConfig) -> ParetoFront:
    """Elitist NSGA-II over the chromosome space.

    Returns the nondominated feasible set of the final population, sorted
    by objectives; raises :class:`NoFeasibleSolution` when the whole run
    saw no feasible chromosome.
    """
    if not space.allocations:
        raise NoFeasibleSolution("no allocations to search", 0, 0)
    rng = random.Random(f"nsga2:{cfg.seed}")
    cache: dict[tuple[int, int], EvalResult] = {}

    population = _initial_population(space, cfg, rng)
    for generation in range(cfg.generations):
        results = [evaluate(space, ch, cache) for ch in population]
        fronts = fast_nondominated_sort(results)
        rank = {}
        crowd = {}
        for r, front in enumerate(fronts):
            dist = crowding_distance(front, results)
            for i in front:
                rank[i] = r
                crowd[i] = dist[i]

        def better(i, j):
            if rank[i] != rank[j]:
                return i if rank[i] < rank[j] else j
            if crowd[i] != crowd[j]:
                return i if crowd[i] > crowd[j] else j
            return min(i, j)

        offspring: list[Chromosome] = []
        while len(offspring) < cfg.population_size:
            a = better(rng.randrange(len(population)), rng.randrange(len(population)))
            b = better(rng.randrange(len(population)), rng.randrange(len(population)))
            c1, c2 = population[a], population[b]
            if rng.random() < cfg.crossover_rate:
                g1 = [c1.alloc_idx, c1.perm_idx]
                g2 = [c2.alloc_idx, c2.perm_idx]
                for g in range(2):
                    if rng.random() < 0.5:
                        g1[g], g2[g] = g2[g], g1[g]
                c1, c2 = Chromosome(*g1), Chromosome(*g2)
            offspring.extend(_mutate(c, space, cfg, rng) for c in (c1, c2))
        offspring = offspring[: cfg.population_size]

        combined = population + offspring
        combined_results = [evaluate(space, ch, cache) for ch in combined]
        population = _environmental_selection(combined, combined_results, cfg)

    final_results = [evaluate(space, ch, cache) for ch in population]
    front = _feasible_front(population, final_results)
    if not front:
        evaluated = len(cache)
        infeasible = sum(1 for r in cache.values() if not r.feasible)
        raise NoFeasibleSolution(
            f"no feasible chromosome among {evaluated} evaluated "
            f"({infeasible} infeasible)",
            evaluated=evaluated,
            infeasible=infeasible,
        )
    return ParetoFront(tuple(front))


def _mutate(ch: Chromosome, space: SearchSpace, cfg: GaConfig, rng) -> Chromosome:
    if rng.random() >= cfg.mutation_rate:
        return ch
    if rng.random() < 0.5:
        return Chromosome(rng.randrange(len(space.allocations)), ch.perm_idx)
    return Chromosome(ch.alloc_idx, rng.randrange(len(space.permutations[0])))


def _environmental_selection(combined, results, cfg) -> list[Chromosome]:
    fronts = fast_nondominated_sort(results)
    chosen: list[int] = []
    for front in fronts:
        if len(chosen) + len(front) <= cfg.population_size:
            chosen.extend(sorted(front))
            continue
        dist = crowding_distance(front, results)
        room = cfg.population_size - len(chosen)

        def sort_key(i):
            return (
                -dist[i],
                results[i].objectives.as_tuple() if results[i].feasible else (2.0, 0, 0),
                (combined[i].alloc_idx, combined[i].perm_idx),
            )

        # fill with distinct chromosomes first: a duplicate copy must never
        # crowd out the only copy of another front member
        seen: set[tuple[int, int]] = set()
        uniques, copies = [], []
        for i in sorted(front):
            key = (combined[i].alloc_idx, combined[i].perm_idx)
            (copies if key in seen else uniques).append(i)
            seen.add(key)
        ordered = sorted(uniques, key=sort_key) + sorted(copies, key=sort_key)
        chosen.extend(ordered[:room])
        break
    return [combined[i] for i in chosen]


def _feasible_front(population, results) -> list[ParetoEntry]:
    seen = set()
    candidates = []
    for ch, res in zip(population, results):
        key = (ch.alloc_idx, ch.perm_idx)
        if res.feasible and key not in seen:
            seen.add(key)
            candidates.append((ch, res))
    front = [
        (ch, res)
        for ch, res in candidates
        if not any(
            dominates(other.objectives, res.objectives) for _, other in candidates
        )
    ]
    front.sort(key=lambda e: (e[1].objectives.as_tuple(), e[0].alloc_idx, e[0].perm_idx))
    return [ParetoEntry(ch, res.objectives, res.plan) for ch, res in front]


def brute_force_front(space: SearchSpace, cache=None) -> list[ParetoEntry]:
    """Exact Pareto set by evaluating the whole chromosome space.

    Test oracle for desk-scale spaces; shares :func:`evaluate` but not the
    search machinery.
    """
    cache = {} if cache is None else cache
    evaluated = [(ch, evaluate(space, ch, cache)) for ch in space.chromosomes()]
    feasible = [(ch, res) for ch, res in evaluated if res.feasible]
    front = [
        (ch, res)
        for ch, res in feasible
        if not any(dominates(o.objectives, res.objectives) for _, o in feasible)
    ]
    front.sort(key=lambda e: (e[1].objectives.as_tuple(), e[0].alloc_idx, e[0].perm_idx))
    return [ParetoEntry(ch, res.objectives, res.plan) for ch, res in front]
