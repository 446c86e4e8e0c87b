"""Explicit-state MDP for scheduling one robot cluster.

States compose, per robot, its task position, a travel/arrival phase for
joint tasks, idle units spent, and a failure flag; plus one global
has-ever-failed bit and the recorded completion times of instances that
later tasks on other robots must wait for.  Each robot's clock is derived
from (position, phase, idle, failure), so time never appears in the state
tuple itself.

Transitions follow the scheduling semantics:

* a task action travels to the task location and executes it in one step,
  succeeding with the robot's capability probability and otherwise raising
  the failure flag while consuming the same duration;
* a recovery action (probability 1) clears the failure and moves on to the
  next task at no time cost;
* joint tasks split into a solo travel action and a synchronized action
  that fires only when every participant has arrived with equal clocks;
* an idle action advances the robot's clock to the time it is waiting
  for: a joint partner's clock or an awaited predecessor's completion.

Idling is offered only in states where it can matter, and a forced wait is
taken in one multi-unit step (the waiting target never moves, so nothing
is lost by not stopping part-way).  Any schedule of the one-unit-at-a-time
unrestricted model maps to one here with identical feasibility, travel,
idle and success values, so reachability, minimum idle and the success
probability are preserved while the state space stays tractable.

Rewards: ``travel`` carries the hop distance of task/travel actions,
``idle`` carries the waited duration of idle actions.  ``done`` labels
states where every robot finished; ``success`` additionally requires that
no failure ever occurred.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .allocation import Allocation
from .clustering import RobotCluster
from .errors import StateExplosion
from .permutations import PermutationSet
from .problem import ValidatedProblem
from .taskgraph import PrecedencePair, TaskInstance

DEFAULT_STATE_CAP = 5_000_000

_SLOTS = 4  # pos, arrived, idle, fail


@dataclass(frozen=True)
class ActionMeta:
    """What an action means in schedule terms; drives plan extraction."""

    kind: str  # "task" | "travel" | "sync" | "idle" | "recover"
    robot: str | None
    participants: tuple[str, ...]
    instance: str | None
    frm: str | None
    to: str | None
    travel_time: int
    duration: int
    success_branch: int


class Choice:
    """One action available in a state: a distribution plus rewards."""

    __slots__ = ("label", "branches", "travel_reward", "idle_reward", "meta")

    def __init__(self, label, branches, travel_reward=0, idle_reward=0, meta=None):
        total = sum(p for p, _ in branches)
        if abs(total - 1.0) > 1e-12:
            raise AssertionError(f"distribution sums to {total}, not 1")
        self.label = label
        self.branches = tuple(branches)
        self.travel_reward = travel_reward
        self.idle_reward = idle_reward
        self.meta = meta

    def reward(self, name: str) -> float:
        if name == "travel":
            return self.travel_reward
        if name == "idle":
            return self.idle_reward
        raise KeyError(name)


class Mdp:
    """Explicit model: indexed states, per-state action choices, labels."""

    def __init__(self, states, choices, labels, initial=0, state_times=None, context=None):
        self.states = states
        self.choices = choices
        self.labels = {name: frozenset(ids) for name, ids in labels.items()}
        self.initial = initial
        self.state_times = state_times
        self.context = context

    @property
    def n_states(self) -> int:
        return len(self.states)

    def label_states(self, name: str) -> frozenset:
        return self.labels.get(name, frozenset())


@dataclass(frozen=True)
class _Step:
    instance: str
    location: str
    hop_from: str
    hop_dist: int
    travel_time: int
    duration: int
    success_prob: float
    joint: bool
    participants: tuple[str, ...]
    pred_tracked: tuple[int, ...]
    tracked_idx: int


class _ClusterContext:
    """Static data shared by every state of one cluster model."""

    def __init__(self, v, allocation, cluster, permutation, pairs, instances, tt):
        self.v = v
        self.tt = tt
        self.robots = tuple(sorted(cluster.robots))
        self.robot_index = {r: i for i, r in enumerate(self.robots)}
        self.idle_caps = [
            v.max_idle(r) if v.max_idle(r) is not None else tt for r in self.robots
        ]

        in_cluster = cluster.instances
        team = {i: allocation.assignments[i] for i in in_cluster}

        # instances whose completion time later tasks on other robots await
        tracked: list[str] = []
        for p in pairs:
            if p.before in in_cluster and p.after in in_cluster:
                if not (team[p.after] <= team[p.before]):
                    if p.before not in tracked:
                        tracked.append(p.before)
        tracked.sort()
        self.tracked = tuple(tracked)
        tr_index = {inst: i for i, inst in enumerate(tracked)}

        preds: dict[str, set[str]] = {}
        for p in pairs:
            if p.before in tr_index and p.after in in_cluster:
                preds.setdefault(p.after, set()).add(p.before)

        self.steps: list[list[_Step]] = []
        self.cum: list[list[int]] = []
        for rid in self.robots:
            robot = v.robot(rid)
            here = robot.initial_loc
            row: list[_Step] = []
            cum = [0]
            for inst_id in permutation.per_robot[rid]:
                inst: TaskInstance = instances[inst_id]
                participants = tuple(sorted(team[inst_id]))
                joint = inst.robots_needed >= 2
                if joint:
                    duration = max(
                        v.robot(r).capability_for(inst.type_id).required_time
                        for r in participants
                    )
                else:
                    duration = robot.capability_for(inst.type_id).required_time
                dist = v.distance(here, inst.location)
                row.append(
                    _Step(
                        instance=inst_id,
                        location=inst.location,
                        hop_from=here,
                        hop_dist=dist,
                        travel_time=v.travel_time(robot, here, inst.location),
                        duration=duration,
                        success_prob=robot.capability_for(inst.type_id).success_prob,
                        joint=joint,
                        participants=participants,
                        pred_tracked=tuple(
                            sorted(tr_index[x] for x in preds.get(inst_id, ()))
                        ),
                        tracked_idx=tr_index.get(inst_id, -1),
                    )
                )
                cum.append(cum[-1] + row[-1].travel_time + duration)
                here = inst.location
            self.steps.append(row)
            self.cum.append(cum)

        # joint instances: participant -> (robot index, step position)
        self.joint_positions: dict[str, list[tuple[int, int]]] = {}
        for ri, row in enumerate(self.steps):
            for k, step in enumerate(row):
                if step.joint:
                    self.joint_positions.setdefault(step.instance, []).append((ri, k))

        self.nrobots = len(self.robots)
        self.fail_slot = _SLOTS * self.nrobots  # global any-failure bit
        self.dt_base = self.fail_slot + 1

    # -- state helpers ----------------------------------------------------

    def initial_state(self) -> tuple:
        return (0,) * (_SLOTS * self.nrobots + 1 + len(self.tracked))

    def min_completion(self, i: int) -> int:
        """Lower bound on robot i's finishing clock (no waiting at all)."""
        return self.cum[i][-1]

    def robot_time(self, state: tuple, i: int) -> int:
        pos, arrived, idle, fail = state[_SLOTS * i : _SLOTS * i + _SLOTS]
        if fail:
            base = self.cum[i][pos + 1]
        elif arrived:
            base = self.cum[i][pos] + self.steps[i][pos].travel_time
        else:
            base = self.cum[i][pos]
        return base + idle

    def times(self, state: tuple) -> tuple[int, ...]:
        return tuple(self.robot_time(state, i) for i in range(self.nrobots))

    def is_done(self, state: tuple) -> bool:
        return all(
            state[_SLOTS * i] == len(self.steps[i]) for i in range(self.nrobots)
        )

    def ever_failed(self, state: tuple) -> bool:
        return bool(state[self.fail_slot])

    def done_time(self, state: tuple, tracked_idx: int) -> int | None:
        raw = state[self.dt_base + tracked_idx]
        return raw - 1 if raw else None


def _with_robot(state, i, pos, arrived, idle, fail):
    base = _SLOTS * i
    return state[:base] + (pos, arrived, idle, fail) + state[base + _SLOTS :]


def _with_flag(state, slot, value):
    if state[slot] == value:
        return state
    return state[:slot] + (value,) + state[slot + 1 :]


def _with_done_time(ctx, state, tracked_idx, time):
    slot = ctx.dt_base + tracked_idx
    return state[:slot] + (time + 1,) + state[slot + 1 :]


def _preds_ready(ctx, state, step, my_time):
    """All awaited predecessors completed, no later than my clock."""
    for t in step.pred_tracked:
        dt = ctx.done_time(state, t)
        if dt is None or my_time < dt:
            return False
    return True


def _pred_target(ctx, state, step):
    """Largest recorded predecessor completion time, or None if one is missing."""
    target = 0
    for t in step.pred_tracked:
        dt = ctx.done_time(state, t)
        if dt is None:
            return None
        target = max(target, dt)
    return target


def _sync_status(ctx, state, instance):
    """(ready, common_time, target) for one joint instance.

    ready means every participant has arrived, none failed, and clocks are
    equal at or past every awaited predecessor completion; target is the
    clock everyone must reach before the shared action can fire, or None
    while some participant has not arrived or a predecessor is unfinished.
    """
    times = []
    step0 = None
    for ri, k in ctx.joint_positions[instance]:
        pos, arrived, _, fail = state[_SLOTS * ri : _SLOTS * ri + _SLOTS]
        if pos != k or not arrived or fail:
            return False, None, None
        times.append(ctx.robot_time(state, ri))
        step0 = ctx.steps[ri][k]
    target = max(times)
    for t in step0.pred_tracked:
        dt = ctx.done_time(state, t)
        if dt is None:
            return False, None, None
        target = max(target, dt)
    common = times[0]
    ready = all(t == common for t in times) and common >= target
    return ready, common, target


def _enumerate_choices(ctx: _ClusterContext, state: tuple) -> list[Choice]:
    choices: list[Choice] = []
    tt = ctx.tt

    for i in range(ctx.nrobots):
        pos, arrived, idle, fail = state[_SLOTS * i : _SLOTS * i + _SLOTS]
        row = ctx.steps[i]
        if pos >= len(row):
            continue
        rid = ctx.robots[i]
        step = row[pos]
        my_time = ctx.robot_time(state, i)

        if fail:
            succ = _with_robot(state, i, pos + 1, 0, idle, 0)
            if step.tracked_idx >= 0:
                succ = _with_done_time(ctx, succ, step.tracked_idx, my_time)
            choices.append(
                Choice(
                    f"recover_{rid}",
                    ((1.0, succ),),
                    meta=ActionMeta(
                        "recover", rid, (rid,), step.instance, None, None, 0, 0, 0
                    ),
                )
            )
            continue

        if step.joint:
            if not arrived and my_time + step.travel_time <= tt:
                succ = _with_robot(state, i, pos, 1, idle, 0)
                choices.append(
                    Choice(
                        f"goto_{rid}_{step.instance}",
                        ((1.0, succ),),
                        travel_reward=step.hop_dist,
                        meta=ActionMeta(
                            "travel",
                            rid,
                            (rid,),
                            step.instance,
                            step.hop_from,
                            step.location,
                            step.travel_time,
                            0,
                            0,
                        ),
                    )
                )
        else:
            if (
                my_time + step.travel_time + step.duration <= tt
                and _preds_ready(ctx, state, step, my_time)
            ):
                done_t = my_time + step.travel_time + step.duration
                ok = _with_robot(state, i, pos + 1, 0, idle, 0)
                if step.tracked_idx >= 0:
                    ok = _with_done_time(ctx, ok, step.tracked_idx, done_t)
                q = step.success_prob
                if q >= 1.0:
                    branches = ((1.0, ok),)
                else:
                    bad = _with_flag(
                        _with_robot(state, i, pos, arrived, idle, 1),
                        ctx.fail_slot,
                        1,
                    )
                    branches = ((q, ok), (1.0 - q, bad))
                choices.append(
                    Choice(
                        f"do_{rid}_{step.instance}",
                        branches,
                        travel_reward=step.hop_dist,
                        meta=ActionMeta(
                            "task",
                            rid,
                            (rid,),
                            step.instance,
                            step.hop_from,
                            step.location,
                            step.travel_time,
                            step.duration,
                            0,
                        ),
                    )
                )

        # wait: only while catching up to a joint partner or a predecessor,
        # and then in one jump (the waiting target cannot move)
        target = None
        if step.joint and arrived:
            ready, _, tgt = _sync_status(ctx, state, step.instance)
            if not ready and tgt is not None and my_time < tgt:
                target = tgt
        elif not step.joint and step.pred_tracked:
            tgt = _pred_target(ctx, state, step)
            if tgt is not None and my_time < tgt:
                target = tgt
        if target is not None:
            wait = target - my_time
            if target <= tt and idle + wait <= ctx.idle_caps[i]:
                succ = _with_robot(state, i, pos, arrived, idle + wait, 0)
                choices.append(
                    Choice(
                        f"idle_{rid}",
                        ((1.0, succ),),
                        idle_reward=wait,
                        meta=ActionMeta(
                            "idle", rid, (rid,), None, None, None, 0, wait, 0
                        ),
                    )
                )

    # synchronized joint actions, one per ready instance
    for instance in sorted(ctx.joint_positions):
        ready, common, _ = _sync_status(ctx, state, instance)
        if not ready:
            continue
        members = ctx.joint_positions[instance]
        step0 = ctx.steps[members[0][0]][members[0][1]]
        if common + step0.duration > tt:
            continue
        done_t = common + step0.duration
        ok = state
        bad = state
        prob = 1.0
        for ri, k in members:
            idle_r = state[_SLOTS * ri + 2]
            ok = _with_robot(ok, ri, k + 1, 0, idle_r, 0)
            bad = _with_robot(bad, ri, k, 1, idle_r, 1)
            prob *= ctx.steps[ri][k].success_prob
        bad = _with_flag(bad, ctx.fail_slot, 1)
        if step0.tracked_idx >= 0:
            ok = _with_done_time(ctx, ok, step0.tracked_idx, done_t)
        if prob >= 1.0:
            branches = ((1.0, ok),)
        else:
            branches = ((prob, ok), (1.0 - prob, bad))
        choices.append(
            Choice(
                f"sync_{instance}",
                branches,
                meta=ActionMeta(
                    "sync",
                    None,
                    step0.participants,
                    instance,
                    None,
                    step0.location,
                    0,
                    step0.duration,
                    0,
                ),
            )
        )

    return choices


def build_mdp(
    v: ValidatedProblem,
    allocation: Allocation,
    cluster: RobotCluster,
    permutation: PermutationSet,
    pairs: list[PrecedencePair],
    instances: dict[str, TaskInstance],
    time_available: int | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> Mdp:
    """Forward-reachable model for one (allocation, cluster, permutation).

    Raises :class:`StateExplosion` when more than ``state_cap`` states are
    discovered.
    """
    tt = v.time_available if time_available is None else time_available
    ctx = _ClusterContext(v, allocation, cluster, permutation, pairs, instances, tt)

    init = ctx.initial_state()
    index: dict[tuple, int] = {init: 0}
    states: list[tuple] = [init]
    raw_choices: list[list[Choice]] = []
    queue = deque([0])

    while queue:
        sid = queue.popleft()
        state = states[sid]
        resolved = []
        for choice in _enumerate_choices(ctx, state):
            branches = []
            for prob, succ in choice.branches:
                tid = index.get(succ)
                if tid is None:
                    tid = len(states)
                    if tid >= state_cap:
                        raise StateExplosion(
                            f"state cap {state_cap} exceeded for cluster of "
                            f"{ctx.nrobots} robots",
                            cluster_size=ctx.nrobots,
                            state_count=tid + 1,
                        )
                    index[succ] = tid
                    states.append(succ)
                    queue.append(tid)
                branches.append((prob, tid))
            choice.branches = tuple(branches)
            resolved.append(choice)
        raw_choices.append(resolved)

    done_ids = [i for i, s in enumerate(states) if ctx.is_done(s)]
    success_ids = [i for i in done_ids if not ctx.ever_failed(states[i])]
    state_times = [ctx.times(s) for s in states]
    return Mdp(
        states=states,
        choices=raw_choices,
        labels={"done": done_ids, "success": success_ids},
        initial=0,
        state_times=state_times,
        context=ctx,
    )
