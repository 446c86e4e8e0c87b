"""Timed per-robot schedules extracted from a solved model."""

from __future__ import annotations

from dataclasses import dataclass

from .mdp import Mdp
from .taskgraph import PrecedencePair


@dataclass(frozen=True)
class PlanEvent:
    kind: str  # "travel" | "execute" | "idle" | "jointSync"
    start: int
    end: int
    instance: str | None = None
    frm: str | None = None
    to: str | None = None

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "start": self.start, "end": self.end}
        if self.instance is not None:
            d["instance"] = self.instance
        if self.frm is not None:
            d["from"] = self.frm
        if self.to is not None:
            d["to"] = self.to
        return d


@dataclass(frozen=True)
class Plan:
    timelines: dict[str, tuple[PlanEvent, ...]]

    @property
    def makespan(self) -> int:
        ends = [ev.end for tl in self.timelines.values() for ev in tl]
        return max(ends) if ends else 0

    def to_dict(self) -> dict:
        return {
            robot: [ev.to_dict() for ev in tl]
            for robot, tl in sorted(self.timelines.items())
        }


def extract_plan(mdp: Mdp, policy: list[int | None]) -> Plan:
    """Walk the policy's success branch from the initial state.

    Requires a model built by :func:`kanoa.mdp.build_mdp` (it carries the
    scheduling context).  Every stochastic action is followed through its
    success outcome, which is where the synthesized schedule lives.
    """
    ctx = mdp.context
    if ctx is None:
        raise ValueError("plan extraction needs a scheduling model")
    events: dict[str, list[PlanEvent]] = {r: [] for r in ctx.robots}
    done = mdp.label_states("done")

    s = mdp.initial
    while s not in done:
        action_idx = policy[s]
        if action_idx is None:
            raise ValueError("policy undefined before reaching the target")
        choice = mdp.choices[s][action_idx]
        meta = choice.meta
        if meta.kind == "task":
            t0 = mdp.state_times[s][ctx.robot_index[meta.robot]]
            if meta.travel_time > 0:
                events[meta.robot].append(
                    PlanEvent("travel", t0, t0 + meta.travel_time, None, meta.frm, meta.to)
                )
            start = t0 + meta.travel_time
            events[meta.robot].append(
                PlanEvent("execute", start, start + meta.duration, meta.instance)
            )
        elif meta.kind == "travel":
            t0 = mdp.state_times[s][ctx.robot_index[meta.robot]]
            if meta.travel_time > 0:
                events[meta.robot].append(
                    PlanEvent("travel", t0, t0 + meta.travel_time, None, meta.frm, meta.to)
                )
        elif meta.kind == "sync":
            t0 = mdp.state_times[s][ctx.robot_index[meta.participants[0]]]
            for robot in meta.participants:
                events[robot].append(
                    PlanEvent("jointSync", t0, t0 + meta.duration, meta.instance)
                )
        elif meta.kind == "idle":
            t0 = mdp.state_times[s][ctx.robot_index[meta.robot]]
            events[meta.robot].append(PlanEvent("idle", t0, t0 + meta.duration))
        s = choice.branches[meta.success_branch][1]

    return Plan({r: tuple(_merge_idles(evs)) for r, evs in events.items()})


def _merge_idles(events: list[PlanEvent]) -> list[PlanEvent]:
    out: list[PlanEvent] = []
    for ev in events:
        if out and ev.kind == "idle" and out[-1].kind == "idle" and out[-1].end == ev.start:
            out[-1] = PlanEvent("idle", out[-1].start, ev.end)
        else:
            out.append(ev)
    return out


def check_plan(
    plan: Plan,
    pairs: list[PrecedencePair] | None = None,
    time_available: int | None = None,
    idle_caps: dict[str, int] | None = None,
) -> list[str]:
    """All invariant violations of a plan (empty list when it is sound).

    Checks per-robot contiguity, joint start alignment, precedence between
    instance completions and starts, the mission time budget, and per-robot
    idle budgets.
    """
    problems = []
    exec_window: dict[str, tuple[int, int]] = {}
    joint_starts: dict[str, set[tuple[int, int]]] = {}

    for robot, timeline in sorted(plan.timelines.items()):
        clock = 0
        for ev in timeline:
            if ev.start != clock:
                problems.append(
                    f"{robot}: event {ev.kind} starts at {ev.start}, expected {clock}"
                )
            if ev.end < ev.start:
                problems.append(f"{robot}: event {ev.kind} ends before it starts")
            clock = ev.end
            if ev.kind in ("execute", "jointSync"):
                window = (ev.start, ev.end)
                if ev.kind == "jointSync":
                    joint_starts.setdefault(ev.instance, set()).add(window)
                prev = exec_window.get(ev.instance)
                if prev is not None and prev != window:
                    problems.append(
                        f"instance {ev.instance} executed over differing windows"
                    )
                exec_window[ev.instance] = window
        if time_available is not None and clock > time_available:
            problems.append(f"{robot}: timeline ends at {clock} > budget {time_available}")
        if idle_caps is not None and robot in idle_caps:
            idle_total = sum(
                ev.end - ev.start for ev in timeline if ev.kind == "idle"
            )
            if idle_total > idle_caps[robot]:
                problems.append(
                    f"{robot}: idle {idle_total} exceeds budget {idle_caps[robot]}"
                )

    for instance, windows in joint_starts.items():
        if len(windows) > 1:
            problems.append(f"joint instance {instance} is not synchronized")

    for p in pairs or ():
        if p.before in exec_window and p.after in exec_window:
            if exec_window[p.before][1] > exec_window[p.after][0]:
                problems.append(
                    f"precedence violated: {p.before} ends at "
                    f"{exec_window[p.before][1]}, {p.after} starts at "
                    f"{exec_window[p.after][0]}"
                )
    return problems
