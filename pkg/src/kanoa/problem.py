"""Core data model: the mission problem AST and its validated form.

A parsed problem is a plain tree of frozen dataclasses; validation
(see :mod:`kanoa.validation`) wraps it in a :class:`ValidatedProblem`
with a completed, symmetric distance table and indexed lookups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property


@dataclass(frozen=True)
class Location:
    id: str
    x: int
    y: int


@dataclass(frozen=True)
class DistanceEntry:
    frm: str
    to: str
    distance: int


@dataclass(frozen=True)
class AtomicTaskDef:
    id: str
    robots_needed: int


@dataclass(frozen=True)
class CompoundTaskDef:
    id: str
    subtasks: tuple[str, ...]
    ordered: bool


@dataclass(frozen=True)
class Capability:
    task_type_id: str
    required_time: int
    success_prob: float


@dataclass(frozen=True)
class RobotDef:
    id: str
    initial_loc: str
    velocity: Fraction
    capabilities: tuple[Capability, ...]

    def capability_for(self, task_type_id: str) -> Capability | None:
        for cap in self.capabilities:
            if cap.task_type_id == task_type_id:
                return cap
        return None


@dataclass(frozen=True)
class MissionTaskRef:
    task_id: str
    location_id: str


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle given by two opposite corners."""

    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def contains(self, x: int, y: int) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


@dataclass(frozen=True)
class ConstraintSpec:
    kind: str  # "boundary" | "timeAvailable" | "maxIdle"
    subject: str | None = None  # robot id or "all"; None for timeAvailable
    rect: Rect | None = None
    budget: int | None = None


@dataclass(frozen=True)
class ProblemSpec:
    locations: tuple[Location, ...]
    distances: tuple[DistanceEntry, ...]
    atomic_tasks: tuple[AtomicTaskDef, ...]
    compound_tasks: tuple[CompoundTaskDef, ...]
    robots: tuple[RobotDef, ...]
    mission_tasks: tuple[MissionTaskRef, ...]
    constraints: tuple[ConstraintSpec, ...]


def euclidean_ceil(a: Location, b: Location) -> int:
    """Integer ceiling of the straight-line distance between two locations.

    Computed in exact integer arithmetic so e.g. a 3-4-5 triangle yields 5,
    never a float artifact rounded up to 6.
    """
    sq = (a.x - b.x) ** 2 + (a.y - b.y) ** 2
    r = math.isqrt(sq)
    return r if r * r == sq else r + 1


@dataclass(frozen=True)
class ValidatedProblem:
    """A problem that passed validation, with derived lookup structures.

    ``distance_table`` is complete and symmetric over all location pairs;
    gaps in the declared table are filled with the integer ceiling of the
    straight-line distance, never overwriting a declared value.
    """

    problem: ProblemSpec
    distance_table: dict[tuple[str, str], int]

    # -- lookups ---------------------------------------------------------

    @cached_property
    def _locations(self) -> dict[str, Location]:
        return {l.id: l for l in self.problem.locations}

    @cached_property
    def _robots(self) -> dict[str, RobotDef]:
        return {r.id: r for r in self.problem.robots}

    @cached_property
    def _atomics(self) -> dict[str, AtomicTaskDef]:
        return {t.id: t for t in self.problem.atomic_tasks}

    @cached_property
    def _compounds(self) -> dict[str, CompoundTaskDef]:
        return {t.id: t for t in self.problem.compound_tasks}

    def location(self, loc_id: str) -> Location:
        return self._locations[loc_id]

    def robot(self, robot_id: str) -> RobotDef:
        return self._robots[robot_id]

    def atomic(self, task_id: str) -> AtomicTaskDef:
        return self._atomics[task_id]

    def compound(self, task_id: str) -> CompoundTaskDef | None:
        return self._compounds.get(task_id)

    # -- derived quantities ----------------------------------------------

    def distance(self, a: str, b: str) -> int:
        if a == b:
            return 0
        return self.distance_table[(a, b)]

    def travel_time(self, robot: RobotDef, a: str, b: str) -> int:
        """Ceiling of distance over velocity, in whole time units."""
        d = self.distance(a, b)
        if d == 0:
            return 0
        v = robot.velocity
        return -((-d * v.denominator) // v.numerator)

    @property
    def time_available(self) -> int:
        for c in self.problem.constraints:
            if c.kind == "timeAvailable":
                return c.budget
        raise AssertionError("validated problem lacks a time constraint")

    def max_idle(self, robot_id: str) -> int | None:
        """Effective idle budget for a robot: the tightest applicable bound."""
        budgets = [
            c.budget
            for c in self.problem.constraints
            if c.kind == "maxIdle" and c.subject in ("all", robot_id)
        ]
        return min(budgets) if budgets else None

    def boundaries(self, robot_id: str) -> list[Rect]:
        return [
            c.rect
            for c in self.problem.constraints
            if c.kind == "boundary" and c.subject in ("all", robot_id)
        ]

    def location_allowed(self, robot_id: str, loc_id: str) -> bool:
        """True when the location lies inside every boundary that binds the robot."""
        loc = self.location(loc_id)
        return all(r.contains(loc.x, loc.y) for r in self.boundaries(robot_id))

    def capable_robots(self, task_type_id: str) -> list[str]:
        return [r.id for r in self.problem.robots if r.capability_for(task_type_id)]
