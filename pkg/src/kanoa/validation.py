"""Whole-problem validation and distance-table completion."""

from __future__ import annotations

from .errors import ValidationError
from .problem import ProblemSpec, ValidatedProblem, euclidean_ceil


def validate_problem(spec: ProblemSpec) -> ValidatedProblem:
    """Check every problem invariant and derive the complete distance table.

    All violations are collected and reported together, in a deterministic
    order (world, tasks, robots, mission, constraints).  Distance gaps are
    filled with the integer ceiling of the straight-line distance; declared
    values are never overwritten.
    """
    errors: list[str] = []

    # world: unique location ids
    loc_ids = [l.id for l in spec.locations]
    loc_set = set(loc_ids)
    for dup in _duplicates(loc_ids):
        errors.append(f"duplicate location id '{dup}'")

    # world: distance entries
    seen_pairs = set()
    for d in spec.distances:
        if d.frm == d.to:
            errors.append(f"distance from '{d.frm}' to itself")
            continue
        if d.frm not in loc_set:
            errors.append(f"distance references unknown location '{d.frm}'")
        if d.to not in loc_set:
            errors.append(f"distance references unknown location '{d.to}'")
        if d.distance < 0:
            errors.append(f"negative distance between '{d.frm}' and '{d.to}'")
        pair = (min(d.frm, d.to), max(d.frm, d.to))
        if pair in seen_pairs:
            errors.append(f"duplicate distance entry for '{pair[0]}'/'{pair[1]}'")
        seen_pairs.add(pair)

    # tasks: unique ids across atomic + compound, arity, references, acyclicity
    task_ids = [t.id for t in spec.atomic_tasks] + [t.id for t in spec.compound_tasks]
    for dup in _duplicates(task_ids):
        errors.append(f"duplicate task id '{dup}'")
    atomic_ids = {t.id for t in spec.atomic_tasks}
    compound_by_id = {t.id: t for t in spec.compound_tasks}
    for t in spec.atomic_tasks:
        if t.robots_needed < 1:
            errors.append(f"atomic task '{t.id}' needs fewer than one robot")
    for t in spec.compound_tasks:
        if not t.subtasks:
            errors.append(f"compound task '{t.id}' has no subtasks")
        for sub in t.subtasks:
            if sub not in atomic_ids and sub not in compound_by_id:
                errors.append(
                    f"compound task '{t.id}' references unknown subtask '{sub}'"
                )
    for cyc in _find_cycles(compound_by_id):
        errors.append(f"cyclic task definition involving '{cyc}'")

    # robots
    robot_ids = [r.id for r in spec.robots]
    for dup in _duplicates(robot_ids):
        errors.append(f"duplicate robot id '{dup}'")
    for r in spec.robots:
        if r.initial_loc not in loc_set:
            errors.append(f"robot '{r.id}' starts at unknown location '{r.initial_loc}'")
        if r.velocity <= 0:
            errors.append(f"robot '{r.id}' has non-positive velocity")
        cap_types = [c.task_type_id for c in r.capabilities]
        for dup in _duplicates(cap_types):
            errors.append(f"robot '{r.id}' lists capability '{dup}' twice")
        for c in r.capabilities:
            if c.task_type_id not in atomic_ids:
                errors.append(
                    f"robot '{r.id}' capability references unknown atomic task "
                    f"'{c.task_type_id}'"
                )
            if c.required_time < 1:
                errors.append(
                    f"robot '{r.id}' capability '{c.task_type_id}' has required "
                    "time below 1"
                )
            if not 0 < c.success_prob <= 1:
                errors.append(
                    f"robot '{r.id}' capability '{c.task_type_id}' has success "
                    f"probability {c.success_prob} outside (0, 1]"
                )

    # mission tasks
    for m in spec.mission_tasks:
        if m.task_id not in atomic_ids and m.task_id not in compound_by_id:
            errors.append(f"mission references unknown task '{m.task_id}'")
        if m.location_id not in loc_set:
            errors.append(f"mission references unknown location '{m.location_id}'")
    if not spec.mission_tasks:
        errors.append("mission has no tasks")

    # constraints
    time_constraints = [c for c in spec.constraints if c.kind == "timeAvailable"]
    if len(time_constraints) != 1:
        errors.append(
            f"mission must declare exactly one time budget, found {len(time_constraints)}"
        )
    robot_id_set = set(robot_ids)
    for c in spec.constraints:
        if c.kind in ("boundary", "maxIdle"):
            if c.subject != "all" and c.subject not in robot_id_set:
                errors.append(f"constraint references unknown robot '{c.subject}'")
        if c.budget is not None and c.budget < 1:
            errors.append(f"{c.kind} budget below 1")
        if c.rect is not None and (
            c.rect.x_min > c.rect.x_max or c.rect.y_min > c.rect.y_max
        ):
            errors.append("boundary rectangle is not well-formed (min > max)")

    # capability coverage for every atomic type reachable from the mission
    if not errors:
        reachable = _reachable_atomics(spec, atomic_ids, compound_by_id)
        for task_id in sorted(reachable):
            needed = next(t for t in spec.atomic_tasks if t.id == task_id).robots_needed
            capable = sum(
                1 for r in spec.robots if r.capability_for(task_id) is not None
            )
            if capable < needed:
                errors.append(
                    f"atomic task '{task_id}' needs {needed} robots but only "
                    f"{capable} are capable"
                )

    if errors:
        raise ValidationError(errors)

    return ValidatedProblem(problem=spec, distance_table=_complete_distances(spec))


def _duplicates(items):
    seen, dups = set(), []
    for x in items:
        if x in seen and x not in dups:
            dups.append(x)
        seen.add(x)
    return dups


def _find_cycles(compound_by_id):
    """Ids of compound tasks that participate in a reference cycle, sorted."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {cid: WHITE for cid in compound_by_id}
    cyclic = set()

    def visit(cid, stack):
        color[cid] = GRAY
        stack.append(cid)
        for sub in compound_by_id[cid].subtasks:
            if sub not in compound_by_id:
                continue
            if color[sub] == GRAY:
                cyclic.update(stack[stack.index(sub):])
            elif color[sub] == WHITE:
                visit(sub, stack)
        stack.pop()
        color[cid] = BLACK

    for cid in compound_by_id:
        if color[cid] == WHITE:
            visit(cid, [])
    return sorted(cyclic)


def _reachable_atomics(spec, atomic_ids, compound_by_id):
    reachable = set()
    frontier = [m.task_id for m in spec.mission_tasks]
    seen = set()
    while frontier:
        tid = frontier.pop()
        if tid in seen:
            continue
        seen.add(tid)
        if tid in atomic_ids:
            reachable.add(tid)
        elif tid in compound_by_id:
            frontier.extend(compound_by_id[tid].subtasks)
    return reachable


def _complete_distances(spec: ProblemSpec) -> dict[tuple[str, str], int]:
    table: dict[tuple[str, str], int] = {}
    for d in spec.distances:
        table[(d.frm, d.to)] = d.distance
        table[(d.to, d.frm)] = d.distance
    locs = spec.locations
    for i, a in enumerate(locs):
        for b in locs[i + 1:]:
            if (a.id, b.id) not in table:
                d = euclidean_ceil(a, b)
                table[(a.id, b.id)] = d
                table[(b.id, a.id)] = d
    return table
