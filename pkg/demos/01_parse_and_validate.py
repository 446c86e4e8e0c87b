"""Parse a mission file and inspect the validated problem.

Shows the block structure of the DSL, how validation completes the
distance table with straight-line fallbacks, and the pretty-print
round trip.
"""

from pathlib import Path

from kanoa import parse_problem, pretty_print, validate_problem

HERE = Path(__file__).parent
text = (HERE.parent / "fixtures" / "hospital.kanoa").read_text()

spec = parse_problem(text)
print(f"locations: {[l.id for l in spec.locations]}")
print(f"robots:    {[r.id for r in spec.robots]}")
print(f"mission:   {[(m.task_id, m.location_id) for m in spec.mission_tasks]}")

v = validate_problem(spec)

# the file declares only corridor distances; validation fills the rest
# with the ceiling of the straight-line distance
declared = {(d.frm, d.to) for d in spec.distances}
print(f"\ndeclared distance pairs: {len(declared)}")
print(f"completed table size:    {len(v.distance_table)} directed entries")
print(f"room1 -> room6 (filled): {v.distance('room1', 'room6')}")
print(f"room1 -> room2 (declared): {v.distance('room1', 'room2')}")

# travel time is distance over velocity, rounded up to whole time units
r5 = v.robot("r5")
print(f"\nr5 velocity {r5.velocity}: dock2 -> room2 takes "
      f"{v.travel_time(r5, 'dock2', 'room2')} time units "
      f"(distance {v.distance('dock2', 'room2')})")

# printing and reparsing reproduces the same AST
assert parse_problem(pretty_print(spec)) == spec
print("\npretty-print round trip: OK")
