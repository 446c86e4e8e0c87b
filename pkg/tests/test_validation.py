import pytest

from kanoa.errors import ValidationError
from kanoa.parser import parse_problem
from kanoa.validation import validate_problem

BASE = """
world {{ loc a (0, 0) loc b (3, 4) {world} }}
tasks {{ atomic t robots 1 {tasks} }}
robots {{ robot r at a velocity 1 {{ can t time 2 prob {prob} }} {robots} }}
mission {{ task {mission_task} at a; {constraints} }}
"""


def make(world="", tasks="", robots="", prob="0.9", mission_task="t",
         constraints="time 10"):
    return parse_problem(
        BASE.format(world=world, tasks=tasks, robots=robots, prob=prob,
                    mission_task=mission_task, constraints=constraints)
    )


def errors_of(spec):
    with pytest.raises(ValidationError) as info:
        validate_problem(spec)
    return info.value.problems


def test_valid_problem_passes():
    v = validate_problem(make())
    assert v.time_available == 10


def test_self_cyclic_compound():
    spec = make(tasks="compound c = { c }", mission_task="c")
    assert any("cyclic task definition" in e for e in errors_of(spec))


def test_mutual_cycle():
    spec = make(tasks="compound c1 = { c2 } compound c2 = { c1 }")
    msgs = errors_of(spec)
    assert any("cyclic" in e and "c1" in e for e in msgs)


def test_probability_out_of_range():
    assert any("1.3" in e for e in errors_of(make(prob="1.3")))


def test_duplicate_ids_reported():
    spec = make(world="loc a (9, 9)", robots="robot r at b velocity 2 { can t time 1 prob 1 }")
    msgs = errors_of(spec)
    assert any("duplicate location id 'a'" in e for e in msgs)
    assert any("duplicate robot id 'r'" in e for e in msgs)


def test_dangling_references():
    spec = make(mission_task="ghost")
    assert any("unknown task 'ghost'" in e for e in errors_of(spec))


def test_missing_time_budget():
    spec = make(constraints="maxidle all 5")
    assert any("exactly one time budget" in e for e in errors_of(spec))


def test_capability_coverage():
    spec = make(tasks="atomic heavy robots 2", mission_task="heavy",
                robots="robot s at b velocity 1 { can heavy time 1 prob 1 }")
    msgs = errors_of(spec)
    assert any("needs 2 robots but only 1" in e for e in msgs)


def test_malformed_boundary_rect():
    spec = make(constraints="time 10; boundary all (5, 0) (0, 5)")
    assert any("not well-formed" in e for e in errors_of(spec))


def test_distance_completion_euclidean_ceil():
    # a=(0,0), b=(3,4): no declared entry, filled as exactly 5
    v = validate_problem(make())
    assert v.distance("a", "b") == 5
    assert v.distance("b", "a") == 5


def test_distance_completion_never_overwrites():
    v = validate_problem(make(world="dist a b = 9"))
    assert v.distance("a", "b") == 9


def test_duplicate_distance_pair():
    spec = make(world="dist a b = 9 dist b a = 9")
    assert any("duplicate distance entry" in e for e in errors_of(spec))


def test_error_order_deterministic():
    spec = make(prob="1.3", mission_task="ghost", constraints="maxidle all 5")
    assert errors_of(spec) == errors_of(spec)


def test_travel_time_ceiling():
    v = validate_problem(make(robots="robot q at b velocity 2 { can t time 1 prob 1 }"))
    r = v.robot("q")
    # distance 5 at velocity 2 -> ceil(2.5) = 3
    assert v.travel_time(r, "a", "b") == 3
    assert v.travel_time(r, "b", "b") == 0


def test_max_idle_tightest_applies(fixtures_dir):
    v = validate_problem(
        parse_problem((fixtures_dir / "constraints.kanoa").read_text())
    )
    assert v.max_idle("beta") == 10
    assert v.max_idle("alpha") == 20
    assert v.location_allowed("gamma", "east")
    assert not v.location_allowed("gamma", "north")  # outside gamma's boundary
