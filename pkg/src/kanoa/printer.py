"""Canonical text form of a problem; parses back to an equal AST."""

from __future__ import annotations

from fractions import Fraction

from .problem import ProblemSpec


def _fmt_rational(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _fmt_prob(p: float) -> str:
    # repr() round-trips through float(); ints print bare.  The lexer has no
    # scientific notation, so fall back to plain decimal for tiny values.
    if p == int(p):
        return str(int(p))
    r = repr(p)
    if "e" in r or "E" in r:
        return f"{p:.20f}".rstrip("0")
    return r


def pretty_print(spec: ProblemSpec) -> str:
    out = []
    out.append("world {")
    for l in spec.locations:
        out.append(f"  loc {l.id} ({l.x}, {l.y})")
    for d in spec.distances:
        out.append(f"  dist {d.frm} {d.to} = {d.distance}")
    out.append("}")

    out.append("tasks {")
    for t in spec.atomic_tasks:
        out.append(f"  atomic {t.id} robots {t.robots_needed}")
    for t in spec.compound_tasks:
        marker = "ordered " if t.ordered else ""
        body = ", ".join(t.subtasks)
        out.append(f"  compound {t.id} = {marker}{{ {body} }}")
    out.append("}")

    out.append("robots {")
    for r in spec.robots:
        out.append(
            f"  robot {r.id} at {r.initial_loc} velocity {_fmt_rational(r.velocity)} {{"
        )
        for c in r.capabilities:
            out.append(
                f"    can {c.task_type_id} time {c.required_time} "
                f"prob {_fmt_prob(c.success_prob)}"
            )
        out.append("  }")
    out.append("}")

    out.append("mission {")
    for m in spec.mission_tasks:
        out.append(f"  task {m.task_id} at {m.location_id}")
    for c in spec.constraints:
        if c.kind == "timeAvailable":
            out.append(f"  time {c.budget}")
        elif c.kind == "maxIdle":
            out.append(f"  maxidle {c.subject} {c.budget}")
        elif c.kind == "boundary":
            r = c.rect
            out.append(
                f"  boundary {c.subject} ({r.x_min}, {r.y_min}) ({r.x_max}, {r.y_max})"
            )
    out.append("}")
    return "\n".join(out) + "\n"
