"""End-to-end pipeline: parse, plan, and write result artifacts."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .allocation import AllocatorConfig
from .gantt import emit_gantt, format_gantt_text
from .mdp import DEFAULT_STATE_CAP, build_mdp
from .mdp_export import write_mdp_text
from .optimizer import GaConfig, ParetoFront, nsga2_run, prepare_search
from .parser import parse_problem
from .permutations import PermutationSet
from .plans import check_plan
from .printer import pretty_print
from .taskgraph import debug_report, expand_mission
from .validation import validate_problem

__all__ = [
    "PipelineConfig",
    "RunReport",
    "run",
    "pretty_print",
    "parse_problem",
    "validate_problem",
]


@dataclass(frozen=True)
class PipelineConfig:
    allocations: int = 30
    permutations: int = 20
    population: int = 50
    generations: int = 5
    seed: int = 0
    state_cap: int = DEFAULT_STATE_CAP
    dump_allocations: bool = False
    dump_mdp: bool = False

    def ga(self) -> GaConfig:
        return GaConfig(
            population_size=self.population,
            generations=self.generations,
            permutations_per_allocation=self.permutations,
            seed=self.seed,
        )

    def echo(self) -> dict:
        return {
            "allocations": self.allocations,
            "permutations": self.permutations,
            "population": self.population,
            "generations": self.generations,
            "seed": self.seed,
            "state_cap": self.state_cap,
        }


@dataclass
class RunReport:
    config: dict
    allocation_count: int
    cluster_summary: list[str]
    front: ParetoFront
    timings: dict[str, float] = field(default_factory=dict)

    def rows(self) -> list[dict]:
        return [
            {
                "Allocation": e.chromosome.alloc_idx,
                "Permutation": e.chromosome.perm_idx,
                "Probability of failure": e.objectives.p_fail,
                "Idling": e.objectives.idle,
                "Travel": e.objectives.travel,
            }
            for e in self.front.entries
        ]


def run(input_path, cfg: PipelineConfig, out_dir) -> RunReport:
    """Plan a mission file and write artifacts into ``out_dir``.

    Writes pareto.csv / pareto.json, one plan_<k>.json and plan_<k>.svg per
    front entry, instances.json, and report.txt.  Raises the underlying
    error on bad input or an empty feasible set; the CLI maps those to
    exit codes.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    text = Path(input_path).read_text(encoding="utf-8")
    spec = parse_problem(text)
    timings["parse"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    v = validate_problem(spec)
    timings["validate"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    tree, pairs = expand_mission(v)
    (out / "instances.json").write_text(
        json.dumps(debug_report(tree, pairs), indent=2) + "\n", encoding="utf-8"
    )
    timings["expand"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    space = prepare_search(
        v,
        AllocatorConfig(max_allocations=cfg.allocations),
        cfg.ga(),
        state_cap=cfg.state_cap,
    )
    timings["allocate"] = time.perf_counter() - t0

    if cfg.dump_allocations:
        payload = [
            {inst: sorted(robots) for inst, robots in sorted(a.assignments.items())}
            for a in space.allocations
        ]
        (out / "allocations.json").write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8"
        )

    t0 = time.perf_counter()
    front = nsga2_run(space, cfg.ga())
    timings["optimize"] = time.perf_counter() - t0

    idle_caps = {
        r.id: v.max_idle(r.id)
        for r in v.problem.robots
        if v.max_idle(r.id) is not None
    }
    for k, entry in enumerate(front.entries):
        problems = check_plan(
            entry.plan, space.pairs, v.time_available, idle_caps
        )
        if problems:
            raise AssertionError(
                f"front entry {k} produced an unsound plan: {problems}"
            )
        (out / f"plan_{k}.json").write_text(
            json.dumps(
                {
                    "allocation": entry.chromosome.alloc_idx,
                    "permutation": entry.chromosome.perm_idx,
                    "objectives": {
                        "probability_of_failure": entry.objectives.p_fail,
                        "idling": entry.objectives.idle,
                        "travel": entry.objectives.travel,
                    },
                    "timelines": entry.plan.to_dict(),
                },
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
        (out / f"plan_{k}.svg").write_text(
            emit_gantt(entry.plan, title=f"plan_{k}"), encoding="utf-8"
        )

    if cfg.dump_mdp:
        _dump_front_models(space, front, out)

    cluster_summary = [
        f"allocation {i}: "
        + ", ".join(
            "{" + ",".join(sorted(c.robots)) + "}" for c in space.clusters[i]
        )
        for i in range(len(space.allocations))
    ]
    report = RunReport(
        config=cfg.echo(),
        allocation_count=len(space.allocations),
        cluster_summary=cluster_summary,
        front=front,
        timings=timings,
    )

    (out / "pareto.csv").write_text(render_csv(report), encoding="utf-8")
    (out / "pareto.json").write_text(render_json(report), encoding="utf-8")
    (out / "report.txt").write_text(render_text(report, front), encoding="utf-8")
    return report


def _dump_front_models(space, front: ParetoFront, out: Path):
    for entry in front.entries:
        a = entry.chromosome.alloc_idx
        p = entry.chromosome.perm_idx
        allocation = space.allocations[a]
        permutation = space.permutations[a][p]
        for ci, cluster in enumerate(space.clusters[a]):
            restricted = PermutationSet(
                {r: permutation.per_robot[r] for r in sorted(cluster.robots)}
            )
            mdp = build_mdp(
                space.v,
                allocation,
                cluster,
                restricted,
                space.pairs,
                space.instances,
                time_available=space.time_available,
                state_cap=space.state_cap,
            )
            (out / f"mdp_{a}_{p}_{ci}.txt").write_text(
                write_mdp_text(mdp), encoding="utf-8"
            )


def render_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["Allocation", "Permutation", "Probability of failure", "Idling", "Travel"]
    )
    for row in report.rows():
        writer.writerow(
            [
                row["Allocation"],
                row["Permutation"],
                repr(row["Probability of failure"]),
                row["Idling"],
                row["Travel"],
            ]
        )
    return buf.getvalue()


def render_json(report: RunReport) -> str:
    entries = [
        {
            "allocation": row["Allocation"],
            "permutation": row["Permutation"],
            "probability_of_failure": row["Probability of failure"],
            "idling": row["Idling"],
            "travel": row["Travel"],
        }
        for row in report.rows()
    ]
    return json.dumps({"entries": entries}, indent=2) + "\n"


def render_text(report: RunReport, front: ParetoFront) -> str:
    lines = ["mission planning report", ""]
    lines.append("config: " + json.dumps(report.config))
    lines.append(f"allocations searched: {report.allocation_count}")
    lines.append("")
    lines.append("clusters:")
    lines.extend("  " + s for s in report.cluster_summary)
    lines.append("")
    lines.append("pareto front:")
    lines.append("  alloc  perm  p_fail        idle  travel")
    for e in front.entries:
        lines.append(
            f"  {e.chromosome.alloc_idx:>5}  {e.chromosome.perm_idx:>4}  "
            f"{e.objectives.p_fail:<12.8f}  {e.objectives.idle:>4}  "
            f"{e.objectives.travel:>6}"
        )
    lines.append("")
    for k, e in enumerate(front.entries):
        lines.append(f"plan_{k} (allocation {e.chromosome.alloc_idx}, "
                     f"permutation {e.chromosome.perm_idx}):")
        lines.append(format_gantt_text(e.plan))
    lines.append("timings (s):")
    for stage, secs in report.timings.items():
        lines.append(f"  {stage}: {secs:.3f}")
    return "\n".join(lines) + "\n"
