"""Measure how evaluation cost grows with robot-cluster size.

Rebuilds the cleaning mission with one, two, and three cleaner robots and
times the mean per-chromosome evaluation.  Writes docs/benchmark.md.
"""

import time
from pathlib import Path

from kanoa import AllocatorConfig, GaConfig, parse_problem, validate_problem
from kanoa.optimizer import evaluate, prepare_search

HERE = Path(__file__).parent

VARIANT = """
world {{
  loc room2 (6, 0)
  loc room3 (12, 0)
  loc room4 (0, 7)
  loc room5 (6, 7)
  loc dock (12, 3)
}}
tasks {{
  atomic at2_floor robots 1
  atomic at3_sanit robots 1
  atomic at4_notify robots 1
  compound ct1_clean = {{ at2_floor, at3_sanit }}
  compound ct2_patient = ordered {{ at4_notify, ct1_clean }}
}}
robots {{
{robots}
}}
mission {{
  task ct2_patient at room2
  task ct2_patient at room3
  task ct2_patient at room4
  task ct2_patient at room5
  time 200
}}
"""

CLEANER = """  robot r{i} at dock velocity 1 {{
    can at4_notify time 2 prob 0.9
    can at2_floor time 8 prob 0.9
    can at3_sanit time 5 prob 0.9
  }}"""


def measure(nrobots: int):
    robots = "\n".join(CLEANER.format(i=i + 3) for i in range(nrobots))
    v = validate_problem(parse_problem(VARIANT.format(robots=robots)))
    cfg = GaConfig(population_size=8, generations=2,
                   permutations_per_allocation=5, seed=0)
    space = prepare_search(v, AllocatorConfig(max_allocations=5), cfg)
    cache = {}
    t0 = time.perf_counter()
    for ch in space.chromosomes():
        evaluate(space, ch, cache)
    per = (time.perf_counter() - t0) / len(cache)
    feasible = sum(1 for r in cache.values() if r.feasible)
    biggest = max((len(c.robots) for cl in space.clusters for c in cl), default=0)
    return per, len(cache), feasible, biggest


rows = []
for n in (1, 2, 3):
    per, total, feasible, biggest = measure(n)
    rows.append((n, per * 1000, total, feasible, biggest))
    print(f"{n} cleaner(s): {per * 1000:7.2f} ms/chromosome  "
          f"({feasible}/{total} feasible, largest cluster {biggest})")

doc = ["# Scaling benchmark", ""]
doc.append("Mean wall-clock time per evaluated chromosome as the cleaning")
doc.append("mission is given one, two, and three cleaner robots.  Larger")
doc.append("clusters mean larger scheduling models, so the cost per")
doc.append("chromosome grows monotonically with cluster size.  Absolute")
doc.append("numbers are machine-specific; the trend is the point.")
doc.append("")
doc.append("| cleaners | ms / chromosome | chromosomes | feasible | largest cluster |")
doc.append("|---------:|----------------:|------------:|---------:|----------------:|")
for n, ms, total, feasible, biggest in rows:
    doc.append(f"| {n} | {ms:.2f} | {total} | {feasible} | {biggest} |")
doc.append("")
doc.append("Regenerate with `python3 demos/benchmark_scaling.py`.")

out = HERE.parent / "docs" / "benchmark.md"
out.parent.mkdir(exist_ok=True)
out.write_text("\n".join(doc) + "\n")
print(f"\nwrote {out}")
