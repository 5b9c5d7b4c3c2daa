"""Desk-scale versions of the four experiment sweeps.

Writes fig3.csv to fig6.csv into ./output. The full-scale runs behind the
acceptance suite use the same code with more replicates; see the README
for the CLI equivalents.
"""
from pathlib import Path

from qnetsim.experiments import experiment_preset, run_experiment, write_metrics

OUT = Path("output")
OUT.mkdir(exist_ok=True)

SCALES = {
    "fig3": dict(replicates=30, nodes=(10, 20, 30, 40)),
    "fig4": dict(replicates=30),
    "fig5": dict(replicates=30),
    "fig6": dict(replicates=10, nodes=(60,), avg_degree=8.0),
}

for name, scale in SCALES.items():
    config = experiment_preset(name, base_seed=1, **scale)
    rows = run_experiment(name, config)
    path = OUT / f"{name}.csv"
    write_metrics(rows, path)
    print(f"{name}: {len(rows)} rows -> {path}")

    if name == "fig4":
        first = [r for r in rows if r.connections == 1]
        last = [r for r in rows if r.connections == rows[-1].connections]
        print(f"   one connection:   failure fraction "
              f"{first[0].final_failure_fraction:.2f} at 1 retry, "
              f"{first[-1].final_failure_fraction:.2f} at {first[-1].retries}")
        print(f"   many connections: failure fraction "
              f"{last[0].final_failure_fraction:.2f} at 1 retry, "
              f"{last[-1].final_failure_fraction:.2f} at {last[-1].retries}")
