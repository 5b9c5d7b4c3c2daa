"""Seeded sweep harness: failure statistics over network size, retry
budget, connection count, and sparsity.

Every replicate owns a single random stream seeded with base_seed + i and
consumes it in a fixed order: graph coin flips, link HCs, proactive
tie-breaks, then per connection the endpoint draw followed by the
protocol's draws. Because nothing downstream of a draw feeds back into
earlier draws, a replicate's first k connections (and a connection's first
k attempts) are identical regardless of how many more follow; the sweeps
exploit that to derive whole axes from one run per seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from random import Random
from statistics import pvariance
from typing import Sequence

from .proactive import build_proactive_overlay, swap_closure
from .protocol import DEFAULT_CYCLE_BREAK_BUDGET, setup_connection
from .topology import generate_graph

CSV_HEADER = (
    "experiment,nodes,avg_degree,connections,retries,replicates,"
    "failure_rate,final_failure_fraction,variance"
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep parameters; axes are given as explicit value lists."""

    nodes: tuple[int, ...]
    retries: tuple[int, ...]
    connections: int
    avg_degree: float
    hc_max: int
    replicates: int
    base_seed: int
    c1_init: int = DEFAULT_CYCLE_BREAK_BUDGET
    c2_init: int = DEFAULT_CYCLE_BREAK_BUDGET

    def __post_init__(self):
        if not self.nodes or not self.retries:
            raise ValueError("nodes and retries lists must be non-empty")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.connections < 0:
            raise ValueError(f"connections must be >= 0, got {self.connections}")
        if any(r < 1 for r in self.retries):
            raise ValueError("every retries value must be >= 1")


@dataclass(frozen=True)
class ConnectionStats:
    """Lightweight per-connection outcome kept by the sweeps."""

    failures: int
    success: bool

    @property
    def attempts(self) -> int:
        return self.failures + (1 if self.success else 0)


@dataclass(frozen=True)
class MetricsRow:
    experiment: str
    nodes: int
    avg_degree: float
    connections: int
    retries: int
    replicates: int
    failure_rate: float
    final_failure_fraction: float
    variance: float

    @property
    def success_rate(self) -> float:
        return 1.0 - self.final_failure_fraction


@dataclass(frozen=True)
class CellCounts:
    """Raw tallies for one sweep cell, before rates are formed."""

    nodes: int
    avg_degree: float
    connections: int
    retries: int
    replicates: int
    total_attempts: int
    failed_attempts: int
    total_connections: int
    unserved_connections: int


def run_replicate(
    nodes: int,
    avg_degree: float,
    hc_max: int,
    connections: int,
    max_retries: int,
    seed: int,
    c1_init: int | None = None,
    c2_init: int | None = None,
) -> list[ConnectionStats]:
    """One full replicate: build a network, distribute entanglement
    proactively, then serve ``connections`` sequential requests between
    uniformly random distinct ordered pairs on the shared, growing overlay.
    """
    rng = Random(seed)
    g = generate_graph(nodes, avg_degree, hc_max, rng)
    o = swap_closure(build_proactive_overlay(g, rng))
    c1 = DEFAULT_CYCLE_BREAK_BUDGET if c1_init is None else c1_init
    c2 = DEFAULT_CYCLE_BREAK_BUDGET if c2_init is None else c2_init

    out: list[ConnectionStats] = []
    for _ in range(connections):
        s = rng.randrange(nodes)
        t = rng.randrange(nodes - 1)
        if t >= s:
            t += 1
        result = setup_connection(
            g, o, s, t, max_retries, c1, c2, rng, record_trace=False
        )
        out.append(ConnectionStats(result.failures, result.success))
    return out


def population_variance(values: Sequence[float]) -> float:
    """Variance with ddof=0; a single value has variance 0."""
    vals = list(values)
    if len(vals) < 2:
        return 0.0
    return pvariance(vals)


def summarize(experiment: str, cells: Sequence[CellCounts]) -> list[MetricsRow]:
    """Turn raw cell tallies into metric rows.

    failure_rate is failed attempts over all attempts; the final-failure
    fraction is the share of connections that never succeeded within
    their retry budget. The variance column is the population variance of
    failure_rate across the retry axis, repeated on every row of its
    (nodes, avg_degree, connections) group. Output order is canonical.
    """
    rates: dict[tuple, dict[int, float]] = {}
    prelim = []
    for cell in cells:
        fr = cell.failed_attempts / cell.total_attempts if cell.total_attempts else 0.0
        fff = (
            cell.unserved_connections / cell.total_connections
            if cell.total_connections
            else 0.0
        )
        group = (cell.nodes, cell.avg_degree, cell.connections)
        rates.setdefault(group, {})[cell.retries] = fr
        prelim.append((cell, fr, fff))

    rows = [
        MetricsRow(
            experiment=experiment,
            nodes=cell.nodes,
            avg_degree=cell.avg_degree,
            connections=cell.connections,
            retries=cell.retries,
            replicates=cell.replicates,
            failure_rate=fr,
            final_failure_fraction=fff,
            variance=population_variance(
                list(rates[(cell.nodes, cell.avg_degree, cell.connections)].values())
            ),
        )
        for cell, fr, fff in prelim
    ]
    rows.sort(key=lambda r: (r.nodes, r.avg_degree, r.connections, r.retries))
    return rows


def _first_success_attempt(
    nodes: int,
    avg_degree: float,
    hc_max: int,
    retry_cap: int,
    seed: int,
    c1_init: int | None = None,
    c2_init: int | None = None,
) -> int | None:
    """Attempt index (1-based) at which the replicate's single connection
    first succeeds, or None if it never does within retry_cap."""
    stats = run_replicate(
        nodes, avg_degree, hc_max, 1, retry_cap, seed, c1_init=c1_init, c2_init=c2_init
    )
    (cs,) = stats
    return cs.attempts if cs.success else None


def run_single_connection_sweep(config: ExperimentConfig) -> list[MetricsRow]:
    """Failure grid over (nodes x retries) for the first connection.

    One run per (nodes, seed) at the largest retry budget fixes the whole
    retry axis: a budget of r succeeds exactly when the first success came
    at attempt <= r, and a connection still unserved at attempt r has
    failed r times. This matches per-budget runs draw for draw.
    """
    retry_cap = max(config.retries)
    cells = []
    for n in config.nodes:
        firsts = [
            _first_success_attempt(
                n, config.avg_degree, config.hc_max, retry_cap, config.base_seed + i,
                c1_init=config.c1_init, c2_init=config.c2_init,
            )
            for i in range(config.replicates)
        ]
        for r in config.retries:
            attempts = failed = unserved = 0
            for k in firsts:
                if k is not None and k <= r:
                    attempts += k
                    failed += k - 1
                else:
                    attempts += r
                    failed += r
                    unserved += 1
            cells.append(
                CellCounts(
                    nodes=n,
                    avg_degree=config.avg_degree,
                    connections=1,
                    retries=r,
                    replicates=config.replicates,
                    total_attempts=attempts,
                    failed_attempts=failed,
                    total_connections=config.replicates,
                    unserved_connections=unserved,
                )
            )
    return summarize("fig3", cells)


def default_connection_counts(connections: int) -> tuple[int, ...]:
    ladder = (1, 2, 3, 4, 5, 7, 10, 15, 20, 25, 30, 40, 50)
    counts = sorted({c for c in ladder if c <= connections} | {connections})
    return tuple(counts)


def run_multi_connection_sweep(
    config: ExperimentConfig,
    connection_counts: Sequence[int] | None = None,
    experiment: str = "fig4",
) -> list[MetricsRow]:
    """Failure rates on a fixed-size network as more connections share the
    overlay, per retry budget.

    Each (retries, seed) pair is simulated once at the full connection
    count; every shorter count is a prefix of that run, so its statistics
    come for free and agree exactly with a dedicated shorter run.
    """
    if len(config.nodes) != 1:
        raise ValueError("multi-connection sweep expects a single nodes value")
    n = config.nodes[0]
    counts = tuple(connection_counts or default_connection_counts(config.connections))
    if any(c < 1 or c > config.connections for c in counts):
        raise ValueError(f"connection counts must lie in [1, {config.connections}]")

    cells = []
    for r in config.retries:
        reps = [
            run_replicate(
                n, config.avg_degree, config.hc_max, config.connections, r,
                config.base_seed + i, c1_init=config.c1_init, c2_init=config.c2_init,
            )
            for i in range(config.replicates)
        ]
        for c in counts:
            attempts = failed = unserved = 0
            for rep in reps:
                for cs in rep[:c]:
                    attempts += cs.attempts
                    failed += cs.failures
                    unserved += 0 if cs.success else 1
            cells.append(
                CellCounts(
                    nodes=n,
                    avg_degree=config.avg_degree,
                    connections=c,
                    retries=r,
                    replicates=config.replicates,
                    total_attempts=attempts,
                    failed_attempts=failed,
                    total_connections=config.replicates * c,
                    unserved_connections=unserved,
                )
            )
    return summarize(experiment, cells)


def run_sparsity_comparison(config: ExperimentConfig) -> list[MetricsRow]:
    """Failure rates at the configured density versus half that density,
    same seeds in both arms; rows are told apart by their avg_degree."""
    if len(config.nodes) != 1:
        raise ValueError("sparsity comparison expects a single nodes value")
    n = config.nodes[0]
    cells = []
    for deg in (config.avg_degree, config.avg_degree / 2):
        for r in config.retries:
            attempts = failed = unserved = 0
            for i in range(config.replicates):
                for cs in run_replicate(
                    n, deg, config.hc_max, config.connections, r, config.base_seed + i,
                    c1_init=config.c1_init, c2_init=config.c2_init,
                ):
                    attempts += cs.attempts
                    failed += cs.failures
                    unserved += 0 if cs.success else 1
            cells.append(
                CellCounts(
                    nodes=n,
                    avg_degree=deg,
                    connections=config.connections,
                    retries=r,
                    replicates=config.replicates,
                    total_attempts=attempts,
                    failed_attempts=failed,
                    total_connections=config.replicates * config.connections,
                    unserved_connections=unserved,
                )
            )
    return summarize("fig6", cells)


def connection_failure_profile(
    nodes: int,
    avg_degree: float,
    hc_max: int,
    connections: int,
    max_retries: int,
    replicates: int,
    base_seed: int,
    c1_init: int | None = None,
    c2_init: int | None = None,
) -> list[float]:
    """Mean failed attempts at each connection index, averaged over
    replicates; the overlay's learning effect shows up as a downward trend."""
    totals = [0] * connections
    for i in range(replicates):
        rep = run_replicate(
            nodes, avg_degree, hc_max, connections, max_retries, base_seed + i,
            c1_init=c1_init, c2_init=c2_init,
        )
        for j, cs in enumerate(rep):
            totals[j] += cs.failures
    return [t / replicates for t in totals]


EXPERIMENT_NAMES = ("fig3", "fig4", "fig5", "fig6")

# Per-experiment defaults. Densities are chosen so connectivity resampling
# stays cheap at the largest swept size (halving fig6's 10.0 must still
# leave n=100 connectable), while small fixed-size sweeps keep the sparser
# default where failure statistics are richest.
_PRESETS = {
    "fig3": dict(nodes=tuple(range(10, 101, 10)), connections=1, avg_degree=6.0),
    "fig4": dict(nodes=(20,), connections=50, avg_degree=3.0),
    "fig5": dict(nodes=(20,), connections=50, avg_degree=3.0),
    "fig6": dict(nodes=(100,), connections=50, avg_degree=10.0),
}


def experiment_preset(
    name: str,
    replicates: int = 100,
    base_seed: int = 0,
    nodes: Sequence[int] | None = None,
    retries: Sequence[int] | None = None,
    connections: int | None = None,
    avg_degree: float | None = None,
    hc_max: int = 15,
    c1_init: int = DEFAULT_CYCLE_BREAK_BUDGET,
    c2_init: int = DEFAULT_CYCLE_BREAK_BUDGET,
) -> ExperimentConfig:
    """Config for one of the four named experiments, with overridable axes."""
    if name not in _PRESETS:
        raise ValueError(f"unknown experiment {name!r}; expected one of {EXPERIMENT_NAMES}")
    preset = _PRESETS[name]
    return ExperimentConfig(
        nodes=tuple(nodes) if nodes is not None else preset["nodes"],
        retries=tuple(retries) if retries is not None else tuple(range(1, 11)),
        connections=connections if connections is not None else preset["connections"],
        avg_degree=avg_degree if avg_degree is not None else preset["avg_degree"],
        hc_max=hc_max,
        replicates=replicates,
        base_seed=base_seed,
        c1_init=c1_init,
        c2_init=c2_init,
    )


def run_experiment(name: str, config: ExperimentConfig) -> list[MetricsRow]:
    """Run one named experiment and return its metric rows."""
    if name == "fig3":
        return run_single_connection_sweep(config)
    if name == "fig4":
        return run_multi_connection_sweep(config, experiment="fig4")
    if name == "fig5":
        return run_multi_connection_sweep(config, experiment="fig5")
    if name == "fig6":
        return run_sparsity_comparison(config)
    raise ValueError(f"unknown experiment {name!r}; expected one of {EXPERIMENT_NAMES}")


def _row_values(row: MetricsRow) -> list:
    return [
        row.experiment,
        row.nodes,
        row.avg_degree,
        row.connections,
        row.retries,
        row.replicates,
        row.failure_rate,
        row.final_failure_fraction,
        row.variance,
    ]


def metrics_to_csv(rows: Sequence[MetricsRow]) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(str(v) for v in _row_values(row)))
    return "\n".join(lines) + "\n"


def metrics_to_json(rows: Sequence[MetricsRow]) -> str:
    keys = CSV_HEADER.split(",")
    payload = [dict(zip(keys, _row_values(row))) for row in rows]
    return json.dumps(payload, indent=2) + "\n"


def write_metrics(rows: Sequence[MetricsRow], sink, fmt: str = "csv") -> None:
    if fmt == "csv":
        text = metrics_to_csv(rows)
    elif fmt == "json":
        text = metrics_to_json(rows)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text)
    else:
        sink.write(text)
