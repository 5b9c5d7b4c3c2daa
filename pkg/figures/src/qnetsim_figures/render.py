"""Render simulator metrics tables into the four standard figure layouts.

Input is the metrics CSV the experiment sweeps write; the figure id picks
the layout and fixes the axes: fig3 is a failure-rate surface over network
size and retries, fig4 draws one failure-rate-vs-retries line per
connection count, fig5 plots the across-retry variance against the number
of connections, and fig6 overlays the normal and sparse arms. Styling is
pinned (size, dpi, colors, no timestamps) so identical inputs render
identical bytes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.figure import Figure

FIGURE_IDS = ("fig3", "fig4", "fig5", "fig6")

REQUIRED_COLUMNS = (
    "experiment",
    "nodes",
    "avg_degree",
    "connections",
    "retries",
    "replicates",
    "failure_rate",
    "final_failure_fraction",
    "variance",
)

FIG_SIZE = (6.4, 4.8)
DPI = 100


class FigureInputError(ValueError):
    """The CSV cannot back the requested figure; message says why."""


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    input_csv: str
    output_path: str

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise FigureInputError(
                f"unknown figure id {self.figure_id!r}; expected one of {FIGURE_IDS}"
            )


@dataclass(frozen=True)
class MetricsPoint:
    nodes: int
    avg_degree: float
    connections: int
    retries: int
    failure_rate: float
    final_failure_fraction: float
    variance: float


def load_points(csv_path: str | Path) -> list[MetricsPoint]:
    """Parse and validate a metrics CSV; empty or malformed input aborts."""
    path = Path(csv_path)
    if not path.exists():
        raise FigureInputError(f"input CSV not found: {path}")
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise FigureInputError(f"{path}: empty file, nothing to plot")
        missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise FigureInputError(f"{path}: missing columns {', '.join(missing)}")
        points = []
        for i, row in enumerate(reader):
            try:
                points.append(
                    MetricsPoint(
                        nodes=int(row["nodes"]),
                        avg_degree=float(row["avg_degree"]),
                        connections=int(row["connections"]),
                        retries=int(row["retries"]),
                        failure_rate=float(row["failure_rate"]),
                        final_failure_fraction=float(row["final_failure_fraction"]),
                        variance=float(row["variance"]),
                    )
                )
            except (TypeError, ValueError) as exc:
                raise FigureInputError(f"{path}: bad value in data row {i + 1}: {exc}") from exc
    if not points:
        raise FigureInputError(f"{path}: no data rows, nothing to plot")
    return points


def _fig3_surface(points: list[MetricsPoint]) -> Figure:
    node_values = sorted({p.nodes for p in points})
    retry_values = sorted({p.retries for p in points})
    rate = {(p.nodes, p.retries): p.failure_rate for p in points}
    missing = [
        (n, r) for n in node_values for r in retry_values if (n, r) not in rate
    ]
    if missing:
        raise FigureInputError(
            f"incomplete nodes x retries grid; first missing cell {missing[0]}"
        )

    fig = plt.figure(figsize=FIG_SIZE, dpi=DPI)
    ax = fig.add_subplot(projection="3d")
    xs, ys = np.meshgrid(retry_values, node_values)
    zs = np.array([[rate[(n, r)] for r in retry_values] for n in node_values])
    ax.plot_surface(xs, ys, zs, cmap="viridis", edgecolor="k", linewidth=0.3)
    ax.set_xlabel("connection retries")
    ax.set_ylabel("number of nodes")
    ax.set_zlabel("failure rate")
    ax.set_title("Single connection setup over size and retries")
    ax.view_init(elev=25, azim=-60)
    return fig


def _fig4_families(points: list[MetricsPoint]) -> Figure:
    fig, ax = plt.subplots(figsize=FIG_SIZE, dpi=DPI)
    for conns in sorted({p.connections for p in points}):
        series = sorted((p for p in points if p.connections == conns), key=lambda p: p.retries)
        ax.plot(
            [p.retries for p in series],
            [p.failure_rate for p in series],
            marker="o",
            markersize=3,
            label=f"{conns} connection{'s' if conns != 1 else ''}",
        )
    ax.set_xlabel("connection retries")
    ax.set_ylabel("failure rate")
    ax.set_title("Failure rate as connections accumulate")
    ax.legend(fontsize=7)
    ax.grid(True, alpha=0.3)
    return fig


def _fig5_variance(points: list[MetricsPoint]) -> Figure:
    variance_by_conns: dict[int, float] = {}
    for p in points:
        variance_by_conns.setdefault(p.connections, p.variance)
    conns = sorted(variance_by_conns)
    fig, ax = plt.subplots(figsize=FIG_SIZE, dpi=DPI)
    ax.plot(conns, [variance_by_conns[c] for c in conns], marker="o", color="tab:red")
    ax.set_xlabel("number of connections")
    ax.set_ylabel("failure-rate variance across retries")
    ax.set_title("Variance in setup failures vs connections")
    ax.grid(True, alpha=0.3)
    return fig


def _fig6_overlay(points: list[MetricsPoint]) -> Figure:
    degrees = sorted({p.avg_degree for p in points}, reverse=True)
    if len(degrees) != 2:
        raise FigureInputError(
            f"expected exactly two avg_degree arms, found {len(degrees)}: {degrees}"
        )
    labels = {degrees[0]: "normal", degrees[1]: "sparse"}
    fig, ax = plt.subplots(figsize=FIG_SIZE, dpi=DPI)
    for degree in degrees:
        series = sorted((p for p in points if p.avg_degree == degree), key=lambda p: p.retries)
        ax.plot(
            [p.retries for p in series],
            [p.failure_rate for p in series],
            marker="o",
            markersize=3,
            label=f"{labels[degree]} (avg degree {degree:g})",
        )
    ax.set_xlabel("connection retries")
    ax.set_ylabel("failure rate")
    ax.set_title("Normal vs sparse network")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    return fig


_BUILDERS = {
    "fig3": _fig3_surface,
    "fig4": _fig4_families,
    "fig5": _fig5_variance,
    "fig6": _fig6_overlay,
}


def build_figure(figure_id: str, points: list[MetricsPoint]) -> Figure:
    if figure_id not in _BUILDERS:
        raise FigureInputError(
            f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}"
        )
    return _BUILDERS[figure_id](points)


def render(spec: FigureSpec) -> None:
    """Read the CSV and write the raster image; nothing is written when
    validation or drawing fails."""
    points = load_points(spec.input_csv)
    fig = build_figure(spec.figure_id, points)
    target = Path(spec.output_path)
    tmp = target.with_name(target.name + ".tmp")
    try:
        # strip the writer metadata so identical inputs give identical bytes
        fig.savefig(tmp, format="png", metadata={"Software": None})
        tmp.replace(target)
    finally:
        plt.close(fig)
        tmp.unlink(missing_ok=True)
