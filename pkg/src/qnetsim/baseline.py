"""Reactive connection setup used as the cost baseline.

Nothing is prepared ahead of time: when a request arrives, entanglement is
generated hop by hop along the shortest physical route and then swapped
end to end. Costs are therefore a pure function of path length, which is
what the proactive scheme is measured against.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from random import Random

from .proactive import EntanglementOverlay
from .protocol import attempt_connection
from .topology import QNetGraph


@dataclass(frozen=True)
class BaselineOutcome:
    """Costs of one reactive setup: h hops cost h pairs and h-1 swaps."""

    qents_generated: int
    swaps: int
    path_record_len: int
    path: tuple[int, ...]


def shortest_physical_path(g: QNetGraph, source: int, target: int) -> list[int]:
    """Minimum-hop physical route, deterministic.

    Among equally short routes, each step takes the smallest-id neighbor
    that still lies on a shortest path (computed from a BFS toward the
    target), so repeated runs agree byte for byte.
    """
    g._check_node(source)
    g._check_node(target)
    if source == target:
        return [source]

    dist = {target: 0}
    queue = deque([target])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    if source not in dist:
        raise ValueError(f"no physical path from {source} to {target}")

    path = [source]
    current = source
    while current != target:
        current = min(v for v in g.neighbors(current) if dist.get(v) == dist[current] - 1)
        path.append(current)
    return path


def ietf_reactive_setup(g: QNetGraph, source: int, target: int) -> BaselineOutcome:
    """Generate one pair per path edge, then swap the chain down to one
    end-to-end pair. The setup message carries the full node path."""
    if source == target:
        raise ValueError("source and target must differ")
    path = shortest_physical_path(g, source, target)
    hops = len(path) - 1
    return BaselineOutcome(
        qents_generated=hops,
        swaps=hops - 1,
        path_record_len=len(path),
        path=tuple(path),
    )


@dataclass(frozen=True)
class CostComparison:
    """Side-by-side operation counts for one source/target request."""

    source: int
    target: int
    proactive_success: bool
    proactive_qents: int
    proactive_swaps: int
    proactive_path_record_len: int
    baseline_qents: int
    baseline_swaps: int
    baseline_path_record_len: int


def compare_costs(
    g: QNetGraph,
    o: EntanglementOverlay,
    source: int,
    target: int,
    rng: Random,
) -> CostComparison:
    """Run one proactive attempt and the reactive baseline on copies of
    the current state and report both cost records."""
    proactive = attempt_connection(
        g, o.copy(), source, target, c1_init=g.n, c2_init=g.n, rng=rng
    )
    baseline = ietf_reactive_setup(g, source, target)
    return CostComparison(
        source=source,
        target=target,
        proactive_success=proactive.success,
        proactive_qents=proactive.qents_generated,
        proactive_swaps=proactive.swaps,
        proactive_path_record_len=len(proactive.visited),
        baseline_qents=baseline.qents_generated,
        baseline_swaps=baseline.swaps,
        baseline_path_record_len=baseline.path_record_len,
    )
