"""History-driven proactive entanglement: per-node HC statistics, partner
selection, and the swap-closed overlay.

Each node looks at the HCs of its usable links (HC > 0), computes their mean,
and pairs up with the neighbor whose HC sits closest to that mean (smallest
squared deviation). The resulting pair set is then closed under swapping:
any two nodes joined by a chain of pairs become directly paired, so every
overlay component turns into a clique.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from random import Random

from .topology import QNetGraph


class EntanglementOverlay:
    """Symmetric set of node pairs that currently share usable entanglement.

    Pairs are persistent boolean facts: swapping reads pairs without
    consuming them (the underlying qubit pool is assumed replenished).
    Pairs may span nodes with no physical link between them.
    """

    def __init__(self, pairs: list[tuple[int, int]] | None = None):
        self._pairs: set[tuple[int, int]] = set()
        self._adj: dict[int, set[int]] = {}
        for u, v in pairs or []:
            self.add(u, v)

    def add(self, u: int, v: int) -> bool:
        """Record the pair {u, v}; returns True if it was new."""
        if u == v:
            raise ValueError(f"self-pair at node {u}")
        key = (u, v) if u < v else (v, u)
        if key in self._pairs:
            return False
        self._pairs.add(key)
        self._adj.setdefault(u, set()).add(v)
        self._adj.setdefault(v, set()).add(u)
        return True

    def has(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self._pairs

    def partners(self, u: int) -> list[int]:
        return sorted(self._adj.get(u, ()))

    def degree(self, u: int) -> int:
        return len(self._adj.get(u, ()))

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return sorted(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EntanglementOverlay):
            return NotImplemented
        return self._pairs == other._pairs

    def copy(self) -> "EntanglementOverlay":
        return EntanglementOverlay(self.pairs)

    def __repr__(self) -> str:
        return f"EntanglementOverlay({len(self._pairs)} pairs)"


def overlay_to_json(o: EntanglementOverlay) -> str:
    payload = {"pairs": [{"u": u, "v": v} for u, v in o.pairs]}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def save_overlay(o: EntanglementOverlay, sink) -> None:
    text = overlay_to_json(o)
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text)
    else:
        sink.write(text)


def load_overlay(source) -> EntanglementOverlay:
    if isinstance(source, (str, Path)) and Path(str(source)).exists():
        text = Path(source).read_text()
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
    payload = json.loads(text)
    o = EntanglementOverlay()
    for entry in payload["pairs"]:
        o.add(entry["u"], entry["v"])
    return o


@dataclass(frozen=True)
class HcStats:
    """Mean HC over a node's eligible links and each link's squared deviation."""

    node: int
    mean: float
    deviations: dict[int, float]


def _eligible_neighbors(g: QNetGraph, u: int) -> list[int]:
    # only links that have actually carried entanglement count (HC > 0)
    return [v for v in g.neighbors(u) if g.hc(u, v) > 0]


def mean_hc(g: QNetGraph, u: int) -> float | None:
    """Arithmetic mean of HCs over u's eligible neighbors, or None if none."""
    hcs = [g.hc(u, v) for v in _eligible_neighbors(g, u)]
    if not hcs:
        return None
    return sum(hcs) / len(hcs)


def squared_deviation(mean: float, hc: int) -> float:
    """Squared distance of one link's HC from the node's mean HC."""
    return (mean - hc) ** 2


def hc_stats(g: QNetGraph, u: int) -> HcStats | None:
    """Mean and per-neighbor squared deviations for u, or None if no
    neighbor is eligible."""
    mean = mean_hc(g, u)
    if mean is None:
        return None
    devs = {v: squared_deviation(mean, g.hc(u, v)) for v in _eligible_neighbors(g, u)}
    return HcStats(node=u, mean=mean, deviations=devs)


def select_proactive_partner(g: QNetGraph, u: int, rng: Random) -> int | None:
    """Neighbor of u with minimal squared deviation from the mean HC.

    Ties are broken uniformly at random; returns None when u has no
    eligible (HC > 0) neighbor.
    """
    stats = hc_stats(g, u)
    if stats is None:
        return None
    best = min(stats.deviations.values())
    candidates = sorted(v for v, d in stats.deviations.items() if d == best)
    if len(candidates) == 1:
        return candidates[0]
    return candidates[rng.randrange(len(candidates))]


def build_proactive_overlay(g: QNetGraph, rng: Random) -> EntanglementOverlay:
    """Every node picks its proactive partner; duplicated picks collapse.

    Nodes are processed in ascending id order, which fixes the rng
    consumption order without affecting the tie-free result set.
    """
    o = EntanglementOverlay()
    for u in range(g.n):
        partner = select_proactive_partner(g, u, rng)
        if partner is not None:
            o.add(u, partner)
    return o


def swap_closure(o: EntanglementOverlay) -> EntanglementOverlay:
    """Close the overlay under entanglement swapping.

    Repeated swaps let any two nodes connected through a chain of pairs
    share a pair directly, so each connected component becomes a clique.
    Input pairs are retained; the input overlay is not modified.
    """
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for u, v in o.pairs:
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        parent[find(u)] = find(v)

    components: dict[int, list[int]] = {}
    for node in parent:
        components.setdefault(find(node), []).append(node)

    closed = EntanglementOverlay()
    for members in components.values():
        members.sort()
        for i, u in enumerate(members):
            for v in members[i + 1 :]:
                closed.add(u, v)
    return closed
