"""Random physical topologies whose links carry history counts.

A history count (HC) records how many entangled qubits a physical link has
historically carried; the proactive layer reads these counters to decide
where fresh entanglement is worth placing. Graphs are undirected, loop-free,
and generated connected so that connection setup between any two nodes is
at least physically possible.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from random import Random


class GraphFormatError(ValueError):
    """A serialized graph failed validation; the message names the field."""


class SparsityError(RuntimeError):
    """Connectivity resampling gave up: the requested density is infeasible."""


@dataclass(frozen=True, order=True)
class PhysicalLink:
    """Undirected link between two nodes, normalized to u < v."""

    u: int
    v: int
    hc: int


class QNetGraph:
    """Undirected physical topology with one HC per link.

    Nodes are dense integers in [0, n). At most one link per pair, no
    self-loops, HCs are non-negative. HCs are the only mutable part
    (data transfers bump them); the link structure is fixed.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"node count must be >= 1, got {n}")
        self.n = n
        self._adj: dict[int, dict[int, int]] = {u: {} for u in range(n)}

    def _check_node(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise ValueError(f"node {u} out of range [0, {self.n})")

    def add_link(self, u: int, v: int, hc: int) -> None:
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise ValueError(f"self-loop at node {u}")
        if v in self._adj[u]:
            raise ValueError(f"duplicate link {min(u, v)}-{max(u, v)}")
        if hc < 0:
            raise ValueError(f"hc must be >= 0, got {hc}")
        self._adj[u][v] = hc
        self._adj[v][u] = hc

    def has_link(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, {})

    def hc(self, u: int, v: int) -> int:
        if not self.has_link(u, v):
            raise KeyError(f"no link {u}-{v}")
        return self._adj[u][v]

    def set_hc(self, u: int, v: int, hc: int) -> None:
        if not self.has_link(u, v):
            raise KeyError(f"no link {u}-{v}")
        if hc < 0:
            raise ValueError(f"hc must be >= 0, got {hc}")
        self._adj[u][v] = hc
        self._adj[v][u] = hc

    def neighbors(self, u: int) -> list[int]:
        self._check_node(u)
        return sorted(self._adj[u])

    @property
    def links(self) -> list[PhysicalLink]:
        out = [
            PhysicalLink(u, v, hc)
            for u, nbrs in self._adj.items()
            for v, hc in nbrs.items()
            if u < v
        ]
        out.sort()
        return out

    def is_connected(self) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in self._adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QNetGraph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __repr__(self) -> str:
        return f"QNetGraph(n={self.n}, links={len(self.links)})"


def degree(g: QNetGraph, u: int) -> int:
    """Number of physical links incident to u."""
    g._check_node(u)
    return len(g._adj[u])


def generate_graph(
    n: int,
    avg_degree: float,
    hc_max: int,
    rng: Random,
    max_attempts: int = 1000,
) -> QNetGraph:
    """Sample a connected G(n, p) graph with p = avg_degree / (n - 1).

    Each unordered pair becomes a link independently; disconnected samples
    are thrown away and redrawn, up to ``max_attempts``. HCs are drawn
    uniformly from {0, ..., hc_max} after a connected sample is accepted,
    in sorted link order, so a given seed always yields the same graph.
    """
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    if not 0 < avg_degree <= n - 1:
        raise ValueError(f"avg_degree must be in (0, {n - 1}], got {avg_degree}")
    if hc_max < 0:
        raise ValueError(f"hc_max must be >= 0, got {hc_max}")

    p = avg_degree / (n - 1)
    for _ in range(max_attempts):
        g = QNetGraph(n)
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < p:
                    g.add_link(u, v, 0)
        if g.is_connected():
            for link in g.links:
                g.set_hc(link.u, link.v, rng.randint(0, hc_max))
            return g
    raise SparsityError(
        f"no connected graph with n={n}, avg_degree={avg_degree} "
        f"in {max_attempts} samples"
    )


def graph_to_json(g: QNetGraph) -> str:
    payload = {
        "n": g.n,
        "edges": [{"u": l.u, "v": l.v, "hc": l.hc} for l in g.links],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def save_graph(g: QNetGraph, sink) -> None:
    """Write the graph as JSON to a path or writable file object."""
    text = graph_to_json(g)
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text)
    else:
        sink.write(text)


def load_graph(source) -> QNetGraph:
    """Read a graph from a path, file object, or JSON string.

    Round-trips with save_graph; any malformed field raises
    GraphFormatError naming the offender.
    """
    if isinstance(source, (str, Path)) and Path(str(source)).exists():
        text = Path(source).read_text()
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()

    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise GraphFormatError("top-level value must be an object")

    n = payload.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise GraphFormatError(f"field 'n' must be a positive integer, got {n!r}")
    edges = payload.get("edges")
    if not isinstance(edges, list):
        raise GraphFormatError("field 'edges' must be a list")

    g = QNetGraph(n)
    for i, edge in enumerate(edges):
        if not isinstance(edge, dict):
            raise GraphFormatError(f"edge {i}: must be an object")
        for key in ("u", "v", "hc"):
            val = edge.get(key)
            if not isinstance(val, int) or isinstance(val, bool):
                raise GraphFormatError(f"edge {i}: field '{key}' must be an integer, got {val!r}")
        u, v, hc = edge["u"], edge["v"], edge["hc"]
        if not 0 <= u < n or not 0 <= v < n:
            raise GraphFormatError(f"edge {i}: endpoint out of range [0, {n})")
        if u >= v:
            raise GraphFormatError(f"edge {i}: endpoints must satisfy u < v, got {u}, {v}")
        if hc < 0:
            raise GraphFormatError(f"edge {i}: field 'hc' must be >= 0, got {hc}")
        if g.has_link(u, v):
            raise GraphFormatError(f"edge {i}: duplicate link {u}-{v}")
        g.add_link(u, v, hc)
    return g
