"""Hand-built demo network used by the golden tests and the demo scripts.

Ten nodes, nine links. HCs are chosen so the proactive layer behaves in
every interesting way at once: node 7 has four eligible neighbors with a
unique best pick, nodes 3, 4 and 8 face exact ties, nodes 5 and 6 have a
single link, and nodes 2 and 9 sit behind zero-HC links so they select no
partner at all.
"""

from __future__ import annotations

from .topology import QNetGraph

# (u, v, hc) with u < v
DEMO_LINKS = [
    (0, 3, 6),
    (1, 2, 0),
    (1, 8, 9),
    (3, 4, 8),
    (4, 7, 11),
    (5, 7, 4),
    (6, 7, 3),
    (7, 8, 5),
    (8, 9, 0),
]


def ten_node_demo() -> QNetGraph:
    g = QNetGraph(10)
    for u, v, hc in DEMO_LINKS:
        g.add_link(u, v, hc)
    return g
