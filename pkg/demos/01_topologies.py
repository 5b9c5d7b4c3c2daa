"""Generate random quantum network topologies and poke at them.

Every graph is connected by construction and every link carries a history
count (HC) recording how much entanglement it has carried before.
"""
from random import Random

from qnetsim import degree, generate_graph, load_graph, save_graph

rng = Random(7)
g = generate_graph(n=12, avg_degree=3.0, hc_max=15, rng=rng)

print(f"generated {g.n} nodes, {len(g.links)} links")
print(f"mean degree: {2 * len(g.links) / g.n:.2f}")
print("per-node degrees:", [degree(g, u) for u in range(g.n)])

print("\nfirst few links (u, v, hc):")
for link in g.links[:6]:
    print(f"  {link.u:2d} -- {link.v:2d}   hc={link.hc}")

# same seed, same network, byte for byte
again = generate_graph(n=12, avg_degree=3.0, hc_max=15, rng=Random(7))
print("\nsame seed reproduces the graph:", g == again)

save_graph(g, "/tmp/qnetsim_demo_graph.json")
print("round-trips through JSON:", load_graph("/tmp/qnetsim_demo_graph.json") == g)
