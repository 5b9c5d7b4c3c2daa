"""Proactive reuse versus reactive hop-by-hop setup.

The reactive baseline pays one fresh pair per physical hop and one swap
per intermediate node, every time. The proactive side rides whatever the
overlay already holds, so its costs shrink as the network warms up.
"""
from random import Random

from qnetsim import (
    attempt_connection,
    build_proactive_overlay,
    compare_costs,
    swap_closure,
    ten_node_demo,
)

g = ten_node_demo()
o = swap_closure(build_proactive_overlay(g, Random(2)))

# warm the overlay up with one served connection
attempt_connection(g, o, 3, 8, 10, 10, Random(5))

print(f"{'pair':>8} | {'proactive q/s/rec':>18} | {'baseline q/s/rec':>17}")
for source, target in [(0, 9), (1, 8), (5, 9), (0, 6)]:
    c = compare_costs(g, o, source, target, Random(1))
    pro = f"{c.proactive_qents}/{c.proactive_swaps}/{c.proactive_path_record_len}"
    base = f"{c.baseline_qents}/{c.baseline_swaps}/{c.baseline_path_record_len}"
    print(f"{source:>3}->{target:<3} | {pro:>18} | {base:>17}")

print("\n(q/s/rec = fresh pairs / swaps / carried route record length)")
