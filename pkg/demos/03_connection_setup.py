"""One connection setup, decision by decision.

The request walks the overlay greedily (most-entangled neighbor first),
detects cycles through its piggybacked route record, and burns its two
fallback budgets to break them. Success ends with a swap cascade that
leaves source and target directly entangled; everything created on the
way persists for the next request.
"""
from random import Random

from qnetsim import (
    build_proactive_overlay,
    record_data_transfer,
    setup_connection,
    swap_closure,
    ten_node_demo,
)

g = ten_node_demo()
o = swap_closure(build_proactive_overlay(g, Random(2)))

source, target = 3, 8
print(f"connecting {source} -> {target} (entangled already? {o.has(source, target)})")

result = setup_connection(g, o, source, target, max_retries=5, c1_init=3, c2_init=3, rng=Random(5))
print(f"success={result.success} after {result.attempts_used} attempt(s), {result.failures} failure(s)\n")

for i, attempt in enumerate(result.outcomes, 1):
    print(f"attempt {i}: {attempt.status}, route record {attempt.visited}")
    for rec in attempt.trace:
        to = "-" if rec.to is None else rec.to
        print(f"    {rec.decision:<14} at={rec.at}  to={to}  budgets c1={rec.c1} c2={rec.c2}")
    print(f"    pairs generated: {attempt.qents_generated}, swaps: {attempt.swaps}, "
          f"new pairs: {attempt.new_pairs}")

print(f"\nsource-target entangled afterwards: {o.has(source, target)}")

if result.success and result.outcomes[-1].qent_links:
    link = result.outcomes[-1].qent_links[0]
    before = g.hc(*link)
    record_data_transfer(g, result)
    print(f"data transfer bumps HC of link {link}: {before} -> {g.hc(*link)}")
