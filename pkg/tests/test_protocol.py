import json
from random import Random

import pytest

from qnetsim.proactive import EntanglementOverlay, build_proactive_overlay, swap_closure
from qnetsim.protocol import (
    FAILURE,
    SUCCESS,
    AttemptOutcome,
    DecisionRecord,
    SetupAttemptState,
    attempt_connection,
    next_hop,
    overlay_degree,
    record_data_transfer,
    setup_connection,
    swap_cascade,
    trace_jsonl,
)
from qnetsim.sampledata import ten_node_demo
from qnetsim.topology import QNetGraph, generate_graph

from conftest import ScriptedRng


def demo_closed_overlay(demo_graph):
    return swap_closure(build_proactive_overlay(demo_graph, ScriptedRng([0, 0, 0])))


def test_overlay_degree_examples(demo_graph):
    closed = demo_closed_overlay(demo_graph)
    assert overlay_degree(closed, 0) == 2
    assert closed.partners(0) == [3, 4]
    assert overlay_degree(EntanglementOverlay(), 5) == 0
    clique = swap_closure(EntanglementOverlay([(i, i + 1) for i in range(5)]))
    assert all(overlay_degree(clique, u) == 5 for u in range(6))


def test_next_hop_forward_tie(demo_graph):
    closed = demo_closed_overlay(demo_graph)
    state = SetupAttemptState.start(3, 8, 10, 10)
    d = next_hop(state, demo_graph, closed, ScriptedRng([0]))
    assert (d.kind, d.node) == ("forward", 0)
    d = next_hop(SetupAttemptState.start(3, 8, 10, 10), demo_graph, closed, ScriptedRng([1]))
    assert (d.kind, d.node) == ("forward", 4)
    # the tie really is uniform
    picks = {0: 0, 4: 0}
    for seed in range(200):
        d = next_hop(SetupAttemptState.start(3, 8, 10, 10), demo_graph, closed, Random(seed))
        picks[d.node] += 1
    assert picks[0] > 60 and picks[4] > 60


def test_next_hop_cycle_break_entangled(demo_graph):
    # request came back to node 3 with node 0 already visited: the only
    # unvisited entangled choice is node 4, paid for from c1
    closed = demo_closed_overlay(demo_graph)
    state = SetupAttemptState(
        source=3, target=8, current=3, visited=[3, 0, 3], chain=[3], c1=10, c2=10
    )
    assert state.revisit
    d = next_hop(state, demo_graph, closed, ScriptedRng([]))
    assert (d.kind, d.node) == ("fallback_ent", 4)
    assert state.c1 == 9 and state.c2 == 10


def test_next_hop_physical_fallback_generates_pair(demo_graph):
    # node 4's entangled nodes are all visited; its one unvisited physical
    # neighbor gets a freshly generated pair, paid for from c2
    closed = demo_closed_overlay(demo_graph)
    assert not closed.has(4, 7)
    state = SetupAttemptState(
        source=3, target=8, current=4, visited=[3, 0, 3, 4], chain=[3, 4], c1=9, c2=10
    )
    assert not state.revisit
    d = next_hop(state, demo_graph, closed, ScriptedRng([]))
    assert (d.kind, d.node, d.pair_added) == ("fallback_phys", 7, True)
    assert closed.has(4, 7)
    assert state.c1 == 9 and state.c2 == 9


def test_next_hop_fail_when_budget_gone():
    g = QNetGraph(3)
    g.add_link(0, 1, 1)
    g.add_link(1, 2, 1)
    state = SetupAttemptState.start(0, 2, 0, 0)
    d = next_hop(state, g, EntanglementOverlay(), ScriptedRng([]))
    assert d.kind == "fail" and d.node is None


def test_swap_cascade_golden(demo_graph):
    closed = demo_closed_overlay(demo_graph)
    closed.add(4, 7)
    o, swaps = swap_cascade([3, 4, 7, 8], closed)
    assert swaps == 2
    assert o.has(4, 8) and o.has(3, 8)


def test_swap_cascade_trivial():
    o = EntanglementOverlay([(0, 1)])
    _, swaps = swap_cascade([0, 1], o)
    assert swaps == 0

    o = EntanglementOverlay([(0, 1), (1, 2)])
    _, swaps = swap_cascade([0, 1, 2], o)
    assert swaps == 1
    assert o.has(0, 2)


def test_swap_cascade_existing_pairs_cost_nothing():
    o = EntanglementOverlay([(0, 1), (1, 2), (2, 3), (1, 3)])
    _, swaps = swap_cascade([0, 1, 2, 3], o)
    assert swaps == 1  # {1,3} already present, only {0,3} needs a swap
    assert o.has(0, 3)


GOLDEN_TRACE = [
    ("forward", 3, 0, 10, 10),
    ("forward", 0, 3, 10, 10),
    ("fallback_ent", 3, 4, 9, 10),
    ("fallback_phys", 4, 7, 9, 9),
    ("swap", 7, 8, 9, 9),
    ("swap", 4, 8, 9, 9),
    ("success", 7, 8, 9, 9),
]


def test_attempt_golden_walkthrough(demo_graph):
    # source 3 to target 9's partner-rich corner: forced tie-breaks send the
    # request 3 -> 0 -> back to 3 (cycle) -> 4, where a generated pair to 7
    # finishes the job; two swaps then entangle 3 with 8
    closed = demo_closed_overlay(demo_graph)
    out = attempt_connection(demo_graph, closed, 3, 8, 10, 10, ScriptedRng([0, 0]))
    assert out.status == SUCCESS
    assert out.visited == [3, 0, 3, 4, 7]
    assert out.hops == 4
    assert out.qents_generated == 1
    assert out.qent_links == [(4, 7)]
    assert out.swaps == 2
    assert out.new_pairs == [(4, 7), (4, 8), (3, 8)]
    assert closed.has(3, 8) and closed.has(4, 8) and closed.has(4, 7)
    assert [(r.decision, r.at, r.to, r.c1, r.c2) for r in out.trace] == GOLDEN_TRACE


def test_attempt_source_equals_target(demo_graph):
    closed = demo_closed_overlay(demo_graph)
    out = attempt_connection(demo_graph, closed, 4, 4, 5, 5, ScriptedRng([]))
    assert out.status == SUCCESS
    assert out.trace == []
    assert out.hops == 0 and out.qents_generated == 0 and out.swaps == 0


def test_attempt_already_entangled(demo_graph):
    closed = demo_closed_overlay(demo_graph)
    out = attempt_connection(demo_graph, closed, 1, 8, 5, 5, ScriptedRng([]))
    assert out.status == SUCCESS
    assert out.qents_generated == 0 and out.swaps == 0
    assert out.visited == [1]


def test_attempt_adjacent_target_generates_one_pair():
    g = QNetGraph(2)
    g.add_link(0, 1, 0)
    o = EntanglementOverlay()
    out = attempt_connection(g, o, 0, 1, 5, 5, ScriptedRng([]))
    assert out.status == SUCCESS
    assert out.qents_generated == 1 and out.swaps == 0
    assert o.has(0, 1)


def test_exhausted_budgets_fail_every_attempt():
    g = QNetGraph(3)
    g.add_link(0, 1, 1)
    g.add_link(1, 2, 1)
    o = EntanglementOverlay()
    res = setup_connection(g, o, 0, 2, 4, 0, 0, ScriptedRng([]))
    assert not res.success
    assert res.failures == 4 and res.attempts_used == 4
    assert all(out.status == FAILURE for out in res.outcomes)


def test_setup_connection_immediate_success(demo_graph):
    closed = demo_closed_overlay(demo_graph)
    res = setup_connection(demo_graph, closed, 1, 8, 3, 5, 5, ScriptedRng([]))
    assert res.success and res.failures == 0 and res.attempts_used == 1


def test_setup_connection_rejects_zero_retries(demo_graph):
    closed = demo_closed_overlay(demo_graph)
    with pytest.raises(ValueError, match="max_retries"):
        setup_connection(demo_graph, closed, 3, 8, 0, 5, 5, ScriptedRng([]))


def test_failed_attempt_pairs_enable_retry():
    # frozen from a seed search: attempt 1 fails but generates pairs that
    # persist, and attempt 2 then succeeds
    rng = Random(342)
    g = generate_graph(10, 3.0, 15, rng)
    o = swap_closure(build_proactive_overlay(g, rng))
    before = set(o.pairs)
    s = rng.randrange(10)
    t = rng.randrange(9)
    if t >= s:
        t += 1
    assert (s, t) == (2, 1)
    res = setup_connection(g, o, s, t, 5, 2, 2, rng)
    assert res.success and res.failures == 1 and res.attempts_used == 2
    assert not res.outcomes[0].success
    assert res.outcomes[0].new_pairs  # the failed attempt still grew the overlay
    assert set(res.outcomes[0].new_pairs) <= set(o.pairs)
    assert before < set(o.pairs)


def test_record_data_transfer_golden(demo_graph):
    closed = demo_closed_overlay(demo_graph)
    res = setup_connection(demo_graph, closed, 3, 8, 1, 10, 10, ScriptedRng([0, 0]))
    assert res.success
    hc_before = demo_graph.hc(4, 7)
    record_data_transfer(demo_graph, res)
    assert demo_graph.hc(4, 7) == hc_before + 1
    record_data_transfer(demo_graph, res)
    assert demo_graph.hc(4, 7) == hc_before + 2


def test_record_data_transfer_no_generated_pairs(demo_graph):
    closed = demo_closed_overlay(demo_graph)
    res = setup_connection(demo_graph, closed, 1, 8, 1, 10, 10, ScriptedRng([]))
    assert res.success
    links_before = {(l.u, l.v): l.hc for l in demo_graph.links}
    record_data_transfer(demo_graph, res)
    assert {(l.u, l.v): l.hc for l in demo_graph.links} == links_before


def test_record_data_transfer_rejects_failure():
    g = QNetGraph(3)
    g.add_link(0, 1, 1)
    g.add_link(1, 2, 1)
    res = setup_connection(g, EntanglementOverlay(), 0, 2, 1, 0, 0, ScriptedRng([]))
    assert not res.success
    with pytest.raises(ValueError, match="successful"):
        record_data_transfer(g, res)


def replay_and_check(g, o_start, out: AttemptOutcome, source, target, c1, c2):
    """Re-walk an attempt from its trace, checking the chain and counter
    bookkeeping move for move. Returns the final replayed overlay."""
    o = o_start.copy()
    chain = [source]
    cur = source
    rc1, rc2 = c1, c2
    final_records = {"success", "fail"}
    for rec in out.trace:
        if rec.decision in ("forward", "fallback_ent", "fallback_phys"):
            assert rec.at == cur
            if rec.decision == "fallback_ent":
                rc1 -= 1
            if rec.decision == "fallback_phys":
                rc2 -= 1
                o.add(rec.at, rec.to)
            # every move must ride an existing pair
            assert o.has(rec.at, rec.to)
            if rec.to in chain:
                del chain[chain.index(rec.to) + 1 :]
            else:
                chain.append(rec.to)
            cur = rec.to
        elif rec.decision == "qent":
            assert rec.at == cur
            assert g.has_link(rec.at, rec.to)
            o.add(rec.at, rec.to)
        elif rec.decision == "swap":
            idx = chain.index(rec.at)
            node = chain[idx - 1]
            assert o.has(node, rec.at) and o.has(rec.at, rec.to)
            o.add(node, rec.to)
        assert (rc1, rc2) == (rec.c1, rec.c2)
        if rec.decision in final_records:
            break
    if out.status == SUCCESS and out.trace:
        assert o.has(source, target)
    return o


def test_randomized_invariants():
    # termination bound, overlay monotonicity, success soundness, chain
    # validity via trace replay, and determinism, across many seeded runs
    for seed in range(120):
        rng = Random(seed)
        n = rng.choice([6, 10, 16])
        g = generate_graph(n, 3.0, 15, Random(seed * 7 + 1))
        o = swap_closure(build_proactive_overlay(g, Random(seed * 7 + 2)))
        s = rng.randrange(n)
        t = rng.randrange(n - 1)
        if t >= s:
            t += 1
        c1, c2 = rng.choice([(0, 0), (1, 2), (3, 3), (n, n)])

        o_run = o.copy()
        before = set(o_run.pairs)
        out = attempt_connection(g, o_run, s, t, c1, c2, Random(seed * 7 + 3))
        after = set(o_run.pairs)

        assert out.hops <= n + c1 + c2
        assert before <= after
        assert set(out.new_pairs) == after - before
        if out.status == SUCCESS:
            assert o_run.has(s, t)
        replayed = replay_and_check(g, o, out, s, t, c1, c2)
        assert set(replayed.pairs) == after

        out2 = attempt_connection(g, o.copy(), s, t, c1, c2, Random(seed * 7 + 3))
        assert out2 == out


def test_trace_jsonl_format(demo_graph):
    closed = demo_closed_overlay(demo_graph)
    out = attempt_connection(demo_graph, closed, 3, 8, 10, 10, ScriptedRng([0, 0]))
    lines = trace_jsonl(out).strip().split("\n")
    assert len(lines) == len(out.trace)
    for line, rec in zip(lines, out.trace):
        payload = json.loads(line)
        assert set(payload) == {"at", "decision", "to", "c1", "c2"}
        assert payload["decision"] == rec.decision
        assert payload["to"] == rec.to

    empty = attempt_connection(demo_graph, closed, 2, 2, 1, 1, ScriptedRng([]))
    assert trace_jsonl(empty) == ""


def test_record_trace_flag_changes_nothing_else(demo_graph):
    closed = demo_closed_overlay(demo_graph)
    a = attempt_connection(demo_graph, closed.copy(), 3, 8, 10, 10, ScriptedRng([0, 0]))
    b = attempt_connection(
        demo_graph, closed.copy(), 3, 8, 10, 10, ScriptedRng([0, 0]), record_trace=False
    )
    assert b.trace == []
    assert (a.status, a.hops, a.qents_generated, a.swaps, a.new_pairs, a.visited) == (
        b.status, b.hops, b.qents_generated, b.swaps, b.new_pairs, b.visited,
    )
