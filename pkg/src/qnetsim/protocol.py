"""Connection setup over the entanglement overlay.

A setup request walks the overlay from source toward target, preferring the
entangled neighbor with the most entanglements of its own. The request may
be forwarded onto a node it already visited: the revisited node notices
itself in the piggybacked route record, declares a cycle, and breaks it by
jumping to a random unvisited entangled node (first counter) or by
generating a fresh entanglement to a physical neighbor (second counter).
Arriving within one step of the target (shared pair, or physical adjacency
plus one generated pair) finishes the walk: a cascade of swaps along the
forwarding chain leaves the source directly entangled with the target.
Every pair created along the way persists, whether or not the attempt
succeeds, which is what makes retries and later connections cheaper.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random

from .proactive import EntanglementOverlay
from .topology import QNetGraph

SUCCESS = "success"
FAILURE = "failure"

# Per-attempt cycle-break budget that keeps failure statistics in the
# interesting regime: generous budgets (say, the node count) let nearly
# every attempt succeed and flatten every sweep to zero.
DEFAULT_CYCLE_BREAK_BUDGET = 3

FORWARD = "forward"
FALLBACK_ENT = "fallback_ent"
FALLBACK_PHYS = "fallback_phys"
QENT = "qent"
SWAP = "swap"
FAIL = "fail"


def overlay_degree(o: EntanglementOverlay, u: int) -> int:
    """How many distinct nodes u currently shares entanglement with."""
    return o.degree(u)


@dataclass
class SetupAttemptState:
    """One in-flight attempt: position, route record, chain, and budgets.

    ``visited`` lists every arrival in order (revisits repeat); ``chain``
    is the swap backbone, consecutive entries always sharing an overlay
    pair, with cycles spliced out as they are detected. ``c1`` budgets
    cycle-breaks via random entangled nodes, ``c2`` budgets cycle-breaks
    that generate a fresh pair toward a physical neighbor.
    """

    source: int
    target: int
    current: int
    visited: list[int]
    chain: list[int]
    c1: int
    c2: int
    visited_set: set[int] = field(default_factory=set)
    revisit: bool = False

    def __post_init__(self):
        if not self.visited_set:
            self.visited_set = set(self.visited)
        if not self.revisit:
            self.revisit = self.visited.count(self.current) > 1

    @classmethod
    def start(cls, source: int, target: int, c1: int, c2: int) -> "SetupAttemptState":
        return cls(
            source=source,
            target=target,
            current=source,
            visited=[source],
            chain=[source],
            c1=c1,
            c2=c2,
        )

    def advance(self, v: int) -> None:
        """Move the request to v, maintaining route record and chain."""
        self.revisit = v in self.visited_set
        self.visited.append(v)
        self.visited_set.add(v)
        if v in self.chain:
            # the chain just closed a loop; splice the loop out
            del self.chain[self.chain.index(v) + 1 :]
        else:
            self.chain.append(v)
        self.current = v


@dataclass(frozen=True)
class Decision:
    """Outcome of one next-hop choice."""

    kind: str  # forward | fallback_ent | fallback_phys | fail
    node: int | None
    pair_added: bool = False  # fallback_phys: generated pair was new to the overlay


@dataclass(frozen=True)
class DecisionRecord:
    at: int
    decision: str
    to: int | None
    c1: int
    c2: int


@dataclass
class AttemptOutcome:
    """Per-attempt result: status, operation counts, and decision trace."""

    status: str
    hops: int
    qents_generated: int
    swaps: int
    new_pairs: list[tuple[int, int]]
    qent_links: list[tuple[int, int]]
    visited: list[int]
    trace: list[DecisionRecord]

    @property
    def success(self) -> bool:
        return self.status == SUCCESS


@dataclass
class ConnectionResult:
    """Aggregate over the retries of one connection request."""

    source: int
    target: int
    success: bool
    attempts_used: int
    failures: int
    outcomes: list[AttemptOutcome]


def next_hop(
    state: SetupAttemptState,
    g: QNetGraph,
    o: EntanglementOverlay,
    rng: Random,
) -> Decision:
    """Choose where the request at ``state.current`` goes next.

    First arrival with an unvisited entangled neighbor available: forward
    to the entangled neighbor with maximal overlay degree, visited or not,
    ties uniform (a forward onto a visited node is how cycles happen; the
    revisited node detects them). On a revisit, or when every entangled
    neighbor has been visited already, the cycle-break budgets take over:
    c1 buys a jump to a random unvisited entangled node, c2 buys a fresh
    pair to a random physical neighbor. With c2 exhausted the attempt is
    lost. Counter decrements and the generated pair are applied in place.
    """
    u = state.current
    entangled = o.partners(u)
    unvisited_ent = [v for v in entangled if v not in state.visited_set]

    if not state.revisit and unvisited_ent:
        best = max(o.degree(v) for v in entangled)
        candidates = [v for v in entangled if o.degree(v) == best]
        v = candidates[0] if len(candidates) == 1 else candidates[rng.randrange(len(candidates))]
        return Decision(FORWARD, v)

    if state.revisit and state.c1 > 0 and unvisited_ent:
        v = (
            unvisited_ent[0]
            if len(unvisited_ent) == 1
            else unvisited_ent[rng.randrange(len(unvisited_ent))]
        )
        state.c1 -= 1
        return Decision(FALLBACK_ENT, v)

    if state.c2 > 0:
        phys = g.neighbors(u)
        pool = [v for v in phys if v not in state.visited_set] or phys
        v = pool[0] if len(pool) == 1 else pool[rng.randrange(len(pool))]
        state.c2 -= 1
        added = o.add(u, v)
        return Decision(FALLBACK_PHYS, v, pair_added=added)

    return Decision(FAIL, None)


def swap_cascade(
    chain: list[int],
    o: EntanglementOverlay,
    _added: list[tuple[int, int]] | None = None,
    _trace: list[DecisionRecord] | None = None,
    _c1: int = 0,
    _c2: int = 0,
) -> tuple[EntanglementOverlay, int]:
    """Swap along the chain until its head is paired with its tail.

    ``chain[-1]`` is the endpoint everyone gets paired with. Walking from
    the tail, each earlier chain node gains that pair through one swap at
    its successor; a pair that already exists costs nothing. Added pairs
    persist in ``o``.
    """
    final = chain[-1]
    swaps = 0
    for i in range(len(chain) - 3, -1, -1):
        node = chain[i]
        if o.has(node, final):
            continue
        o.add(node, final)
        swaps += 1
        if _added is not None:
            _added.append((node, final) if node < final else (final, node))
        if _trace is not None:
            _trace.append(DecisionRecord(at=chain[i + 1], decision=SWAP, to=final, c1=_c1, c2=_c2))
    return o, swaps


def attempt_connection(
    g: QNetGraph,
    o: EntanglementOverlay,
    source: int,
    target: int,
    c1_init: int,
    c2_init: int,
    rng: Random,
    record_trace: bool = True,
) -> AttemptOutcome:
    """Run one setup attempt from source to target, mutating ``o`` in place.

    The attempt ends in success as soon as the current node shares a pair
    with the target or borders it physically (one generated pair), followed
    by the swap cascade; it ends in failure when a cycle-break is needed
    with c2 already spent. All overlay growth persists either way.
    """
    new_pairs: list[tuple[int, int]] = []
    qent_links: list[tuple[int, int]] = []
    trace: list[DecisionRecord] = []
    trace_sink = trace if record_trace else None

    if source == target:
        return AttemptOutcome(
            status=SUCCESS, hops=0, qents_generated=0, swaps=0,
            new_pairs=[], qent_links=[], visited=[source], trace=[],
        )

    state = SetupAttemptState.start(source, target, c1_init, c2_init)
    qents = 0
    swaps = 0
    status = FAILURE

    while True:
        u = state.current

        if o.has(u, target):
            state.chain.append(target)
            _, n_swaps = swap_cascade(
                state.chain, o, _added=new_pairs, _trace=trace_sink,
                _c1=state.c1, _c2=state.c2,
            )
            swaps += n_swaps
            if record_trace:
                trace.append(DecisionRecord(at=u, decision=SUCCESS, to=target, c1=state.c1, c2=state.c2))
            status = SUCCESS
            break

        if g.has_link(u, target):
            if o.add(u, target):
                new_pairs.append((u, target) if u < target else (target, u))
            qents += 1
            qent_links.append((u, target) if u < target else (target, u))
            if record_trace:
                trace.append(DecisionRecord(at=u, decision=QENT, to=target, c1=state.c1, c2=state.c2))
            state.chain.append(target)
            _, n_swaps = swap_cascade(
                state.chain, o, _added=new_pairs, _trace=trace_sink,
                _c1=state.c1, _c2=state.c2,
            )
            swaps += n_swaps
            if record_trace:
                trace.append(DecisionRecord(at=u, decision=SUCCESS, to=target, c1=state.c1, c2=state.c2))
            status = SUCCESS
            break

        decision = next_hop(state, g, o, rng)
        if decision.kind == FAIL:
            if record_trace:
                trace.append(DecisionRecord(at=u, decision=FAIL, to=None, c1=state.c1, c2=state.c2))
            status = FAILURE
            break

        v = decision.node
        if decision.kind == FALLBACK_PHYS:
            qents += 1
            qent_links.append((u, v) if u < v else (v, u))
            if decision.pair_added:
                new_pairs.append((u, v) if u < v else (v, u))
        if record_trace:
            trace.append(DecisionRecord(at=u, decision=decision.kind, to=v, c1=state.c1, c2=state.c2))
        state.advance(v)

    return AttemptOutcome(
        status=status,
        hops=len(state.visited) - 1,
        qents_generated=qents,
        swaps=swaps,
        new_pairs=new_pairs,
        qent_links=qent_links,
        visited=list(state.visited),
        trace=trace,
    )


def setup_connection(
    g: QNetGraph,
    o: EntanglementOverlay,
    source: int,
    target: int,
    max_retries: int,
    c1_init: int,
    c2_init: int,
    rng: Random,
    record_trace: bool = True,
) -> ConnectionResult:
    """Attempt the connection up to max_retries times.

    Each attempt starts with a fresh route record and fresh counters but
    shares the overlay, so pairs generated by failed attempts make later
    ones more likely to succeed.
    """
    if max_retries < 1:
        raise ValueError(f"max_retries must be >= 1, got {max_retries}")
    outcomes: list[AttemptOutcome] = []
    for _ in range(max_retries):
        outcome = attempt_connection(
            g, o, source, target, c1_init, c2_init, rng, record_trace=record_trace
        )
        outcomes.append(outcome)
        if outcome.success:
            break
    success = outcomes[-1].success
    attempts_used = len(outcomes)
    return ConnectionResult(
        source=source,
        target=target,
        success=success,
        attempts_used=attempts_used,
        failures=attempts_used - (1 if success else 0),
        outcomes=outcomes,
    )


def record_data_transfer(g: QNetGraph, result: ConnectionResult) -> None:
    """Bump the HC of every physical link that carried a generated pair
    during the successful attempt; data just moved over those links."""
    if not result.success:
        raise ValueError("data transfer requires a successful connection")
    final = result.outcomes[-1]
    for u, v in sorted(set(final.qent_links)):
        g.set_hc(u, v, g.hc(u, v) + 1)


def trace_jsonl(outcome: AttemptOutcome) -> str:
    """Serialize an attempt's decision records as JSON lines."""
    import json

    lines = [
        json.dumps(
            {"at": r.at, "decision": r.decision, "to": r.to, "c1": r.c1, "c2": r.c2},
            sort_keys=True,
        )
        for r in outcome.trace
    ]
    return "\n".join(lines) + ("\n" if lines else "")
