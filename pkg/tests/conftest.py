from collections import deque

import pytest

from qnetsim.sampledata import ten_node_demo


class ScriptedRng:
    """Stand-in rng whose randrange answers come from a fixed queue.

    Lets golden tests force specific tie-breaks; raises if the code under
    test draws more (or wider) than the script allows.
    """

    def __init__(self, picks):
        self.picks = deque(picks)

    def randrange(self, n):
        if not self.picks:
            raise AssertionError("rng drawn more often than scripted")
        value = self.picks.popleft()
        if not 0 <= value < n:
            raise AssertionError(f"scripted pick {value} out of range({n})")
        return value


class NoDrawRng:
    """Asserts the code under test never needs randomness."""

    def randrange(self, n):
        raise AssertionError("unexpected rng draw")


@pytest.fixture
def demo_graph():
    return ten_node_demo()
