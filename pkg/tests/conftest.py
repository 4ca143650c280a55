import itertools
import random

import pytest

from z5color.families import build, BrokenWheel, Wheel
from z5color.group_color import ColorSystem, PhiAssignment


def brute_count(n, phi, colors=None):
    """Independent oracle: literal enumeration of all modulus^n colorings."""
    m = phi.modulus
    total = 0
    for coloring in itertools.product(range(m), repeat=n):
        if colors is not None:
            if any(coloring[v] not in colors.available(v) for v in range(n)):
                continue
        if all((coloring[h] - coloring[t]) % m != x for t, h, x in phi.records):
            total += 1
    return total


def random_phi_on(graph, rng, modulus=5):
    return PhiAssignment(
        modulus, tuple((u, v, rng.randrange(modulus)) for u, v in graph.edges())
    )


@pytest.fixture
def rng():
    return random.Random(20260811)


@pytest.fixture
def k3():
    return build(BrokenWheel(3))


@pytest.fixture
def bw4():
    return build(BrokenWheel(4))


@pytest.fixture
def w5():
    return build(Wheel(5))
