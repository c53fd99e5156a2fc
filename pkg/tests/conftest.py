import random
import sys
from pathlib import Path

SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

import pytest

from thln import FaultSet, VariantSpec, make_preset


def sample_faults(g, count, rng):
    """Uniform fault set over nodes and edges, without replacement."""
    elements = [("node", v) for v in g.nodes] + [("edge", e) for e in g.edges]
    picked = rng.sample(elements, count) if count else []
    return FaultSet.of(
        nodes=(p for k, p in picked if k == "node"),
        edges=(p for k, p in picked if k == "edge"),
    )


def fault_free_pair(view, rng):
    return rng.sample(view.nodes, 2)


@pytest.fixture(scope="session")
def graph8():
    return make_preset(VariantSpec.random(7), 8)


@pytest.fixture(scope="session")
def graph9():
    return make_preset(VariantSpec.random(3), 9)


@pytest.fixture(scope="session")
def graph4():
    return make_preset(VariantSpec.random(2), 4)
