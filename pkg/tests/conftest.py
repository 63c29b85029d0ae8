import pytest

from periodic_cops.arena import build_arena
from periodic_cops.ptg import fixtures


@pytest.fixture(scope="session")
def graphs():
    return fixtures()


@pytest.fixture(scope="session")
def arenas(graphs):
    return {name: build_arena(g) for name, g in graphs.items()}
