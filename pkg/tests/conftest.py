import pytest

from tests.basic_graphs import random_weighted_graph, small_store


@pytest.fixture
def store():
    return small_store()


@pytest.fixture
def er_graph():
    return random_weighted_graph(40, 0.1, seed=3)
