from collections import Counter
from typing import Callable, Iterable, List, Tuple

import pytest

from src.decomposition.Decomposition import Decomposition
from src.decomposition.decomposer import build_decomposition
from src.graph.Graph import Graph
from src.graph.graph_utils import (
    complete_bipartite_graph,
    complete_graph,
    grid_graph,
    lollipop_graph,
    path_graph,
)

Edge = Tuple[int, int]


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def tree_counts(trees: Iterable[List[Edge]]) -> Counter:
    return Counter(tuple(sorted(tree)) for tree in trees)


def within_sigmas(count: int, total: int, p: float, sigmas: float = 4.0) -> bool:
    sd = (p * (1 - p) / total) ** 0.5
    return abs(count / total - p) <= sigmas * sd


@pytest.fixture
def triangle() -> Graph:
    return complete_graph(3)


@pytest.fixture
def path5() -> Graph:
    return path_graph(5)


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4)


@pytest.fixture
def k5() -> Graph:
    return complete_graph(5)


@pytest.fixture
def k23() -> Graph:
    return complete_bipartite_graph(2, 3)


@pytest.fixture
def grid23() -> Graph:
    return grid_graph(2, 3)


@pytest.fixture
def grid33() -> Graph:
    return grid_graph(3, 3)


@pytest.fixture
def cycle5() -> Graph:
    return cycle_graph(5)


@pytest.fixture
def lollipop() -> Graph:
    return lollipop_graph(20, 400)


@pytest.fixture
def k4_strong(k4: Graph) -> Decomposition:
    """
    D = {0, 1, 2}, S = {3}: |C| = 3, |C(S)| = 1.
    """
    return build_decomposition(k4, [[0, 1, 2]], 0.25, strong=True)


@pytest.fixture
def cycle5_weak(cycle5: Graph) -> Decomposition:
    return build_decomposition(cycle5, [[0, 1, 2]], 0.5, strong=False)


@pytest.fixture
def grid55_split() -> Tuple[Graph, Decomposition]:
    """
    Rešetka 5x5 sa S = srednji stupac, lijeva i desna dva stupca su komponente.
    """
    graph = grid_graph(5, 5)
    left = [r * 5 + c for r in range(5) for c in (0, 1)]
    right = [r * 5 + c for r in range(5) for c in (3, 4)]
    return graph, build_decomposition(graph, [left, right], 0.4, strong=True)


@pytest.fixture
def make_cycle() -> Callable[[int], Graph]:
    return cycle_graph
