"""
共享的测试夹具
"""

import sys

import pytest
from loguru import logger

from hamboost.core.generators import complete_bipartite
from hamboost.core.graph import Digraph, UndirectedGraph, from_arc_list, from_edge_list


def cycle_graph(n: int) -> UndirectedGraph:
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> UndirectedGraph:
    return from_edge_list(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_digraph(n: int) -> Digraph:
    return from_arc_list(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def petersen_graph() -> UndirectedGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edge_list(10, outer + spokes + inner)


@pytest.fixture(autouse=True)
def _reset_logger():
    """CLI 测试会替换日志输出，每个测试后恢复到标准错误"""
    yield
    logger.remove()
    logger.add(sys.stderr, level="WARNING")


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def petersen():
    return petersen_graph()


@pytest.fixture
def k37():
    return complete_bipartite(10, 0.3)


@pytest.fixture
def directed_triangle():
    return from_arc_list(3, [(0, 1), (1, 2), (2, 0)])
