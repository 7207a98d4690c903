"""
实例生成器

下界构造 K_{A,B}（及其双向版本）、随机最小度图/有向图、小独立数的稠密图。
每个生成器在返回前检查自己的契约（度数下界、二部结构）。
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Set, Tuple

import numpy as np
from loguru import logger

from .exceptions import ConfigError, ConstantsError, GraphValidationError
from .graph import AnyGraph, Digraph, UndirectedGraph, min_degree
from .oracles import DEFAULT_LIMITS, OracleLimits, clique_cover_bound, exact_independence
from .sampling import make_rng

OVERSAMPLE = 1.2


class InstanceFamily(str, Enum):
    COMPLETE_BIPARTITE = "complete_bipartite"
    BIDIRECTED_COMPLETE_BIPARTITE = "bidirected_complete_bipartite"
    RANDOM_MIN_DEGREE = "random_min_degree"
    RANDOM_MIN_DEGREE_DIGRAPH = "random_min_degree_digraph"
    DENSE_SMALL_ALPHA = "dense_small_alpha"

    @property
    def directed(self) -> bool:
        return self in (InstanceFamily.BIDIRECTED_COMPLETE_BIPARTITE, InstanceFamily.RANDOM_MIN_DEGREE_DIGRAPH)


@dataclass(frozen=True)
class InstanceSpec:
    family: InstanceFamily
    n: int
    d: Optional[float] = None
    q: Optional[float] = None
    seed: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family.value, "n": self.n, "d": self.d, "q": self.q, "seed": self.seed}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InstanceSpec":
        try:
            family = InstanceFamily(data["family"])
        except (KeyError, ValueError):
            raise ConfigError("instance.family", f"未知的实例族: {data.get('family')!r}")
        return cls(family, int(data["n"]), data.get("d"), data.get("q"), int(data.get("seed", 0)))


def side_sizes(n: int, d: float) -> Tuple[int, int]:
    """|A| = ⌊dn⌋，|B| = n - |A|"""
    a = math.floor(d * n + 1e-9)
    return a, n - a


def _check_bipartite_args(n: int, d: float) -> int:
    if not 0.0 < d <= 0.5:
        raise ConstantsError("0 < d <= 1/2", d)
    a, _ = side_sizes(n, d)
    if a < 1:
        raise ConstantsError("dn >= 1", d * n)
    return a


def complete_bipartite(n: int, d: float) -> UndirectedGraph:
    """K_{A,B}：A = {0..⌊dn⌋-1}，B 为其余顶点，包含全部跨边"""
    a = _check_bipartite_args(n, d)
    side_a = frozenset(range(a))
    side_b = frozenset(range(a, n))
    adj = tuple(side_b if v < a else side_a for v in range(n))
    graph = UndirectedGraph._trusted(n, adj, a * (n - a))
    if min_degree(graph) != a:
        raise GraphValidationError(f"K_A,B 最小度 {min_degree(graph)} ≠ |A|={a}")
    return graph


def bidirected_complete_bipartite(n: int, d: float) -> Digraph:
    """每条跨边替换为两个方向的弧"""
    a = _check_bipartite_args(n, d)
    side_a = frozenset(range(a))
    side_b = frozenset(range(a, n))
    adj = tuple(side_b if v < a else side_a for v in range(n))
    graph = Digraph._trusted(n, adj, adj, 2 * a * (n - a))
    if min_degree(graph) != a:
        raise GraphValidationError(f"双向 K_A,B 最小度 {min_degree(graph)} ≠ |A|={a}")
    return graph


def _target_degree(n: int, d: float) -> int:
    if not 0.0 < d < 1.0:
        raise ConstantsError("0 < d < 1", d)
    target = math.ceil(d * n - 1e-9)
    if target > n - 1:
        raise ConstantsError("⌈dn⌉ <= n-1", float(target))
    return target


def random_min_degree_graph(n: int, d: float, seed: int) -> UndirectedGraph:
    """
    最小度 ≥ ⌈dn⌉ 的随机图

    先以 1.2d 的概率独立取边，再按编号升序修补度数不足的顶点：
    在其非邻居中均匀选一个补边，直到达标。
    """
    target = _target_degree(n, d)
    rng = make_rng(seed)
    rate = min(1.0, OVERSAMPLE * d)
    upper = np.triu(rng.random((n, n)) < rate, k=1)
    rows, cols = np.nonzero(upper)
    adj: List[Set[int]] = [set() for _ in range(n)]
    for u, v in zip(rows.tolist(), cols.tolist()):
        adj[u].add(v)
        adj[v].add(u)

    repaired = 0
    for v in range(n):
        while len(adj[v]) < target:
            missing = [u for u in range(n) if u != v and u not in adj[v]]
            u = missing[int(rng.integers(len(missing)))]
            adj[v].add(u)
            adj[u].add(v)
            repaired += 1
    edge_count = sum(len(a) for a in adj) // 2
    graph = UndirectedGraph._trusted(n, tuple(frozenset(a) for a in adj), edge_count)
    if n and min_degree(graph) < target:
        raise GraphValidationError(f"修补后最小度 {min_degree(graph)} < {target}")
    logger.debug(f"随机最小度图: n={n}, 目标度 {target}, 修补 {repaired} 条边, 共 {edge_count} 条")
    return graph


def random_min_degree_digraph(n: int, d: float, seed: int) -> Digraph:
    """有向版本：出度与入度都修补到 ⌈dn⌉"""
    target = _target_degree(n, d)
    rng = make_rng(seed)
    rate = min(1.0, OVERSAMPLE * d)
    mask = rng.random((n, n)) < rate
    np.fill_diagonal(mask, False)
    rows, cols = np.nonzero(mask)
    out_adj: List[Set[int]] = [set() for _ in range(n)]
    in_adj: List[Set[int]] = [set() for _ in range(n)]
    for u, v in zip(rows.tolist(), cols.tolist()):
        out_adj[u].add(v)
        in_adj[v].add(u)

    for v in range(n):
        while len(out_adj[v]) < target:
            missing = [u for u in range(n) if u != v and u not in out_adj[v]]
            u = missing[int(rng.integers(len(missing)))]
            out_adj[v].add(u)
            in_adj[u].add(v)
        while len(in_adj[v]) < target:
            missing = [u for u in range(n) if u != v and u not in in_adj[v]]
            u = missing[int(rng.integers(len(missing)))]
            in_adj[v].add(u)
            out_adj[u].add(v)
    arc_count = sum(len(a) for a in out_adj)
    graph = Digraph._trusted(
        n, tuple(frozenset(a) for a in out_adj), tuple(frozenset(a) for a in in_adj), arc_count
    )
    if n and min_degree(graph) < target:
        raise GraphValidationError(f"修补后最小度 {min_degree(graph)} < {target}")
    return graph


def gnp(n: int, q: float, seed: int) -> UndirectedGraph:
    """G(n, q)"""
    if not 0.0 <= q <= 1.0:
        raise ConstantsError("0 <= q <= 1", q)
    rng = make_rng(seed)
    upper = np.triu(rng.random((n, n)) < q, k=1)
    rows, cols = np.nonzero(upper)
    adj: List[Set[int]] = [set() for _ in range(n)]
    for u, v in zip(rows.tolist(), cols.tolist()):
        adj[u].add(v)
        adj[v].add(u)
    return UndirectedGraph._trusted(n, tuple(frozenset(a) for a in adj), len(rows))


@dataclass
class SmallAlphaInstance:
    graph: UndirectedGraph
    alpha: int
    exact: bool
    d: float

    @property
    def alpha_threshold(self) -> float:
        """d²n/2"""
        return self.d * self.d * self.graph.n / 2

    @property
    def hypothesis_ok(self) -> bool:
        """α < d²n/2；不精确时 alpha 为上界，满足即可确认"""
        return self.alpha < self.alpha_threshold

    def as_dict(self) -> dict:
        return {
            "n": self.graph.n,
            "alpha": self.alpha,
            "alpha_exact": self.exact,
            "d": self.d,
            "alpha_threshold": self.alpha_threshold,
            "hypothesis_ok": self.hypothesis_ok,
        }


def dense_small_alpha(n: int, q: float, seed: int, limits: OracleLimits = DEFAULT_LIMITS) -> SmallAlphaInstance:
    """
    G(n, q) 样本及其独立数

    n ≤ alpha_max_n 时 α 精确（分支定界），否则给出贪心团覆盖上界并标记为不精确。
    d 取 δ/n，由调用方按 α < d²n/2 过滤。
    """
    graph = gnp(n, q, seed)
    if n <= limits.alpha_max_n:
        alpha, exact = exact_independence(graph, limits), True
    else:
        alpha, exact = clique_cover_bound(graph), False
    d = min_degree(graph) / n if n else 0.0
    return SmallAlphaInstance(graph, alpha, exact, d)


def build_instance(spec: InstanceSpec) -> AnyGraph:
    """按 InstanceSpec 构造实例图"""
    family = spec.family
    density = spec.d if spec.d is not None else spec.q
    if density is None:
        raise ConfigError("instance.d", "实例需要 d（或 q）")
    if family is InstanceFamily.COMPLETE_BIPARTITE:
        return complete_bipartite(spec.n, density)
    if family is InstanceFamily.BIDIRECTED_COMPLETE_BIPARTITE:
        return bidirected_complete_bipartite(spec.n, density)
    if family is InstanceFamily.RANDOM_MIN_DEGREE:
        return random_min_degree_graph(spec.n, density, spec.seed)
    if family is InstanceFamily.RANDOM_MIN_DEGREE_DIGRAPH:
        return random_min_degree_digraph(spec.n, density, spec.seed)
    return dense_small_alpha(spec.n, density, spec.seed).graph

