"""
图核心模块

无向图与有向图的邻接集合表示、邻域查询、边列表文件读写以及哈密顿圈验证。
顶点编号为 0..n-1。图在构造后不可变，可以在线程/进程间共享。
"""

from collections import deque
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
from loguru import logger

from .exceptions import GraphFormatError, GraphValidationError

Edge = Tuple[int, int]


class UndirectedGraph:
    """无向简单图（无自环、无重边）"""

    def __init__(self, n: int, adjacency: Sequence[Iterable[int]]):
        """
        从邻接表构造并校验对称性

        Args:
            n: 顶点数
            adjacency: 每个顶点的邻居集合
        """
        if n < 0:
            raise GraphValidationError(f"顶点数不能为负: {n}")
        if len(adjacency) != n:
            raise GraphValidationError(f"邻接表长度 {len(adjacency)} 与顶点数 {n} 不一致")
        adj = tuple(frozenset(a) for a in adjacency)
        total = 0
        for v, nbrs in enumerate(adj):
            for u in nbrs:
                if u == v:
                    raise GraphValidationError(f"顶点 {v} 存在自环")
                if not 0 <= u < n:
                    raise GraphValidationError(f"顶点 {v} 的邻居 {u} 超出范围 [0, {n})")
                if v not in adj[u]:
                    raise GraphValidationError(f"邻接不对称: {u} ∈ adj({v}) 但 {v} ∉ adj({u})")
            total += len(nbrs)
        self._setup(n, adj, total // 2)

    @classmethod
    def _trusted(cls, n: int, adj: Tuple[frozenset, ...], edge_count: int) -> "UndirectedGraph":
        # 内部构造：调用方保证对称性
        graph = cls.__new__(cls)
        graph._setup(n, adj, edge_count)
        return graph

    def _setup(self, n: int, adj: Tuple[frozenset, ...], edge_count: int) -> None:
        self.n = n
        self._adj = adj
        self.edge_count = edge_count
        self._sorted: Dict[int, np.ndarray] = {}
        self._matrix: Optional[np.ndarray] = None
        self._rows: Optional[List[int]] = None

    def __repr__(self) -> str:
        return f"UndirectedGraph(n={self.n}, edges={self.edge_count})"

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def sorted_neighbors(self, v: int) -> np.ndarray:
        """升序邻居数组（缓存）"""
        arr = self._sorted.get(v)
        if arr is None:
            arr = np.array(sorted(self._adj[v]), dtype=np.int64)
            self._sorted[v] = arr
        return arr

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> List[int]:
        return [len(a) for a in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[Edge]:
        """按字典序枚举边 (u, v)，u < v"""
        for u in range(self.n):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield (u, v)

    def complement_size(self) -> int:
        return self.n * (self.n - 1) // 2 - self.edge_count

    def dense_matrix(self) -> np.ndarray:
        """n×n 布尔邻接矩阵（缓存，供向量化采样与邻域统计使用）"""
        if self._matrix is None:
            matrix = np.zeros((self.n, self.n), dtype=bool)
            for v, nbrs in enumerate(self._adj):
                if nbrs:
                    matrix[v, list(nbrs)] = True
            self._matrix = matrix
        return self._matrix

    def bit_rows(self) -> List[int]:
        """每个顶点的邻居位掩码（Python整数），供小规模精确算法使用"""
        if self._rows is None:
            rows = []
            for nbrs in self._adj:
                mask = 0
                for u in nbrs:
                    mask |= 1 << u
                rows.append(mask)
            self._rows = rows
        return self._rows

    def with_edges(self, extra: Iterable[Edge]) -> "UndirectedGraph":
        """返回加入额外边后的新图（已存在的边忽略）"""
        adj: List[frozenset] = list(self._adj)
        pending: Dict[int, Set[int]] = {}
        added = 0
        for u, v in extra:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphValidationError(f"非法边 ({u}, {v})")
            if v in adj[u] or v in pending.get(u, ()):
                continue
            pending.setdefault(u, set()).add(v)
            pending.setdefault(v, set()).add(u)
            added += 1
        if not added:
            return self
        for v, more in pending.items():
            adj[v] = adj[v] | more
        graph = UndirectedGraph._trusted(self.n, tuple(adj), self.edge_count + added)
        graph._sorted = {v: arr for v, arr in self._sorted.items() if v not in pending}
        return graph

    def subgraph(self, vertices: Iterable[int]) -> Tuple["UndirectedGraph", List[int]]:
        """
        诱导子图，顶点重新编号为 0..k-1

        Returns:
            (子图, labels) 其中 labels[i] 是子图顶点 i 的原编号
        """
        labels = sorted(set(vertices))
        index = {v: i for i, v in enumerate(labels)}
        adj = [frozenset(index[u] for u in self._adj[v] if u in index) for v in labels]
        edge_count = sum(len(a) for a in adj) // 2
        return UndirectedGraph._trusted(len(labels), tuple(adj), edge_count), labels

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = [False] * self.n
        seen[0] = True
        queue = deque([0])
        count = 1
        while queue:
            v = queue.popleft()
            for u in self._adj[v]:
                if not seen[u]:
                    seen[u] = True
                    count += 1
                    queue.append(u)
        return count == self.n


class Digraph:
    """有向简单图（无自环、无重复弧；允许同时存在 (u,v) 与 (v,u)）"""

    def __init__(self, n: int, out_adjacency: Sequence[Iterable[int]]):
        if n < 0:
            raise GraphValidationError(f"顶点数不能为负: {n}")
        if len(out_adjacency) != n:
            raise GraphValidationError(f"邻接表长度 {len(out_adjacency)} 与顶点数 {n} 不一致")
        out_adj = tuple(frozenset(a) for a in out_adjacency)
        in_sets: List[Set[int]] = [set() for _ in range(n)]
        total = 0
        for v, nbrs in enumerate(out_adj):
            for u in nbrs:
                if u == v:
                    raise GraphValidationError(f"顶点 {v} 存在自环")
                if not 0 <= u < n:
                    raise GraphValidationError(f"弧 ({v}, {u}) 超出范围 [0, {n})")
                in_sets[u].add(v)
            total += len(nbrs)
        self._setup(n, out_adj, tuple(frozenset(s) for s in in_sets), total)

    @classmethod
    def _trusted(cls, n: int, out_adj: Tuple[frozenset, ...], in_adj: Tuple[frozenset, ...],
                 arc_count: int) -> "Digraph":
        graph = cls.__new__(cls)
        graph._setup(n, out_adj, in_adj, arc_count)
        return graph

    def _setup(self, n: int, out_adj: Tuple[frozenset, ...], in_adj: Tuple[frozenset, ...],
               arc_count: int) -> None:
        self.n = n
        self._out = out_adj
        self._in = in_adj
        self.arc_count = arc_count
        self._sorted_out: Dict[int, np.ndarray] = {}
        self._sorted_in: Dict[int, np.ndarray] = {}
        self._matrix: Optional[np.ndarray] = None
        self._rows: Optional[List[int]] = None

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={self.arc_count})"

    def out_neighbors(self, v: int) -> frozenset:
        return self._out[v]

    def in_neighbors(self, v: int) -> frozenset:
        return self._in[v]

    def sorted_out(self, v: int) -> np.ndarray:
        arr = self._sorted_out.get(v)
        if arr is None:
            arr = np.array(sorted(self._out[v]), dtype=np.int64)
            self._sorted_out[v] = arr
        return arr

    def sorted_in(self, v: int) -> np.ndarray:
        arr = self._sorted_in.get(v)
        if arr is None:
            arr = np.array(sorted(self._in[v]), dtype=np.int64)
            self._sorted_in[v] = arr
        return arr

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def has_arc(self, u: int, v: int) -> bool:
        return v in self._out[u]

    def arcs(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v in sorted(self._out[u]):
                yield (u, v)

    def complement_size(self) -> int:
        return self.n * (self.n - 1) - self.arc_count

    def dense_matrix(self) -> np.ndarray:
        """布尔矩阵 A，A[u, v] 表示弧 u→v"""
        if self._matrix is None:
            matrix = np.zeros((self.n, self.n), dtype=bool)
            for v, nbrs in enumerate(self._out):
                if nbrs:
                    matrix[v, list(nbrs)] = True
            self._matrix = matrix
        return self._matrix

    def bit_rows(self) -> List[int]:
        """出邻居位掩码"""
        if self._rows is None:
            rows = []
            for nbrs in self._out:
                mask = 0
                for u in nbrs:
                    mask |= 1 << u
                rows.append(mask)
            self._rows = rows
        return self._rows

    def with_arcs(self, extra: Iterable[Edge]) -> "Digraph":
        """返回加入额外弧后的新有向图（已存在的弧忽略）"""
        out_adj = list(self._out)
        in_adj = list(self._in)
        pending_out: Dict[int, Set[int]] = {}
        pending_in: Dict[int, Set[int]] = {}
        added = 0
        for u, v in extra:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphValidationError(f"非法弧 ({u}, {v})")
            if v in out_adj[u] or v in pending_out.get(u, ()):
                continue
            pending_out.setdefault(u, set()).add(v)
            pending_in.setdefault(v, set()).add(u)
            added += 1
        if not added:
            return self
        for v, more in pending_out.items():
            out_adj[v] = out_adj[v] | more
        for v, more in pending_in.items():
            in_adj[v] = in_adj[v] | more
        graph = Digraph._trusted(self.n, tuple(out_adj), tuple(in_adj), self.arc_count + added)
        graph._sorted_out = {v: a for v, a in self._sorted_out.items() if v not in pending_out}
        graph._sorted_in = {v: a for v, a in self._sorted_in.items() if v not in pending_in}
        return graph

    def reversed(self) -> "Digraph":
        """所有弧反向"""
        return Digraph._trusted(self.n, self._in, self._out, self.arc_count)


AnyGraph = Union[UndirectedGraph, Digraph]


def _check_pair(n: int, u: int, v: int, seen: Set[Edge], directed: bool,
                line: int, path: Optional[str] = None) -> Edge:
    if not (0 <= u < n and 0 <= v < n):
        raise GraphFormatError(f"顶点编号超出范围 [0, {n}): ({u}, {v})", line, path)
    if u == v:
        raise GraphFormatError(f"自环 ({u}, {v})", line, path)
    key = (u, v) if directed else (min(u, v), max(u, v))
    if key in seen:
        raise GraphFormatError(f"重复的边 {key}", line, path)
    seen.add(key)
    return key


def from_edge_list(n: int, edges: Iterable[Edge], directed: bool = False) -> AnyGraph:
    """
    从边列表构造图

    出错时报告该边在文件格式中对应的行号（首行为表头，第 i 条边位于第 i+2 行）。
    """
    seen: Set[Edge] = set()
    pairs = [_check_pair(n, int(u), int(v), seen, directed, i + 2) for i, (u, v) in enumerate(edges)]
    if directed:
        return from_arc_list(n, pairs)
    adj: List[Set[int]] = [set() for _ in range(n)]
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)
    return UndirectedGraph._trusted(n, tuple(frozenset(a) for a in adj), len(pairs))


def from_arc_list(n: int, arcs: Iterable[Edge]) -> Digraph:
    """从弧列表构造有向图（重复弧合并）"""
    out_adj: List[Set[int]] = [set() for _ in range(n)]
    for u, v in arcs:
        out_adj[u].add(v)
    return Digraph(n, out_adj)


def read_edge_list(path: Union[str, Path]) -> AnyGraph:
    """
    读取边列表文件

    格式: 首行 "n m" 或 "n m directed"，之后 m 行 "u v"（0起始编号）。
    """
    path = Path(path)
    logger.debug(f"读取边列表: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].strip():
        raise GraphFormatError("缺少表头 'n m'", 1, str(path))
    header = lines[0].split()
    directed = False
    if len(header) == 3 and header[2] == "directed":
        directed = True
    elif len(header) != 2:
        raise GraphFormatError(f"表头格式应为 'n m' 或 'n m directed': {lines[0]!r}", 1, str(path))
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise GraphFormatError(f"表头不是整数: {lines[0]!r}", 1, str(path))
    if n < 0 or m < 0:
        raise GraphFormatError("n 与 m 必须非负", 1, str(path))

    seen: Set[Edge] = set()
    pairs: List[Edge] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(pairs) >= m:
            raise GraphFormatError(f"边数多于表头声明的 {m}", lineno, str(path))
        if len(parts) != 2:
            raise GraphFormatError(f"应为两个整数: {raw!r}", lineno, str(path))
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"不是整数: {raw!r}", lineno, str(path))
        pairs.append(_check_pair(n, u, v, seen, directed, lineno, str(path)))
    if len(pairs) != m:
        raise GraphFormatError(f"表头声明 {m} 条边，实际 {len(pairs)} 条", len(lines) + 1, str(path))

    if directed:
        return from_arc_list(n, pairs)
    return from_edge_list(n, pairs)


def write_edge_list(graph: AnyGraph, path: Union[str, Path]) -> None:
    """按边列表格式写出图，边按字典序排列"""
    path = Path(path)
    if isinstance(graph, Digraph):
        items = list(graph.arcs())
        header = f"{graph.n} {len(items)} directed"
    else:
        items = list(graph.edges())
        header = f"{graph.n} {len(items)}"
    body = "".join(f"{u} {v}\n" for u, v in items)
    path.write_text(f"{header}\n{body}", encoding="utf-8")
    logger.debug(f"已写出边列表: {path} ({len(items)} 条)")


def min_degree(graph: AnyGraph) -> int:
    """最小度；有向图取所有入度与出度的最小值"""
    if graph.n == 0:
        return 0
    if isinstance(graph, Digraph):
        return min(min(graph.out_degree(v), graph.in_degree(v)) for v in range(graph.n))
    return min(graph.degrees())


def neighborhood(graph: UndirectedGraph, S: Iterable[int]) -> frozenset:
    """外部邻域 N(S) = {w ∉ S : 存在 v ∈ S 使 vw 为边}"""
    S = set(S)
    found: Set[int] = set()
    for v in S:
        found.update(graph.neighbors(v))
    return frozenset(found - S)


def out_neighborhood(graph: Digraph, S: Iterable[int]) -> frozenset:
    """N⁺(S)"""
    S = set(S)
    found: Set[int] = set()
    for v in S:
        found.update(graph.out_neighbors(v))
    return frozenset(found - S)


def in_neighborhood(graph: Digraph, S: Iterable[int]) -> frozenset:
    """N⁻(S)"""
    S = set(S)
    found: Set[int] = set()
    for v in S:
        found.update(graph.in_neighbors(v))
    return frozenset(found - S)


def verify_hamilton_cycle(graph: AnyGraph, cycle: Sequence[int]) -> bool:
    """
    验证哈密顿圈证书

    cycle 必须是顶点集的一个排列，且相邻顶点（含首尾回绕）之间有边（有向图按弧方向）。
    无向图要求 n ≥ 3；有向图允许 n = 2 的 2-圈。
    """
    n = graph.n
    if len(cycle) != n or n == 0:
        return False
    if sorted(cycle) != list(range(n)):
        return False
    directed = isinstance(graph, Digraph)
    if n < (2 if directed else 3):
        return False
    for i in range(n):
        u, v = cycle[i], cycle[(i + 1) % n]
        if directed:
            if not graph.has_arc(u, v):
                return False
        elif not graph.has_edge(u, v):
            return False
    return True
