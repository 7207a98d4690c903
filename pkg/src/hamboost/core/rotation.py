"""
旋转引擎

路径旋转、端点闭包（END集合）、二级端点对、极大路径，以及消耗随机边流的分阶段撒边过程。

闭包对每个端点只保留一条代表路径：BFS 顺序中第一次得到该端点的路径，
枢轴按顶点编号升序尝试。穷举模式遍历所有路径状态，只用于 n ≤ 12 的校验。
"""

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, islice
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from .exceptions import CertificateError, GraphValidationError, OracleLimitError, RotationError
from .graph import Edge, UndirectedGraph, verify_hamilton_cycle
from .options import DEFAULT_OPTIONS, EngineOptions
from .sampling import EdgeStream, derive_seed, make_rng

BUDGET_FACTOR = 13


@dataclass(frozen=True)
class PathState:
    """简单路径 x0 → … → y，x0 为固定端点"""
    vertices: Tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise RotationError("路径上有重复顶点")

    @property
    def x0(self) -> int:
        return self.vertices[0]

    @property
    def endpoint(self) -> int:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        """边数"""
        return len(self.vertices) - 1

    def __len__(self) -> int:
        return len(self.vertices)

    def reversed(self) -> "PathState":
        return PathState(self.vertices[::-1])

    def is_valid(self, graph: UndirectedGraph) -> bool:
        return all(graph.has_edge(u, v) for u, v in zip(self.vertices, self.vertices[1:]))

    def validate(self, graph: UndirectedGraph) -> None:
        for u, v in zip(self.vertices, self.vertices[1:]):
            if not graph.has_edge(u, v):
                raise RotationError(f"路径边 ({u}, {v}) 不在图中")


def rotate(path: PathState, y: int, v: int, graph: Optional[UndirectedGraph] = None) -> PathState:
    """
    Pósa 旋转

    P = x0 … v w … y 且 yv 为边时，返回 x0 … v y … w。

    Raises:
        RotationError: y 不是非固定端点、v 不在路径上、v 与 y 相同或相邻、
            v = x0（此时应闭合成圈），或给出 graph 时 yv 不是边
    """
    verts = path.vertices
    if len(verts) < 2 or y != verts[-1]:
        raise RotationError(f"{y} 不是路径的非固定端点")
    if graph is not None and not graph.has_edge(y, v):
        raise RotationError(f"边 ({y}, {v}) 不在图中")
    try:
        i = verts.index(v)
    except ValueError:
        raise RotationError(f"枢轴 {v} 不在路径上")
    if i == len(verts) - 1:
        raise RotationError("枢轴不能是端点自身")
    if i == len(verts) - 2:
        raise RotationError(f"枢轴 {v} 是 {y} 在路径上的前驱")
    if i == 0:
        raise RotationError("枢轴为固定端点 x0，应闭合成圈而不是旋转")
    return PathState(verts[:i + 1] + verts[:i:-1])


def replay_rotations(path: PathState, pivots: Sequence[int], graph: Optional[UndirectedGraph] = None) -> PathState:
    """按枢轴序列依次旋转"""
    for v in pivots:
        path = rotate(path, path.endpoint, v, graph)
    return path


@dataclass
class EndClosure:
    """固定 x0 时可达的端点集合，每个端点附一条代表路径及其旋转序列"""
    x0: int
    path: PathState
    witness: Dict[int, PathState]
    pivots: Dict[int, Tuple[int, ...]]
    exhaustive: bool = False

    @property
    def ends(self) -> frozenset:
        return frozenset(self.witness)

    def order(self) -> List[int]:
        """端点的发现顺序"""
        return list(self.witness)

    def __len__(self) -> int:
        return len(self.witness)


def closure_arrays(
    graph: UndirectedGraph,
    path: np.ndarray,
    on_path: Optional[np.ndarray] = None,
    stop: Optional[Callable[[int], bool]] = None,
) -> Tuple[Dict[int, np.ndarray], Dict[int, Tuple[int, ...]], Optional[int]]:
    """
    代表路径闭包的 BFS

    Returns:
        (witness, pivots, stopped_at)。stop 对某个新端点返回 True 时立即停止，
        stopped_at 为该端点。
    """
    L = len(path)
    end = int(path[-1])
    witness: Dict[int, np.ndarray] = {end: path}
    pivots: Dict[int, Tuple[int, ...]] = {end: ()}
    if stop is not None and stop(end):
        return witness, pivots, end
    if L < 4:
        return witness, pivots, None
    if on_path is None:
        on_path = np.zeros(graph.n, dtype=bool)
        on_path[path] = True

    pos = np.zeros(graph.n, dtype=np.int64)
    index = np.arange(L, dtype=np.int64)
    queue = deque([end])
    while queue:
        y = queue.popleft()
        arr = witness[y]
        pos[arr] = index
        nb = graph.sorted_neighbors(y)
        nb = nb[on_path[nb]]
        p = pos[nb]
        p = p[(p >= 1) & (p <= L - 3)]
        if not len(p):
            continue
        for pv, w in zip(p.tolist(), arr[p + 1].tolist()):
            if w in witness:
                continue
            witness[w] = np.concatenate((arr[:pv + 1], arr[:pv:-1]))
            pivots[w] = pivots[y] + (int(arr[pv]),)
            if stop is not None and stop(w):
                return witness, pivots, w
            queue.append(w)
    return witness, pivots, None


def _closure_exhaustive(
    graph: UndirectedGraph, verts: Tuple[int, ...]
) -> Tuple[Dict[int, Tuple[int, ...]], Dict[int, Tuple[int, ...]]]:
    L = len(verts)
    witness = {verts[-1]: verts}
    pivots: Dict[int, Tuple[int, ...]] = {verts[-1]: ()}
    seen = {verts}
    queue = deque([(verts, ())])
    while queue:
        p, trail = queue.popleft()
        pos = {v: i for i, v in enumerate(p)}
        for v in sorted(graph.neighbors(p[-1])):
            i = pos.get(v)
            if i is None or i == 0 or i >= L - 2:
                continue
            q = p[:i + 1] + p[:i:-1]
            if q in seen:
                continue
            seen.add(q)
            queue.append((q, trail + (v,)))
            if q[-1] not in witness:
                witness[q[-1]] = q
                pivots[q[-1]] = trail + (v,)
    return witness, pivots


def end_closure(
    graph: UndirectedGraph,
    path: PathState,
    x0: Optional[int] = None,
    *,
    exhaustive: bool = False,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> EndClosure:
    """
    端点闭包 END(x0, P)

    固定端点 x0，反复旋转所能得到的全部另一端点。结果不含 x0，含原端点。

    Args:
        x0: 固定端点，默认 path.x0；也可以是 path 的另一端
        exhaustive: 遍历所有路径状态（仅 n ≤ exhaustive_max_n）
    """
    verts = path.vertices
    if x0 is None:
        x0 = verts[0]
    if x0 != verts[0]:
        if x0 != verts[-1]:
            raise RotationError(f"{x0} 不是路径端点")
        verts = verts[::-1]
        path = PathState(verts)
    if len(verts) == 1:
        return EndClosure(x0, path, {}, {}, exhaustive)

    if exhaustive:
        if graph.n > options.exhaustive_max_n:
            raise OracleLimitError("exhaustive_closure", graph.n, options.exhaustive_max_n)
        witness, pivots = _closure_exhaustive(graph, verts)
        return EndClosure(x0, path, {w: PathState(p) for w, p in witness.items()}, pivots, True)

    arrays, pivots, _ = closure_arrays(graph, np.array(verts, dtype=np.int64))
    witness = {w: PathState(tuple(arr.tolist())) for w, arr in arrays.items()}
    return EndClosure(x0, path, witness, pivots, False)


def end_pairs(
    graph: UndirectedGraph, path: PathState, options: EngineOptions = DEFAULT_OPTIONS
) -> Dict[int, Tuple[PathState, EndClosure]]:
    """
    二级端点对

    对每个 a ∈ END(x0, P) 给出代表路径 Q_a（x0 … a）以及固定 a 后的闭包 END(a, Q_a)。
    其中每个 b 都满足：加入边 ab 即得到覆盖 V(P) 的圈。顶点数小于3的路径返回空字典。
    """
    if len(path) < 3:
        return {}
    first = end_closure(graph, path, options=options)
    result: Dict[int, Tuple[PathState, EndClosure]] = {}
    for a in first.order():
        q_a = first.witness[a]
        result[a] = (q_a, end_closure(graph, q_a.reversed(), options=options))
    return result


class PathWorker:
    """
    撒边过程的可变状态：当前图 Γ、当前路径（或无法重开的圈）

    只在单个引擎实例内部使用，不跨线程共享。
    """

    def __init__(self, graph: UndirectedGraph, path: Sequence[int], options: EngineOptions):
        self.graph = graph
        self.options = options
        self.path: List[int] = list(path)
        self.on_path = np.zeros(graph.n, dtype=bool)
        self.on_path[self.path] = True
        self.cycle: Optional[List[int]] = None
        self._closure = None

    def _set_path(self, vertices: Sequence[int]) -> None:
        self.path = list(vertices)
        self.on_path[:] = False
        self.on_path[self.path] = True
        self._closure = None

    def reverse(self) -> None:
        self.path.reverse()
        self._closure = None

    def add_edges(self, edges: Sequence[Edge]) -> None:
        graph = self.graph.with_edges(edges)
        if graph is not self.graph:
            self.graph = graph
            self._closure = None

    # ------------------------------------------------------------------ 免费操作

    def _pick_next(self, y: int) -> Optional[int]:
        nb = self.graph.sorted_neighbors(y)
        off = nb[~self.on_path[nb]]
        if not len(off):
            return None
        if len(off) == 1 or self.graph.n > self.options.dense_limit:
            return int(off[0])
        # 优先走向剩余出路最少的顶点，同分取编号最小者
        counts = (self.graph.dense_matrix()[off] & ~self.on_path).sum(axis=1)
        return int(off[int(np.argmin(counts))])

    def extend_greedy(self) -> int:
        """两端贪心延伸，返回新增顶点数"""
        added = 0
        for _ in range(2):
            while True:
                nxt = self._pick_next(self.path[-1])
                if nxt is None:
                    break
                self.path.append(nxt)
                self.on_path[nxt] = True
                added += 1
            self.path.reverse()
        if added:
            self._closure = None
        return added

    def _has_exit(self, v: int) -> bool:
        nb = self.graph.sorted_neighbors(v)
        return bool((~self.on_path[nb]).any())

    def rotate_extend(self) -> bool:
        """旋转到一个有路径外邻居的端点；分别固定两端各试一次"""
        for _ in range(2):
            arr = np.array(self.path, dtype=np.int64)
            witness, _, hit = closure_arrays(self.graph, arr, self.on_path, stop=self._has_exit)
            if hit is not None:
                self.path = witness[hit].tolist()
                self._closure = None
                return True
            self.path.reverse()
        return False

    def closure(self) -> Tuple[np.ndarray, Dict[int, np.ndarray]]:
        """当前路径在当前图中的一级闭包（缓存至路径或图改变）"""
        if self._closure is None:
            arr = np.array(self.path, dtype=np.int64)
            witness, _, _ = closure_arrays(self.graph, arr, self.on_path)
            self._closure = (arr, witness)
        return self._closure

    def close_free(self) -> Optional[List[int]]:
        """只用当前图的边寻找闭合对，找到则返回覆盖 V(P) 的圈"""
        if len(self.path) < 3:
            return None
        arr, witness = self.closure()
        nbx = self.graph.neighbors(int(arr[0]))
        for w, p in witness.items():
            if w in nbx:
                return p.tolist()
        for a in islice(witness, self.options.free_closure_probes):
            rev = witness[a][::-1].copy()
            second, _, b = closure_arrays(
                self.graph, rev, self.on_path, stop=lambda v, a=a: self.graph.has_edge(a, v)
            )
            if b is not None and b != a:
                return second[b].tolist()
        return None

    def reopen(self, cycle: List[int]) -> bool:
        """
        从圈上某个有圈外邻居的顶点 c 处断开并接出一条边，得到多一个顶点的路径

        找不到时保持圈状态并返回 False。
        """
        self._set_path(cycle)
        order = sorted(range(len(cycle)), key=cycle.__getitem__)
        for idx in order:
            c = cycle[idx]
            nb = self.graph.sorted_neighbors(c)
            off = nb[~self.on_path[nb]]
            if len(off):
                self._set_path(cycle[idx + 1:] + cycle[:idx + 1] + [int(off[0])])
                self.cycle = None
                return True
        self.cycle = list(cycle)
        return False

    def exploit(self) -> Optional[List[int]]:
        """
        不消耗随机边，尽量延长路径或闭合

        Returns:
            哈密顿圈（若找到），否则 None，此时路径（或圈）在当前图中已无免费改进
        """
        n = self.graph.n
        while True:
            if self.cycle is not None:
                if not self.reopen(self.cycle):
                    return None
                continue
            self.extend_greedy()
            if self.rotate_extend():
                continue
            cyc = self.close_free()
            if cyc is None:
                return None
            if len(cyc) == n:
                return cyc
            if not self.reopen(cyc):
                return None

    # ------------------------------------------------------------------ 随机边命中

    def stream_hit(
        self,
        edge: Edge,
        closure: Tuple[np.ndarray, Dict[int, np.ndarray]],
        second_cache: Dict[int, Dict[int, np.ndarray]],
    ) -> Optional[Tuple[str, List[int]]]:
        """判断一条新边是否命中：END 到路径外（延伸）或已认证的闭合对（闭合）"""
        arr, witness = closure
        x0 = int(arr[0])
        for a, b in (edge, edge[::-1]):
            if a != x0 and a not in witness:
                continue
            if not self.on_path[b]:
                base = arr[::-1] if a == x0 else witness[a]
                return "extend", base.tolist() + [b]
            if len(arr) < 3:
                continue
            if a == x0:
                if b in witness:
                    return "close", witness[b].tolist()
                continue
            if b == x0:
                return "close", witness[a].tolist()
            second = second_cache.get(a)
            if second is None:
                second, _, _ = closure_arrays(self.graph, witness[a][::-1].copy(), self.on_path)
                second_cache[a] = second
            if b in second:
                return "close", second[b].tolist()
        return None

    def cycle_hit(self, edge: Edge) -> Optional[List[int]]:
        """圈状态下：恰有一端在圈上的边可以重开"""
        u, v = edge
        if self.on_path[u] == self.on_path[v]:
            return None
        c, out = (u, v) if self.on_path[u] else (v, u)
        cycle = self.cycle
        idx = cycle.index(c)
        return cycle[idx + 1:] + cycle[:idx + 1] + [out]


def maximal_path(
    graph: UndirectedGraph, seed: int = 0, options: EngineOptions = DEFAULT_OPTIONS
) -> PathState:
    """
    极大路径

    随机起点，两端贪心延伸，卡住后旋转到有出路的端点继续延伸。
    结果路径的两个端点在任何代表旋转下都没有路径外邻居，因此长度 ≥ δ(G)。
    """
    if graph.n == 0:
        raise GraphValidationError("空图没有路径")
    rng = make_rng(seed)
    start = int(rng.integers(graph.n))
    worker = PathWorker(graph, [start], options)
    while True:
        worker.extend_greedy()
        if not worker.rotate_extend():
            break
    logger.debug(f"极大路径: 起点 {start}, 顶点数 {len(worker.path)}")
    return PathState(tuple(worker.path))


@dataclass
class PhaseRecord:
    """一个阶段的结构化记录"""
    index: int
    kind: str
    cost: int
    path_vertices: int
    end_size: int

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "cost": self.cost,
            "path_vertices": self.path_vertices,
            "end_size": self.end_size,
        }


@dataclass
class SprinkleOutcome:
    hamiltonian: bool
    cycle: Optional[Tuple[int, ...]]
    edges_consumed: int
    phase_costs: List[int]
    final_path_len: int
    consumed: List[Edge] = field(default_factory=list)
    phases: List[PhaseRecord] = field(default_factory=list)
    failure_stage: Optional[str] = None


def sprinkle(
    graph: UndirectedGraph,
    stream: EdgeStream,
    budget: Optional[int] = None,
    *,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> SprinkleOutcome:
    """
    分阶段撒边

    先免费利用图中已有的边（延伸、旋转、闭合）；卡住后逐条消耗随机边，直到某条边
    从 END 连到路径外，或构成认证过的闭合对。闭合得到非哈密顿圈时，借助任一条
    从圈连出的边重开。预算耗尽是结果而不是异常。

    Args:
        graph: 起始图 G（通常为 H ∪ R₁）
        stream: 原始 H 补集上的 Replacement 流
        budget: 最多消耗的随机边数，默认 13n

    Raises:
        CertificateError: 得到的圈在 G ∪ 已消耗边中验证失败（引擎缺陷）
    """
    n = graph.n
    if budget is None:
        budget = BUDGET_FACTOR * n
    if n < 3:
        return SprinkleOutcome(False, None, 0, [], max(n - 1, 0), failure_stage="too_small")

    start = maximal_path(graph, derive_seed(stream.seed, 0, "start"), options)
    worker = PathWorker(graph, start.vertices, options)
    consumed: List[Edge] = []
    phase_costs: List[int] = []
    phases: List[PhaseRecord] = []

    def finish(cycle: Optional[List[int]], stage: Optional[str]) -> SprinkleOutcome:
        if cycle is not None:
            augmented = graph.with_edges(consumed)
            if not verify_hamilton_cycle(augmented, cycle):
                raise CertificateError("撒边过程得到的哈密顿圈验证失败")
        best = n - 1 if cycle is not None else len(worker.path) - 1
        return SprinkleOutcome(
            hamiltonian=cycle is not None,
            cycle=tuple(cycle) if cycle is not None else None,
            edges_consumed=len(consumed),
            phase_costs=phase_costs,
            final_path_len=best,
            consumed=consumed,
            phases=phases,
            failure_stage=stage,
        )

    while True:
        cycle = worker.exploit()
        if cycle is not None:
            logger.debug(f"哈密顿圈: 消耗 {len(consumed)} 条随机边, {len(phase_costs)} 个阶段")
            return finish(cycle, None)
        if stream.ground_size == 0:
            return finish(None, "empty_complement")

        in_cycle = worker.cycle is not None
        closure = None if in_cycle else worker.closure()
        end_size = 0 if in_cycle else len(closure[1]) + 1
        second_cache: Dict[int, Dict[int, np.ndarray]] = {}
        cost = 0
        hit = None
        while hit is None:
            if len(consumed) >= budget:
                if cost:
                    phase_costs.append(cost)
                    phases.append(PhaseRecord(len(phases), "budget", cost, len(worker.path), end_size))
                logger.debug(f"预算耗尽: {budget} 条随机边, 路径顶点数 {len(worker.path)}")
                return finish(None, "budget")
            edge = stream.draw()
            cost += 1
            consumed.append(edge)
            worker.add_edges([edge])
            if in_cycle:
                reopened = worker.cycle_hit(edge)
                if reopened is not None:
                    hit = ("reopen", reopened)
            else:
                hit = worker.stream_hit(edge, closure, second_cache)

        kind, vertices = hit
        phase_costs.append(cost)
        phases.append(PhaseRecord(len(phases), kind, cost, len(worker.path), end_size))
        logger.trace(f"阶段 {len(phases)}: {kind}, 代价 {cost}, |END|={end_size}, |P|={len(worker.path)}")
        if kind == "close":
            if len(vertices) == n:
                return finish(vertices, None)
            worker.reopen(vertices)
        else:
            worker.cycle = None
            worker._set_path(vertices)


@dataclass
class ExpansionReport:
    min_ratio: float
    worst_set: Tuple[int, ...]
    samples: int
    below_threshold: int
    threshold: float
    size_cap: int
    exhaustive: bool

    def as_dict(self) -> dict:
        return {
            "min_ratio": self.min_ratio,
            "worst_set": list(self.worst_set),
            "samples": self.samples,
            "below_threshold": self.below_threshold,
            "threshold": self.threshold,
            "size_cap": self.size_cap,
            "exhaustive": self.exhaustive,
        }


def expansion_check(
    graph: UndirectedGraph,
    trials: int = 10_000,
    size_cap: Optional[int] = None,
    *,
    seed: int = 0,
    threshold: float = 3.0,
    exhaustive_max_n: int = 20,
) -> ExpansionReport:
    """
    扩张性检查：统计 |N(S)|/|S| 的最小值

    n ≤ exhaustive_max_n 时枚举所有 1 ≤ |S| ≤ size_cap 的子集，否则随机抽样 trials 次。
    size_cap 默认 n // 5。
    """
    n = graph.n
    cap = n // 5 if size_cap is None else min(int(size_cap), n)
    best = float("inf")
    worst: Tuple[int, ...] = ()
    below = 0
    samples = 0
    if cap < 1:
        return ExpansionReport(best, worst, 0, 0, threshold, cap, n <= exhaustive_max_n)

    if n <= exhaustive_max_n:
        rows = graph.bit_rows()
        for k in range(1, cap + 1):
            for S in combinations(range(n), k):
                mask = 0
                nbr = 0
                for v in S:
                    mask |= 1 << v
                    nbr |= rows[v]
                ratio = (nbr & ~mask).bit_count() / k
                samples += 1
                below += ratio < threshold
                if ratio < best:
                    best, worst = ratio, S
        return ExpansionReport(best, worst, samples, below, threshold, cap, True)

    rng = make_rng(seed)
    matrix = graph.dense_matrix()
    for _ in range(trials):
        k = int(rng.integers(1, cap + 1))
        S = rng.choice(n, size=k, replace=False)
        nbr = matrix[S].any(axis=0)
        nbr[S] = False
        ratio = int(nbr.sum()) / k
        samples += 1
        below += ratio < threshold
        if ratio < best:
            best, worst = ratio, tuple(sorted(S.tolist()))
    return ExpansionReport(best, worst, samples, below, threshold, cap, False)


__all__ = [
    "PathState",
    "EndClosure",
    "PhaseRecord",
    "SprinkleOutcome",
    "ExpansionReport",
    "rotate",
    "replay_rotations",
    "end_closure",
    "end_pairs",
    "maximal_path",
    "sprinkle",
    "expansion_check",
    "verify_hamilton_cycle",
]
