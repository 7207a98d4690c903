"""
圈划分与合并

小独立数的稠密图先反复取最长圈，划分成不超过 k₀ = ⌊2/d⌋ 个不相交的圈；
再把圈逐个并入一条路径：图中已有的边能并就并（情形1），否则按轮次加入随机边。
路径较短时寻找从 Z 连到路径外的边（情形2），较长时寻找闭合对把路径闭成圈（情形3）。
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from .constants import round_probability
from .exceptions import CertificateError, ConfigError
from .graph import Edge, UndirectedGraph, verify_hamilton_cycle
from .options import DEFAULT_OPTIONS, EngineOptions
from .oracles import DEFAULT_LIMITS, OracleLimits, longest_cycle_bnb, longest_cycle_dp
from .rotation import PathWorker, closure_arrays, maximal_path
from .sampling import Bernoulli, EdgeStream, derive_seed

EXACT = "exact"
HEURISTIC = "heuristic"


# ---------------------------------------------------------------------- 最长圈


def _any_cycle(graph: UndirectedGraph) -> Optional[List[int]]:
    """DFS 找任意一个圈（回边）"""
    n = graph.n
    parent = [-1] * n
    depth = [-1] * n
    for root in range(n):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        stack = [(root, iter(graph.sorted_neighbors(root).tolist()))]
        while stack:
            v, it = stack[-1]
            for u in it:
                if u == parent[v]:
                    continue
                if depth[u] < 0:
                    parent[u] = v
                    depth[u] = depth[v] + 1
                    stack.append((u, iter(graph.sorted_neighbors(u).tolist())))
                    break
                if depth[u] < depth[v]:
                    cycle = [v]
                    while cycle[-1] != u:
                        cycle.append(parent[cycle[-1]])
                    return cycle
            else:
                stack.pop()
    return None


def _heuristic_cycle(graph: UndirectedGraph, seed: int, options: EngineOptions) -> Optional[List[int]]:
    """
    极大路径上的圈

    先尝试免费闭合得到覆盖整条路径的圈；否则对闭包中每个端点取路径上最远的邻居，
    得到长度 ≥ δ+1 的圈，取最长者。
    """
    if graph.n < 3:
        return None
    start = maximal_path(graph, seed, options)
    worker = PathWorker(graph, start.vertices, options)
    closed = worker.close_free()
    if closed is not None:
        return closed
    best: Optional[List[int]] = None
    for _ in range(2):
        arr, witness = worker.closure()
        for w, p in witness.items():
            pos = np.full(graph.n, -1, dtype=np.int64)
            pos[p] = np.arange(len(p))
            nb = graph.sorted_neighbors(w)
            where = pos[nb]
            where = where[where >= 0]
            if not len(where):
                continue
            i = int(where.min())
            if len(p) - i >= 3 and (best is None or len(p) - i > len(best)):
                best = p[i:].tolist()
        worker.reverse()
    return best if best is not None else _any_cycle(graph)


def longest_cycle(
    graph: UndirectedGraph,
    mode: str = EXACT,
    *,
    seed: int = 0,
    limits: OracleLimits = DEFAULT_LIMITS,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> Optional[Tuple[int, ...]]:
    """
    最长圈

    exact：n ≤ ham_max_n 用子集DP，n ≤ cycle_bnb_max_n 用分支定界；
    heuristic：极大路径加旋转闭包。无圈时返回 None。
    """
    if mode == EXACT:
        if graph.n <= limits.ham_max_n:
            return longest_cycle_dp(graph, limits)
        return longest_cycle_bnb(graph, limits)
    if mode != HEURISTIC:
        raise ConfigError("mode", f"未知的模式: {mode}")
    cycle = _heuristic_cycle(graph, seed, options)
    return tuple(cycle) if cycle is not None else None


# ---------------------------------------------------------------------- 圈划分


@dataclass
class CyclePartition:
    cycles: List[Tuple[int, ...]]
    k0: int
    exact: bool
    failure: Optional[str] = None
    leftover: Tuple[int, ...] = ()
    alpha_asserted: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    @property
    def within_k0(self) -> bool:
        return len(self.cycles) <= self.k0

    def validate(self, graph: UndirectedGraph) -> bool:
        """不相交、覆盖全部顶点、每段相邻为边、长度 ≥ 3"""
        seen = [v for c in self.cycles for v in c]
        if sorted(seen) != list(range(graph.n)):
            return False
        for c in self.cycles:
            if len(c) < 3:
                return False
            for i in range(len(c)):
                if not graph.has_edge(c[i], c[(i + 1) % len(c)]):
                    return False
        return True


def cycle_partition(
    graph: UndirectedGraph,
    d: float,
    mode: str = EXACT,
    *,
    seed: int = 0,
    alpha_asserted: Optional[bool] = None,
    limits: OracleLimits = DEFAULT_LIMITS,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> CyclePartition:
    """
    反复从剩余图中取最长圈直到顶点用完

    剩余图无圈而仍有顶点时记录失败（前提条件不成立），不抛异常。
    """
    k0 = math.floor(2 / d + 1e-9)
    remaining = list(range(graph.n))
    cycles: List[Tuple[int, ...]] = []
    while remaining:
        sub, labels = graph.subgraph(remaining)
        found = longest_cycle(sub, mode, seed=derive_seed(seed, len(cycles), "partition"),
                              limits=limits, options=options)
        if found is None:
            logger.debug(f"圈划分失败: 剩余 {len(remaining)} 个顶点无圈")
            return CyclePartition(cycles, k0, mode == EXACT, "partition", tuple(remaining), alpha_asserted)
        cycle = tuple(labels[v] for v in found)
        cycles.append(cycle)
        used = set(cycle)
        remaining = [v for v in remaining if v not in used]
    partition = CyclePartition(cycles, k0, mode == EXACT, None, (), alpha_asserted)
    if not partition.within_k0:
        logger.debug(f"圈数 {len(cycles)} 超过 k₀={k0}")
    return partition


# ---------------------------------------------------------------------- 轮次


@dataclass(frozen=True)
class RoundSchedule:
    """每轮以概率 p 独立包含补集中的每条边，1-(1-p)^r = m/|Ē|"""
    r: int
    p: float
    m: float
    ground: int

    @classmethod
    def solve(cls, m: float, ground: int, r: int) -> "RoundSchedule":
        return cls(r, round_probability(m, ground, r), m, ground)

    @property
    def expected_round_size(self) -> float:
        return self.p * self.ground


# ---------------------------------------------------------------------- 合并


@dataclass(frozen=True)
class MergeStep:
    """一次合并操作：case 为 case1 / case2 / case3，path_before 为操作前 |V(P)|"""
    case: str
    path_before: int
    cycles_after: int
    covered: bool


@dataclass
class MergeOutcome:
    hamiltonian: bool
    cycle: Optional[Tuple[int, ...]]
    edges_consumed: int
    rounds_used: int
    phase_costs: List[int]
    initial_cycles: int
    k0: int
    schedule: Optional[RoundSchedule] = None
    failure_stage: Optional[str] = None
    failure_reason: Optional[str] = None
    case_counts: Dict[str, int] = field(default_factory=lambda: {"case1": 0, "case2": 0, "case3": 0})
    within_k0: bool = True
    consumed: List[Edge] = field(default_factory=list)
    steps: List[MergeStep] = field(default_factory=list)


class MergeState:
    """
    当前路径 P 与其余不相交圈 A₁…A_s

    V(P) ∪ ⋃V(A_i) = V 在每一步后保持。
    """

    def __init__(self, graph: UndirectedGraph, path: Sequence[int], cycles: Sequence[Sequence[int]]):
        self.graph = graph
        self.path: List[int] = list(path)
        self.cycles: List[List[int]] = [list(c) for c in cycles]
        self.on_path = np.zeros(graph.n, dtype=bool)
        self.on_path[self.path] = True
        self.round = 0

    def _set_path(self, vertices: Sequence[int]) -> None:
        self.path = list(vertices)
        self.on_path[:] = False
        self.on_path[self.path] = True

    def check_cover(self) -> bool:
        seen = self.path + [v for c in self.cycles for v in c]
        return sorted(seen) == list(range(self.graph.n))

    def closure(self) -> Tuple[np.ndarray, Dict[int, np.ndarray]]:
        """Z = END(x, P)，x 为 path[0]；字典值为以 z 结尾的代表路径"""
        arr = np.array(self.path, dtype=np.int64)
        witness, _, _ = closure_arrays(self.graph, arr, self.on_path)
        return arr, witness

    def _z_path(self, z: int, arr: np.ndarray, witness: Dict[int, np.ndarray]) -> np.ndarray:
        return arr[::-1] if z == int(arr[0]) else witness[z]

    def absorb(self, z1: int, z2: int, arr: np.ndarray, witness: Dict[int, np.ndarray]) -> None:
        """沿边 z1z2 把 z2 所在的圈接到以 z1 结尾的代表路径后面"""
        ci = next(i for i, c in enumerate(self.cycles) if z2 in c)
        c = self.cycles.pop(ci)
        j = c.index(z2)
        rot = c[j:] + c[:j]
        tail = [rot[0]] + rot[1:][::-1]
        self._set_path(self._z_path(z1, arr, witness).tolist() + tail)

    def free_extension(self, arr: np.ndarray, witness: Dict[int, np.ndarray]) -> Optional[Edge]:
        """Z 中顶点到路径外的图中已有边，按 (z1, z2) 升序取第一条"""
        for z in sorted(list(witness) + [int(arr[0])]):
            nb = self.graph.sorted_neighbors(z)
            off = nb[~self.on_path[nb]]
            if len(off):
                return z, int(off[0])
        return None

    def free_close(self, arr: np.ndarray, witness: Dict[int, np.ndarray]) -> Optional[List[int]]:
        if len(arr) < 3:
            return None
        nbx = self.graph.neighbors(int(arr[0]))
        for z in sorted(witness):
            if z in nbx:
                return witness[z].tolist()
        return None

    def restart_from_cycle(self, closed: List[int]) -> None:
        """闭合出的圈加入圈列表，从最小顶点编号最小的另一个圈开一条新路径"""
        nxt = min(self.cycles, key=min)
        self.cycles = [c for c in self.cycles if c is not nxt] + [list(closed)]
        self._set_path(nxt)


def merge_run(
    host: UndirectedGraph,
    d: float,
    m: float,
    seed: int,
    *,
    mode: str = HEURISTIC,
    partition: Optional[CyclePartition] = None,
    round_multiplier: int = 1,
    limits: OracleLimits = DEFAULT_LIMITS,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> MergeOutcome:
    """
    划分成圈后逐个合并

    轮次 R_t 按需惰性抽取（Bernoulli(p)，补集为 Ē(H)），每轮只用于一次尝试。
    情形1可使用 G_{t-1} 中任意一条边。

    Raises:
        CertificateError: 成功时的圈在 H ∪ 已用轮次 中验证失败
    """
    if partition is None:
        partition = cycle_partition(host, d, mode, seed=derive_seed(seed, 0, "partition"),
                                    limits=limits, options=options)
    r = len(partition.cycles)
    outcome = MergeOutcome(False, None, 0, 0, [], r, partition.k0, within_k0=partition.within_k0)
    if not partition.ok:
        outcome.failure_stage = "partition"
        return outcome

    if r == 1 and len(partition.cycles[0]) == host.n:
        cycle = partition.cycles[0]
        if not verify_hamilton_cycle(host, cycle):
            raise CertificateError("划分得到的单圈不是哈密顿圈")
        outcome.hamiltonian = True
        outcome.cycle = tuple(cycle)
        return outcome

    ground = host.complement_size()
    rounds = max(1, r * max(1, round_multiplier))
    schedule = RoundSchedule.solve(m, ground, rounds)
    outcome.schedule = schedule

    ordered = sorted(partition.cycles, key=len, reverse=True)
    last = list(ordered[-1])
    state = MergeState(host, last, ordered[:-1])
    n = host.n
    consumed: List[Edge] = []

    def next_round(case: str) -> Optional[List[Edge]]:
        if state.round >= rounds:
            outcome.failure_stage = case
            outcome.failure_reason = "rounds_exhausted"
            return None
        state.round += 1
        stream = EdgeStream(host, Bernoulli(schedule.p), derive_seed(seed, state.round, "round"),
                            **options.stream_options())
        edges = stream.sample()
        consumed.extend(edges)
        outcome.phase_costs.append(len(edges))
        return edges

    def record(case: str, before: int) -> None:
        covered = state.check_cover()
        outcome.steps.append(MergeStep(case, before, len(state.cycles), covered))
        if not covered:
            raise CertificateError(f"{case} 之后路径与圈不再覆盖顶点集")

    def finish(cycle: Optional[List[int]]) -> MergeOutcome:
        outcome.rounds_used = state.round
        outcome.edges_consumed = len(consumed)
        outcome.consumed = consumed
        if cycle is not None:
            if not verify_hamilton_cycle(host.with_edges(consumed), cycle):
                raise CertificateError("合并得到的哈密顿圈验证失败")
            outcome.hamiltonian = True
            outcome.cycle = tuple(cycle)
        return outcome

    while True:
        arr, witness = state.closure()
        if len(state.path) == n:
            closed = state.free_close(arr, witness)
            if closed is not None:
                return finish(closed)

        hit = state.free_extension(arr, witness)
        if hit is not None:
            before = len(state.path)
            state.absorb(*hit, arr, witness)
            outcome.case_counts["case1"] += 1
            record("case1", before)
            continue

        if len(state.path) <= n / 2:
            edges = next_round("case2")
            if edges is None:
                return finish(None)
            state.graph = state.graph.with_edges(edges)
            outcome.case_counts["case2"] += 1
            z_set = set(witness) | {int(arr[0])}
            hits = sorted(
                (a, b) for u, v in edges for a, b in ((u, v), (v, u))
                if a in z_set and not state.on_path[b]
            )
            if not hits:
                outcome.failure_stage = "case2"
                outcome.failure_reason = "no_edge"
                return finish(None)
            before = len(state.path)
            state.absorb(*hits[0], arr, witness)
            record("case2", before)
            continue

        before = len(state.path)
        case = "close"
        closed = state.free_close(arr, witness)
        if closed is None:
            case = "case3"
            edges = next_round("case3")
            if edges is None:
                return finish(None)
            prior = state.graph
            state.graph = state.graph.with_edges(edges)
            outcome.case_counts["case3"] += 1
            closed = _case3_close(prior, state, arr, witness, edges)
            if closed is None:
                outcome.failure_stage = "case3"
                outcome.failure_reason = "no_edge"
                return finish(None)
        if len(closed) == n:
            outcome.steps.append(MergeStep(case, before, 0, sorted(closed) == list(range(n))))
            return finish(closed)
        state.restart_from_cycle(closed)
        record(case, before)


def _case3_close(
    before: UndirectedGraph,
    state: MergeState,
    arr: np.ndarray,
    witness: Dict[int, np.ndarray],
    edges: Sequence[Edge],
) -> Optional[List[int]]:
    """
    在本轮的边中寻找闭合对 (z, z′)，z ∈ Z ∪ {x}，z′ ∈ A_z = END(z, Q_z)

    A_z 在 G_{t-1} 上计算，只对被本轮边命中的 z 惰性计算。
    """
    x = int(arr[0])
    cache: Dict[int, Dict[int, np.ndarray]] = {}
    for a, b in sorted(e for u, v in edges for e in ((u, v), (v, u))):
        if not (state.on_path[a] and state.on_path[b]):
            continue
        if a == x:
            if b in witness:
                return witness[b].tolist()
            continue
        if a not in witness:
            continue
        if b == x:
            return witness[a].tolist()
        second = cache.get(a)
        if second is None:
            second, _, _ = closure_arrays(before, witness[a][::-1].copy(), state.on_path)
            cache[a] = second
        if b in second:
            return second[b].tolist()
    return None


__all__ = [
    "CyclePartition",
    "MergeState",
    "MergeOutcome",
    "MergeStep",
    "RoundSchedule",
    "longest_cycle",
    "cycle_partition",
    "merge_run",
]
