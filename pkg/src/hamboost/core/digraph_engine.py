"""
有向图引擎

二部双图上的最大匹配给出圈覆盖；近圈覆盖（一条路径加若干圈）上做出/入路径延伸、
双交换旋转族 Q_v 与二级族 𝒬_v；最后用随机弧闭合，每个阶段使圈数减一，直到只剩一个圈。
"""

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from .constants import threshold_constants
from .exceptions import CertificateError, MatchingError, SurgeryError
from .graph import Digraph, Edge, verify_hamilton_cycle
from .options import DEFAULT_OPTIONS, EngineOptions
from .sampling import EdgeStream, ExactM, Replacement, derive_seed, make_rng

Cycle = Tuple[int, ...]


def canonical_cycle(cycle: Sequence[int]) -> Cycle:
    """旋转到以最小顶点开头（保持方向）"""
    i = min(range(len(cycle)), key=cycle.__getitem__)
    return tuple(cycle[i:]) + tuple(cycle[:i])


# ---------------------------------------------------------------------- 匹配与圈覆盖


@dataclass(frozen=True)
class BipartiteDouble:
    """左侧 0..n-1，右侧 n..2n-1；每条弧 (x, y) 对应边 (x, n+y)"""
    n: int
    adj: Tuple[Tuple[int, ...], ...]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj)

    def edges(self) -> List[Edge]:
        return [(x, self.n + y) for x in range(self.n) for y in self.adj[x]]


def bipartite_double(graph: Digraph) -> BipartiteDouble:
    return BipartiteDouble(graph.n, tuple(tuple(sorted(graph.out_neighbors(x))) for x in range(graph.n)))


@dataclass(frozen=True)
class Matching:
    """pair_of_left[x] 为右侧伙伴 n+y，未匹配为 None"""
    n: int
    pair_of_left: Tuple[Optional[int], ...]

    @property
    def size(self) -> int:
        return sum(1 for p in self.pair_of_left if p is not None)

    @property
    def is_perfect(self) -> bool:
        return self.size == self.n


class HopcroftKarp:
    """分层 BFS + 沿层 DFS 增广的最大匹配；DFS 用显式栈实现"""

    def __init__(self, bipartite: BipartiteDouble):
        self.b = bipartite
        n = bipartite.n
        self.match_left: List[int] = [-1] * n
        self.match_right: List[int] = [-1] * n
        self.dist: List[int] = [0] * n

    def _bfs(self) -> bool:
        n = self.b.n
        inf = n + 1
        queue = deque()
        for x in range(n):
            if self.match_left[x] < 0:
                self.dist[x] = 0
                queue.append(x)
            else:
                self.dist[x] = inf
        found = False
        while queue:
            x = queue.popleft()
            for y in self.b.adj[x]:
                partner = self.match_right[y]
                if partner < 0:
                    found = True
                elif self.dist[partner] == inf:
                    self.dist[partner] = self.dist[x] + 1
                    queue.append(partner)
        return found

    def _augment(self, root: int) -> bool:
        n = self.b.n
        inf = n + 1
        adj = self.b.adj
        stack = [(root, 0)]
        chosen: List[int] = []
        while stack:
            x, i = stack[-1]
            if i >= len(adj[x]):
                self.dist[x] = inf
                stack.pop()
                if chosen:
                    chosen.pop()
                continue
            stack[-1] = (x, i + 1)
            y = adj[x][i]
            partner = self.match_right[y]
            if partner < 0:
                chosen.append(y)
                for (u, _), v in zip(stack, chosen):
                    self.match_left[u] = v
                    self.match_right[v] = u
                return True
            if self.dist[partner] == self.dist[x] + 1:
                chosen.append(y)
                stack.append((partner, 0))
        return False

    def run(self) -> Matching:
        n = self.b.n
        while self._bfs():
            for x in range(n):
                if self.match_left[x] < 0:
                    self._augment(x)
        pairs = tuple(n + y if y >= 0 else None for y in self.match_left)
        return Matching(n, pairs)


def max_matching(bipartite: BipartiteDouble) -> Matching:
    return HopcroftKarp(bipartite).run()


@dataclass(frozen=True)
class CycleCover:
    cycles: Tuple[Cycle, ...]

    @classmethod
    def of(cls, cycles: Sequence[Sequence[int]]) -> "CycleCover":
        return cls(tuple(sorted(canonical_cycle(c) for c in cycles)))

    def __len__(self) -> int:
        return len(self.cycles)

    def arcs(self) -> List[Edge]:
        return [(c[i], c[(i + 1) % len(c)]) for c in self.cycles for i in range(len(c))]

    def validate(self, graph: Digraph) -> None:
        seen: List[int] = [v for c in self.cycles for v in c]
        if sorted(seen) != list(range(graph.n)):
            raise SurgeryError("圈覆盖不是顶点集的划分")
        for c in self.cycles:
            if len(c) < 2:
                raise SurgeryError(f"圈长度小于2: {c}")
        for u, v in self.arcs():
            if not graph.has_arc(u, v):
                raise SurgeryError(f"圈覆盖中的弧 ({u}, {v}) 不在图中")


def cycle_cover(graph: Digraph, matching: Matching) -> CycleCover:
    """
    完美匹配 → 圈覆盖：沿 x → M(x)-n 走

    Raises:
        MatchingError: 匹配不完美或含非弧的配对
    """
    n = graph.n
    if not matching.is_perfect:
        raise MatchingError(f"匹配大小 {matching.size} < n={n}，不是完美匹配")
    succ = [p - n for p in matching.pair_of_left]
    for x, y in enumerate(succ):
        if not graph.has_arc(x, y):
            raise MatchingError(f"配对 ({x}, {n + y}) 不对应图中的弧")
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        v = start
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = succ[v]
        cycles.append(cyc)
    return CycleCover.of(cycles)


def cover_to_matching(cover: CycleCover, n: int) -> Matching:
    """圈覆盖 → 完美匹配（cycle_cover 的逆）"""
    pairs: List[Optional[int]] = [None] * n
    for u, v in cover.arcs():
        pairs[u] = n + v
    return Matching(n, tuple(pairs))


def is_strongly_connected(graph: Digraph) -> bool:
    """从顶点0分别沿出弧、入弧 BFS，两次都覆盖全部顶点"""
    n = graph.n
    if n <= 1:
        return True

    def covers(step: Callable[[int], frozenset]) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for u in step(v):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return len(seen) == n

    return covers(graph.out_neighbors) and covers(graph.in_neighbors)


# ---------------------------------------------------------------------- 近圈覆盖


@dataclass(frozen=True)
class NearCycleCover:
    """路径 u₀…u_k 加上若干互不相交的圈"""
    path: Tuple[int, ...]
    cycles: Tuple[Cycle, ...]

    def validate(self, graph: Digraph) -> None:
        seen = list(self.path) + [v for c in self.cycles for v in c]
        if sorted(seen) != list(range(graph.n)):
            raise SurgeryError("近圈覆盖不是顶点集的划分")
        for u, v in zip(self.path, self.path[1:]):
            if not graph.has_arc(u, v):
                raise SurgeryError(f"路径弧 ({u}, {v}) 不在图中")
        for c in self.cycles:
            for i in range(len(c)):
                if not graph.has_arc(c[i], c[(i + 1) % len(c)]):
                    raise SurgeryError(f"圈弧 ({c[i]}, {c[(i + 1) % len(c)]}) 不在图中")

    def cycle_index(self) -> Dict[int, Tuple[int, int]]:
        """顶点 → (圈序号, 圈内位置)"""
        return {v: (ci, j) for ci, c in enumerate(self.cycles) for j, v in enumerate(c)}


def ncc_init(graph: Digraph, cover: CycleCover) -> NearCycleCover:
    """
    合并两个圈为一条路径

    取含圈间出弧的字典序最小的圈 C 及其最小出弧 (y, z)，z ∈ C'。删去 C 中离开 y 的弧
    与 C' 中进入 z 的弧，加入 (y, z)，得到从 σ(y) 到 σ⁻¹(z) 的路径。

    Raises:
        SurgeryError: 圈数小于2，或没有圈间弧
    """
    if len(cover) < 2:
        raise SurgeryError(f"ncc_init 需要至少2个圈，当前 {len(cover)} 个")
    cycles = [canonical_cycle(c) for c in sorted(cover.cycles)]
    owner = {v: ci for ci, c in enumerate(cycles) for v in c}
    for ci, c in enumerate(cycles):
        best: Optional[Edge] = None
        for y in sorted(c):
            for z in graph.sorted_out(y).tolist():
                if owner[z] != ci:
                    best = (y, z)
                    break
            if best is not None:
                break
        if best is None:
            continue
        y, z = best
        cj = owner[z]
        c2 = cycles[cj]
        iy = c.index(y)
        iz = c2.index(z)
        first = c[iy + 1:] + c[:iy + 1]
        second = c2[iz:] + c2[:iz]
        rest = tuple(cyc for k, cyc in enumerate(cycles) if k not in (ci, cj))
        return NearCycleCover(first + second, rest)
    raise SurgeryError("没有圈间弧，图不是强连通的")


def out_extend(graph: Digraph, ncc: NearCycleCover) -> Optional[NearCycleCover]:
    """终点 u_k 有弧指向某圈顶点 v 时，把该圈从 v 起接到路径末尾"""
    owner = ncc.cycle_index()
    for v in graph.sorted_out(ncc.path[-1]).tolist():
        hit = owner.get(v)
        if hit is None:
            continue
        ci, j = hit
        c = ncc.cycles[ci]
        rest = ncc.cycles[:ci] + ncc.cycles[ci + 1:]
        return NearCycleCover(ncc.path + c[j:] + c[:j], rest)
    return None


def in_extend(graph: Digraph, ncc: NearCycleCover) -> Optional[NearCycleCover]:
    """某圈顶点 w 有弧指向起点 u₀ 时，把该圈 σ(w)…w 接到路径开头"""
    owner = ncc.cycle_index()
    for w in graph.sorted_in(ncc.path[0]).tolist():
        hit = owner.get(w)
        if hit is None:
            continue
        ci, j = hit
        c = ncc.cycles[ci]
        rest = ncc.cycles[:ci] + ncc.cycles[ci + 1:]
        return NearCycleCover(c[j + 1:] + c[:j + 1] + ncc.path, rest)
    return None


# ---------------------------------------------------------------------- 旋转族


def _swap(base: Sequence[int], j: int, l: int) -> Tuple[int, ...]:
    # 删 (u_j, u_{j+1}) 与 (u_{l-1}, u_l)，加 (u_k, u_{j+1}) 与 (u_j, u_l)
    return tuple(base[:j + 1]) + tuple(base[l:]) + tuple(base[j + 1:l])


@dataclass
class _SwapTable:
    S: Tuple[int, ...]
    T: Tuple[int, ...]
    t_prime: Tuple[int, ...]
    lam: Dict[int, int]
    index: Dict[int, Tuple[int, int]]


def _swap_table(
    path: Sequence[int],
    h: int,
    out_of: Callable[[int], np.ndarray],
    in_of: Callable[[int], np.ndarray],
    n: int,
) -> _SwapTable:
    """
    对路径 u₀…u_k 计算 S、T、T′ 以及每个可用 v 的 λ(v)

    S = {u_{i-1} : 1 ≤ i ≤ k-h, (u_k, u_i) 为弧}，T = {u_{k-h}, …, u_k}，T′ = N⁺(S) ∩ T。
    λ(v) 取 S 中有弧指向 v 且 σλ(v) 严格位于 v 之前的最小顶点。
    """
    k = len(path) - 1
    limit = k - h
    if limit < 1:
        return _SwapTable((), tuple(path[max(limit, 0):]), (), {}, {})
    arr = np.asarray(path, dtype=np.int64)
    pos = np.full(n, -1, dtype=np.int64)
    pos[arr] = np.arange(k + 1)

    back = out_of(int(arr[-1]))
    p = pos[back]
    p = p[(p >= 1) & (p <= limit)]
    in_s = np.zeros(n, dtype=bool)
    in_s[arr[p - 1]] = True
    S = tuple(sorted(arr[p - 1].tolist()))
    T = tuple(arr[limit:].tolist())

    t_prime: List[int] = []
    lam: Dict[int, int] = {}
    index: Dict[int, Tuple[int, int]] = {}
    for v in sorted(T):
        preds = in_of(v)
        preds = preds[in_s[preds]]
        if not len(preds):
            continue
        t_prime.append(v)
        lv = int(pos[v])
        ok = preds[pos[preds] + 1 < lv]
        if len(ok):
            s = int(ok[0])
            lam[v] = s
            index[v] = (int(pos[s]), lv)
    return _SwapTable(S, T, tuple(t_prime), lam, index)


@dataclass
class RotationFamily:
    """
    路径 Q 的双交换旋转族

    paths[v] = Q_v：起点 u₀、终点 σ⁻¹(v)、顶点集与 Q 相同。
    second_level(v) 给出 𝒬_v：终点都为 σ⁻¹(v)、起点互不相同的路径（含 Q_v 自身），惰性构造。
    """
    graph: Digraph
    ncc: NearCycleCover
    h: int
    S: Tuple[int, ...]
    T: Tuple[int, ...]
    t_prime: Tuple[int, ...]
    lam: Dict[int, int]
    paths: Dict[int, Tuple[int, ...]]
    ends: Dict[int, int] = field(default_factory=dict)
    cap: int = 0
    failure: Optional[str] = None
    _second: Dict[int, Dict[int, Optional[Tuple[int, int]]]] = field(default_factory=dict)

    def end_of(self, v: int) -> int:
        return self.paths[v][-1]

    def second_level(self, v: int) -> Dict[int, Optional[Tuple[int, int]]]:
        """起点 → 在反向图上对 Q_v 做双交换的下标；Q_v 自身记为 None"""
        table = self._second.get(v)
        if table is None:
            q_v = self.paths[v]
            mirrored = q_v[::-1]
            swaps = _swap_table(mirrored, self.h, self.graph.sorted_in, self.graph.sorted_out, self.graph.n)
            table = {q_v[0]: None}
            for w in swaps.t_prime:
                if len(table) >= self.cap:
                    break
                if w in swaps.index:
                    j, l = swaps.index[w]
                    table[mirrored[l - 1]] = (j, l)
            self._second[v] = table
        return table

    def second_path(self, v: int, start: int) -> Tuple[int, ...]:
        """𝒬_v 中起点为 start 的路径"""
        swap = self.second_level(v)[start]
        q_v = self.paths[v]
        if swap is None:
            return q_v
        j, l = swap
        return _swap(q_v[::-1], j, l)[::-1]


def rotation_family(
    graph: Digraph, ncc: NearCycleCover, d: float, options: EngineOptions = DEFAULT_OPTIONS
) -> RotationFamily:
    """
    构造 S、T、T′、λ 与全部 Q_v

    S 为空或 T′ 中没有可用顶点时，返回 failure 已设置的族（不抛异常）。
    """
    n = graph.n
    h = math.ceil(d * n / 2 - 1e-9)
    path = ncc.path
    table = _swap_table(path, h, graph.sorted_out, graph.sorted_in, n)
    paths = {v: _swap(path, *table.index[v]) for v in sorted(table.index)}
    family = RotationFamily(
        graph=graph,
        ncc=ncc,
        h=h,
        S=table.S,
        T=table.T,
        t_prime=table.t_prime,
        lam=table.lam,
        paths=paths,
        ends={q[-1]: v for v, q in paths.items()},
        cap=max(n, 1),
    )
    if not table.S:
        family.failure = "rotation_family"
    elif not paths:
        family.failure = "t_prime_empty"
    if family.failure:
        logger.debug(f"旋转族构造失败: |S|={len(table.S)}, |T′|={len(table.t_prime)}, k={len(path) - 1}, h={h}")
    return family


@dataclass
class FreeMove:
    kind: str
    ncc: Optional[NearCycleCover] = None
    cover: Optional[CycleCover] = None


def family_free_move(graph: Digraph, family: RotationFamily) -> Optional[FreeMove]:
    """
    不消耗随机弧的尝试：Q_v 的出延伸、𝒬_v 中路径的入延伸，以及图中已有的闭合弧

    按 (v, 起点) 升序尝试。
    """
    ncc = family.ncc
    for v in sorted(family.paths):
        q_v = family.paths[v]
        ext = out_extend(graph, NearCycleCover(q_v, ncc.cycles))
        if ext is not None:
            return FreeMove("out_extend", ncc=ext)
    for v in sorted(family.paths):
        end = family.end_of(v)
        for start in sorted(family.second_level(v)):
            candidate = NearCycleCover(family.second_path(v, start), ncc.cycles)
            ext = in_extend(graph, candidate)
            if ext is not None:
                return FreeMove("in_extend", ncc=ext)
            if graph.has_arc(end, start):
                return FreeMove("close", cover=CycleCover.of(list(ncc.cycles) + [candidate.path]))
    return None


@dataclass
class CloseResult:
    cover: Optional[CycleCover]
    consumed: List[Edge]
    closing_arc: Optional[Edge] = None


def close_with_stream(
    graph: Digraph, family: RotationFamily, stream: EdgeStream, budget: int
) -> CloseResult:
    """
    逐条消耗随机弧，直到某条弧从某个 σ⁻¹(v) 指向 𝒬_v 中某条路径的起点

    预算耗尽时 cover 为 None。
    """
    consumed: List[Edge] = []
    while len(consumed) < budget:
        if stream.ground_size == 0:
            break
        a, b = stream.draw()
        consumed.append((a, b))
        v = family.ends.get(a)
        if v is None:
            continue
        if b in family.second_level(v):
            path = family.second_path(v, b)
            cover = CycleCover.of(list(family.ncc.cycles) + [path])
            return CloseResult(cover, consumed, (a, b))
    return CloseResult(None, consumed)


# ---------------------------------------------------------------------- 流水线


@dataclass
class DigraphOutcome:
    hamiltonian: bool
    cycle: Optional[Tuple[int, ...]]
    r1_size: int
    r2_consumed: int
    phases: int
    failure_stage: Optional[str] = None
    cover_sizes: List[int] = field(default_factory=list)
    phase_costs: List[int] = field(default_factory=list)
    free_closures: int = 0
    strongly_connected: Optional[bool] = None
    consumed: List[Edge] = field(default_factory=list)
    r1: List[Edge] = field(default_factory=list)

    @property
    def edges_consumed(self) -> int:
        return self.r2_consumed


def hamilton(
    host: Digraph,
    d: float,
    seed: int,
    rho1: Optional[float] = None,
    rho2: Optional[float] = None,
    *,
    budget: Optional[int] = None,
    options: EngineOptions = DEFAULT_OPTIONS,
) -> DigraphOutcome:
    """
    有向图完整流水线

    H₁ = H ∪ R₁（ExactM，⌈ρ₁n⌉ 条弧）→ 完美匹配得圈覆盖 → 强连通检查 →
    反复 {ncc_init, 延伸, 旋转族, 随机弧闭合}，R₂ 为全局预算 ⌈ρ₂n⌉ 的有放回流
    （在 H₁ 的补集上抽取）。budget 给定时覆盖 ⌈ρ₂n⌉。

    Raises:
        CertificateError: 最终圈在 H ∪ R₁ ∪ 已消耗弧 中验证失败
    """
    n = host.n
    consts = threshold_constants(d)
    rho1 = consts.rho1 if rho1 is None else rho1
    rho2 = consts.rho2 if rho2 is None else rho2

    want = math.ceil(rho1 * n)
    room = host.complement_size()
    if want > room:
        logger.warning(f"|R₁|={want} 超过补集大小 {room}，截断为 {room}")
        want = room
    r1 = EdgeStream(host, ExactM(want), derive_seed(seed, 0, "r1"), **options.stream_options()).sample()
    h1 = host.with_arcs(r1)
    if budget is None:
        budget = math.ceil(rho2 * n)
    stream = EdgeStream(h1, Replacement(), derive_seed(seed, 0, "r2"), **options.stream_options())
    outcome = DigraphOutcome(False, None, len(r1), 0, 0, r1=r1)

    if n < 2:
        outcome.failure_stage = "too_small"
        return outcome

    matching = max_matching(bipartite_double(h1))
    if not matching.is_perfect:
        logger.debug(f"匹配阶段失败: 最大匹配 {matching.size} < {n}")
        outcome.failure_stage = "matching"
        return outcome
    cover = cycle_cover(h1, matching)
    outcome.cover_sizes.append(len(cover))
    outcome.strongly_connected = is_strongly_connected(h1)
    if len(cover) > 1 and not outcome.strongly_connected:
        outcome.failure_stage = "connectivity"
        return outcome

    graph = h1
    consumed: List[Edge] = []
    while len(cover) > 1:
        ncc = ncc_init(graph, cover)
        ncc.validate(graph)
        outcome.phases += 1
        phase_cost = 0
        while True:
            ext = out_extend(graph, ncc) or in_extend(graph, ncc)
            if ext is not None:
                ncc = ext
                ncc.validate(graph)
                continue
            if graph.has_arc(ncc.path[-1], ncc.path[0]) and len(ncc.path) >= 2:
                cover = CycleCover.of(list(ncc.cycles) + [ncc.path])
                outcome.free_closures += 1
                break
            family = rotation_family(graph, ncc, d, options)
            if family.failure:
                outcome.failure_stage = family.failure
                outcome.r2_consumed = len(consumed)
                outcome.consumed = consumed
                return outcome
            move = family_free_move(graph, family)
            if move is not None:
                if move.kind == "close":
                    cover = move.cover
                    outcome.free_closures += 1
                    break
                ncc = move.ncc
                ncc.validate(graph)
                continue
            result = close_with_stream(graph, family, stream, budget - len(consumed))
            consumed.extend(result.consumed)
            phase_cost += len(result.consumed)
            graph = graph.with_arcs(result.consumed)
            if result.cover is None:
                outcome.phase_costs.append(phase_cost)
                outcome.failure_stage = "budget"
                outcome.r2_consumed = len(consumed)
                outcome.consumed = consumed
                logger.debug(f"R₂ 预算耗尽: {budget} 条弧, 剩余 {len(cover)} 个圈")
                return outcome
            cover = result.cover
            break
        cover.validate(graph)
        outcome.phase_costs.append(phase_cost)
        outcome.cover_sizes.append(len(cover))
        logger.trace(f"有向阶段 {outcome.phases}: 圈数 {len(cover)}, 消耗 {phase_cost}")

    cycle = cover.cycles[0]
    if not verify_hamilton_cycle(h1.with_arcs(consumed), cycle):
        raise CertificateError("有向流水线得到的哈密顿圈验证失败")
    outcome.hamiltonian = True
    outcome.cycle = cycle
    outcome.r2_consumed = len(consumed)
    outcome.consumed = consumed
    return outcome


# ---------------------------------------------------------------------- 扩张性抽检


@dataclass
class Q2Report:
    min_ratio: float
    min_out_ratio: float
    min_in_ratio: float
    samples: int
    below_half: int

    def as_dict(self) -> dict:
        return {
            "min_ratio": self.min_ratio,
            "min_out_ratio": self.min_out_ratio,
            "min_in_ratio": self.min_in_ratio,
            "samples": self.samples,
            "below_half": self.below_half,
        }


def q2_check(graph: Digraph, trials: int, d: float, seed: int = 0) -> Q2Report:
    """
    随机抽取不相交的 S、T（|S|, |T| ≥ ⌈dn/2⌉），统计 |N⁺(S)∩T|/|T| 与 |N⁻(S)∩T|/|T| 的最小值
    """
    n = graph.n
    h = max(1, math.ceil(d * n / 2 - 1e-9))
    out_min = in_min = float("inf")
    below = 0
    samples = 0
    if 2 * h > n:
        return Q2Report(float("inf"), out_min, in_min, 0, 0)
    rng = make_rng(seed)
    matrix = graph.dense_matrix()
    for _ in range(trials):
        s_size = int(rng.integers(h, n - h + 1))
        t_size = int(rng.integers(h, n - s_size + 1))
        perm = rng.permutation(n)
        S = perm[:s_size]
        T = perm[s_size:s_size + t_size]
        out_hit = matrix[S].any(axis=0)[T].sum() / t_size
        in_hit = matrix[:, S].any(axis=1)[T].sum() / t_size
        out_min = min(out_min, float(out_hit))
        in_min = min(in_min, float(in_hit))
        below += min(out_hit, in_hit) < 0.5
        samples += 1
    return Q2Report(min(out_min, in_min), out_min, in_min, samples, below)


__all__ = [
    "BipartiteDouble",
    "Matching",
    "CycleCover",
    "NearCycleCover",
    "RotationFamily",
    "DigraphOutcome",
    "Q2Report",
    "bipartite_double",
    "max_matching",
    "cycle_cover",
    "cover_to_matching",
    "is_strongly_connected",
    "ncc_init",
    "out_extend",
    "in_extend",
    "rotation_family",
    "family_free_move",
    "close_with_stream",
    "hamilton",
    "q2_check",
]
