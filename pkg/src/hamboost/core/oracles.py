"""
小规模精确预言机

哈密顿性（子集DP与排列枚举两套独立实现）、最长路、最长圈、独立数、二部图最大匹配。
每个预言机在超出自身规模上限时拒绝计算（OracleLimitError），不会悄悄退化。
"""

from dataclasses import dataclass, fields
from itertools import permutations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from loguru import logger

from .exceptions import OracleLimitError
from .graph import AnyGraph, Digraph, UndirectedGraph


@dataclass(frozen=True)
class OracleLimits:
    ham_max_n: int = 18
    alpha_max_n: int = 40
    matching_exhaustive_max_n: int = 6
    permutation_max_n: int = 10
    cycle_bnb_max_n: int = 40
    bnb_node_limit: int = 2_000_000

    @classmethod
    def from_config(cls, config: Optional[Dict[str, Any]]) -> "OracleLimits":
        section = (config or {}).get("oracles", {})
        known = {f.name for f in fields(cls)}
        return cls(**{k: int(v) for k, v in section.items() if k in known})


DEFAULT_LIMITS = OracleLimits()


@dataclass(frozen=True)
class HamiltonResult:
    hamiltonian: bool
    cycle: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.hamiltonian


def _in_rows(graph: AnyGraph) -> List[int]:
    """入邻居位掩码；无向图即邻居掩码"""
    if isinstance(graph, Digraph):
        return graph.reversed().bit_rows()
    return graph.bit_rows()


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def brute_hamiltonian(graph: AnyGraph, limits: OracleLimits = DEFAULT_LIMITS) -> HamiltonResult:
    """
    子集DP判定哈密顿性

    reach[S] 的第 v 位表示存在从顶点0出发、恰好经过 S、止于 v 的路径；
    S 总含顶点0，只遍历奇数掩码。为真时附带一个见证圈。
    """
    n = graph.n
    if n > limits.ham_max_n:
        raise OracleLimitError("brute_hamiltonian", n, limits.ham_max_n)
    directed = isinstance(graph, Digraph)
    if n < (2 if directed else 3):
        return HamiltonResult(False)

    out_rows = graph.bit_rows()
    in_rows = _in_rows(graph)
    size = 1 << n
    reach = [0] * size
    reach[1] = 1
    for mask in range(3, size, 2):
        r = 0
        rest = mask & ~1
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            if reach[mask ^ low] & in_rows[v]:
                r |= low
            rest ^= low
        reach[mask] = r

    full = size - 1
    closing = [v for v in _iter_bits(reach[full] & ~1) if out_rows[v] & 1]
    if not closing:
        return HamiltonResult(False)

    v = closing[0]
    mask = full
    tail: List[int] = []
    while mask != 1:
        tail.append(v)
        prev = mask ^ (1 << v)
        candidates = reach[prev] & in_rows[v]
        v = (candidates & -candidates).bit_length() - 1
        mask = prev
    cycle = (0,) + tuple(reversed(tail))
    return HamiltonResult(True, cycle)


def brute_hamiltonian_permutations(graph: AnyGraph, limits: OracleLimits = DEFAULT_LIMITS) -> HamiltonResult:
    """固定顶点0，枚举其余顶点的全部排列（与子集DP互相校验）"""
    n = graph.n
    if n > limits.permutation_max_n:
        raise OracleLimitError("brute_hamiltonian_permutations", n, limits.permutation_max_n)
    directed = isinstance(graph, Digraph)
    if n < (2 if directed else 3):
        return HamiltonResult(False)
    adjacent = graph.has_arc if directed else graph.has_edge
    for rest in permutations(range(1, n)):
        order = (0,) + rest
        if all(adjacent(order[i], order[(i + 1) % n]) for i in range(n)):
            return HamiltonResult(True, order)
    return HamiltonResult(False)


def longest_path_exact(graph: UndirectedGraph, limits: OracleLimits = DEFAULT_LIMITS) -> Tuple[int, ...]:
    """
    精确最长路（按顶点数），返回顶点序列

    reach[S] 的第 v 位表示存在恰好经过 S、止于 v 的路径（起点任意）。
    """
    n = graph.n
    if n > limits.ham_max_n:
        raise OracleLimitError("longest_path_exact", n, limits.ham_max_n)
    if n == 0:
        return ()
    rows = graph.bit_rows()
    size = 1 << n
    reach = [0] * size
    best_mask, best_count = 1, 1
    for mask in range(1, size):
        if mask & (mask - 1) == 0:
            reach[mask] = mask
            continue
        r = 0
        for v in _iter_bits(mask):
            if reach[mask ^ (1 << v)] & rows[v]:
                r |= 1 << v
        reach[mask] = r
        if r:
            count = mask.bit_count()
            if count > best_count:
                best_mask, best_count = mask, count

    mask = best_mask
    v = (reach[mask] & -reach[mask]).bit_length() - 1
    path = [v]
    while mask & (mask - 1):
        prev = mask ^ (1 << v)
        candidates = reach[prev] & rows[v]
        v = (candidates & -candidates).bit_length() - 1
        path.append(v)
        mask = prev
    return tuple(reversed(path))


def longest_cycle_dp(graph: UndirectedGraph, limits: OracleLimits = DEFAULT_LIMITS) -> Optional[Tuple[int, ...]]:
    """
    精确最长圈（子集DP）

    按圈上最小顶点 s 分组：只在编号大于 s 的顶点上做路径DP，总状态数 2ⁿ。
    无圈时返回 None。
    """
    n = graph.n
    if n > limits.ham_max_n:
        raise OracleLimitError("longest_cycle_dp", n, limits.ham_max_n)
    rows = graph.bit_rows()
    best: Optional[Tuple[int, int, int, List[int]]] = None
    best_len = 2
    for s in range(n):
        k = n - 1 - s
        if k + 1 <= best_len:
            break
        shift = s + 1
        sub_rows = [rows[shift + i] >> shift for i in range(k)]
        s_nbrs = rows[s] >> shift
        reach = [0] * (1 << k)
        for mask in range(1, 1 << k):
            r = 0
            for v in _iter_bits(mask):
                low = 1 << v
                if mask == low:
                    if s_nbrs & low:
                        r |= low
                elif reach[mask ^ low] & sub_rows[v]:
                    r |= low
            reach[mask] = r
            count = mask.bit_count()
            if count >= 2 and count + 1 > best_len and r & s_nbrs:
                best_len = count + 1
                best = (s, mask, (r & s_nbrs & -(r & s_nbrs)).bit_length() - 1, reach)
    if best is None:
        return None

    s, mask, v, reach = best
    shift = s + 1
    sub_rows = [rows[shift + i] >> shift for i in range(n - 1 - s)]
    tail = [v]
    while mask & (mask - 1):
        prev = mask ^ (1 << v)
        candidates = reach[prev] & sub_rows[v]
        v = (candidates & -candidates).bit_length() - 1
        tail.append(v)
        mask = prev
    return (s,) + tuple(shift + u for u in reversed(tail))


def longest_cycle_bnb(graph: UndirectedGraph, limits: OracleLimits = DEFAULT_LIMITS) -> Optional[Tuple[int, ...]]:
    """
    精确最长圈（分支定界）

    圈的最小顶点为 s，从 s 出发深搜只经过编号更大的顶点；上界为当前长度加上
    从路径末端可达的剩余顶点数。搜索结点超过 bnb_node_limit 时拒绝。
    """
    n = graph.n
    if n > limits.cycle_bnb_max_n:
        raise OracleLimitError("longest_cycle_bnb", n, limits.cycle_bnb_max_n)
    rows = graph.bit_rows()
    best: List[int] = []
    nodes = 0

    def reachable(v: int, allowed: int) -> int:
        seen = 1 << v
        frontier = seen
        while frontier:
            nxt = 0
            for u in _iter_bits(frontier):
                nxt |= rows[u]
            nxt &= allowed & ~seen
            seen |= nxt
            frontier = nxt
        return (seen & allowed).bit_count()

    for s in range(n):
        if n - s <= len(best):
            break
        higher = ((1 << n) - 1) & ~((1 << (s + 1)) - 1)
        path = [s]

        def dfs(v: int, free: int) -> bool:
            nonlocal nodes, best
            nodes += 1
            if nodes > limits.bnb_node_limit:
                raise OracleLimitError("longest_cycle_bnb 搜索结点", nodes, limits.bnb_node_limit)
            if len(path) >= 3 and rows[v] >> s & 1 and len(path) > len(best):
                best = list(path)
                if len(best) == n - s:
                    return True
            if len(path) + reachable(v, free) <= len(best):
                return False
            cands = list(_iter_bits(rows[v] & free))
            cands.sort(key=lambda u: ((rows[u] & free).bit_count(), u))
            for u in cands:
                path.append(u)
                if dfs(u, free & ~(1 << u)):
                    return True
                path.pop()
            return False

        if dfs(s, higher):
            break
    logger.debug(f"分支定界最长圈: n={n}, 结点数 {nodes}, 长度 {len(best)}")
    return tuple(best) if best else None


def clique_cover_bound(graph: UndirectedGraph, candidates: Optional[int] = None) -> int:
    """贪心团覆盖的团数，是独立数的上界"""
    rows = graph.bit_rows()
    if candidates is None:
        candidates = (1 << graph.n) - 1
    cliques: List[int] = []
    for v in _iter_bits(candidates):
        for i, clique in enumerate(cliques):
            if clique & ~rows[v] == 0:
                cliques[i] = clique | (1 << v)
                break
        else:
            cliques.append(1 << v)
    return len(cliques)


def exact_independence(graph: UndirectedGraph, limits: OracleLimits = DEFAULT_LIMITS) -> int:
    """
    精确独立数

    在候选集中取度最小的顶点 v，对 N[v] 中每个顶点分支（最大独立集必含其中之一）；
    上界取候选集的贪心团覆盖数。
    """
    n = graph.n
    if n > limits.alpha_max_n:
        raise OracleLimitError("exact_independence", n, limits.alpha_max_n)
    rows = graph.bit_rows()
    best = 0

    def search(cands: int, size: int) -> None:
        nonlocal best
        if cands == 0:
            best = max(best, size)
            return
        if size + cands.bit_count() <= best:
            return
        if size + clique_cover_bound(graph, cands) <= best:
            return
        v = min(_iter_bits(cands), key=lambda u: ((rows[u] & cands).bit_count(), u))
        closed = (rows[v] & cands) | (1 << v)
        for u in _iter_bits(closed):
            search(cands & ~rows[u] & ~(1 << u), size + 1)

    search((1 << n) - 1, 0)
    return best


def exhaustive_matching(bipartite, limits: OracleLimits = DEFAULT_LIMITS) -> int:
    """
    穷举二部图最大匹配的大小

    Args:
        bipartite: BipartiteDouble，左侧顶点 x 的邻居为 bipartite.adj[x]（右侧编号 0..n-1）
    """
    n = bipartite.n
    if n > limits.matching_exhaustive_max_n:
        raise OracleLimitError("exhaustive_matching", n, limits.matching_exhaustive_max_n)
    adj: Sequence[Sequence[int]] = bipartite.adj

    def search(x: int, used: int) -> int:
        if x == n:
            return 0
        best = search(x + 1, used)
        for y in adj[x]:
            if not used >> y & 1:
                best = max(best, 1 + search(x + 1, used | (1 << y)))
        return best

    return search(0, 0)
