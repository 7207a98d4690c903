"""
随机边采样模块

从补集 Ē = [n]⁽²⁾∖E(H)（有向图为 Ā = [n]²∖A(H)）中抽取随机边/弧，支持三种模型：

* ExactM(m)：均匀的 m 元子集
* Bernoulli(p)：每个补集元素独立以概率 p 入选
* Replacement：有放回的独立均匀抽样序列 e₁, e₂, …

伪随机数生成器固定为 numpy 的 PCG64，种子通过 SeedSequence 派生，
同一 (图, 模式, 种子) 在任何平台上都逐位复现同一序列。
补集不显式展开：按邻接矩阵做拒绝采样；补集很小时才枚举。
"""

import zlib
from dataclasses import dataclass
from typing import Iterator, List, Optional, Union

import numpy as np
from loguru import logger

from .exceptions import SamplingError
from .graph import AnyGraph, Digraph, Edge

PRNG_NAME = "pcg64"

DEFAULT_BATCH_SIZE = 4096
DEFAULT_MATERIALIZE_LIMIT = 200_000
DEFAULT_DENSE_LIMIT = 4096


@dataclass(frozen=True)
class ExactM:
    """恰好 m 条边，在所有 m 元子集上均匀"""
    m: int


@dataclass(frozen=True)
class Bernoulli:
    """每个补集元素独立以概率 p 入选"""
    p: float


@dataclass(frozen=True)
class Replacement:
    """有放回的均匀抽样流"""
    pass


SamplingMode = Union[ExactM, Bernoulli, Replacement]


def make_rng(seed: int) -> np.random.Generator:
    """由64位种子构造 PCG64 生成器"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def derive_seed(master_seed: int, index: int = 0, tag: str = "") -> int:
    """
    由 (master_seed, index, tag) 派生64位种子

    tag 经 CRC32 转为整数后与前两项一起作为 SeedSequence 的熵。
    """
    entropy = [int(master_seed), int(index), zlib.crc32(tag.encode("utf-8"))]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


class EdgeStream:
    """补集上的可复现随机边源"""

    def __init__(
        self,
        host: AnyGraph,
        mode: SamplingMode,
        seed: int,
        *,
        batch_size: int = DEFAULT_BATCH_SIZE,
        materialize_limit: int = DEFAULT_MATERIALIZE_LIMIT,
        dense_limit: int = DEFAULT_DENSE_LIMIT,
    ):
        """
        Args:
            host: 基图 H，抽样范围是其补集
            mode: ExactM / Bernoulli / Replacement
            seed: 64位种子
        """
        if isinstance(mode, ExactM):
            if mode.m < 0:
                raise SamplingError(f"m 不能为负: {mode.m}")
            if mode.m > host.complement_size():
                raise SamplingError(f"m={mode.m} 超过补集大小 {host.complement_size()}")
        elif isinstance(mode, Bernoulli):
            if not 0.0 <= mode.p <= 1.0:
                raise SamplingError(f"概率 p={mode.p} 不在 [0, 1] 内")
        elif not isinstance(mode, Replacement):
            raise SamplingError(f"未知的采样模式: {mode!r}")

        self.host = host
        self.mode = mode
        self.seed = int(seed)
        self.directed = isinstance(host, Digraph)
        self.cursor = 0
        self.ground_size = host.complement_size()

        self._n = host.n
        self._rng = make_rng(self.seed)
        self._batch_size = max(16, int(batch_size))
        self._dense = host.n <= dense_limit
        pairs_total = self._n * (self._n - 1) // (1 if self.directed else 2)
        self._materialized = self.ground_size <= materialize_limit or self.ground_size * 8 < pairs_total
        self._complement: Optional[np.ndarray] = None
        self._buffer = np.empty(0, dtype=np.int64)
        self._pos = 0

    def __repr__(self) -> str:
        return f"EdgeStream(mode={self.mode!r}, seed={self.seed}, cursor={self.cursor})"

    # ------------------------------------------------------------------ 编码

    def _decode(self, code: int) -> Edge:
        return (code // self._n, code % self._n)

    def _complement_codes(self) -> np.ndarray:
        """按编码升序枚举补集（缓存）"""
        if self._complement is None:
            n = self._n
            if self._dense:
                missing = ~self.host.dense_matrix()
                np.fill_diagonal(missing, False)
                if not self.directed:
                    missing = np.triu(missing, k=1)
                rows, cols = np.nonzero(missing)
                codes = rows.astype(np.int64) * n + cols
            else:
                out = []
                for u in range(n):
                    start = 0 if self.directed else u + 1
                    for v in range(start, n):
                        if v != u and not self._host_has(u, v):
                            out.append(u * n + v)
                codes = np.array(out, dtype=np.int64)
            self._complement = codes
            logger.debug(f"补集已枚举: {len(codes)} 个元素")
        return self._complement

    def _host_has(self, u: int, v: int) -> bool:
        if self.directed:
            return self.host.has_arc(u, v)
        return self.host.has_edge(u, v)

    # ------------------------------------------------------------------ 有放回抽样

    def _fill(self) -> None:
        if self.ground_size == 0:
            raise SamplingError("补集为空，无法抽样")
        rng = self._rng
        size = self._batch_size
        if self._materialized:
            comp = self._complement_codes()
            self._buffer = comp[rng.integers(0, len(comp), size=size)]
            self._pos = 0
            return
        n = self._n
        chunks = []
        collected = 0
        while collected < size:
            u = rng.integers(0, n, size=size)
            v = rng.integers(0, n - 1, size=size)
            v = v + (v >= u)
            if not self.directed:
                u, v = np.minimum(u, v), np.maximum(u, v)
            if self._dense:
                keep = ~self.host.dense_matrix()[u, v]
            else:
                keep = np.fromiter(
                    (not self._host_has(a, b) for a, b in zip(u.tolist(), v.tolist())),
                    dtype=bool,
                    count=size,
                )
            codes = u[keep] * n + v[keep]
            chunks.append(codes)
            collected += len(codes)
        self._buffer = np.concatenate(chunks)
        self._pos = 0

    def take_codes(self, k: int) -> np.ndarray:
        """有放回地再抽 k 个元素，返回编码数组 u*n+v"""
        out = []
        need = int(k)
        while need > 0:
            if self._pos >= len(self._buffer):
                self._fill()
            chunk = self._buffer[self._pos:self._pos + need]
            self._pos += len(chunk)
            need -= len(chunk)
            out.append(chunk)
        self.cursor += int(k)
        if not out:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(out)

    def draw(self) -> Edge:
        """有放回地抽取下一条边"""
        if self._pos >= len(self._buffer):
            self._fill()
        code = int(self._buffer[self._pos])
        self._pos += 1
        self.cursor += 1
        return self._decode(code)

    def take(self, k: int) -> List[Edge]:
        return [self._decode(int(c)) for c in self.take_codes(k)]

    def __iter__(self) -> Iterator[Edge]:
        while True:
            yield self.draw()

    # ------------------------------------------------------------------ 无放回子集

    def _distinct(self, k: int) -> List[Edge]:
        """均匀的 k 元子集，按抽中顺序返回"""
        if k == 0:
            return []
        if self._materialized or 2 * k > self.ground_size:
            comp = self._complement_codes()
            picked = self._rng.choice(len(comp), size=k, replace=False)
            self.cursor += k
            return [self._decode(int(c)) for c in comp[picked]]
        seen = set()
        order: List[int] = []
        while len(order) < k:
            if self._pos >= len(self._buffer):
                self._fill()
            code = int(self._buffer[self._pos])
            self._pos += 1
            if code not in seen:
                seen.add(code)
                order.append(code)
        self.cursor += k
        return [self._decode(c) for c in order]

    def sample(self) -> List[Edge]:
        """
        按 ExactM / Bernoulli 模式抽出整个边集

        Bernoulli 模式先抽取二项分布的边数，再均匀抽取该大小的子集，
        与逐元素独立入选同分布。
        """
        if isinstance(self.mode, ExactM):
            return self._distinct(self.mode.m)
        if isinstance(self.mode, Bernoulli):
            k = int(self._rng.binomial(self.ground_size, self.mode.p)) if self.ground_size else 0
            return self._distinct(k)
        raise SamplingError("Replacement 模式没有固定大小的样本，请使用 draw()/take()")


def sample_complement(graph: AnyGraph, mode: SamplingMode, seed: int, **options) -> Union[List[Edge], EdgeStream]:
    """
    从补集中采样

    ExactM / Bernoulli 返回边列表（与 E(graph) 不相交）；Replacement 返回 EdgeStream 句柄。
    """
    stream = EdgeStream(graph, mode, seed, **options)
    if isinstance(mode, Replacement):
        return stream
    return stream.sample()
