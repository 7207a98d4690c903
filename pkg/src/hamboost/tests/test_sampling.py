"""
随机边采样测试
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamboost.core.exceptions import SamplingError
from hamboost.core.graph import from_arc_list, from_edge_list
from hamboost.core.sampling import (
    Bernoulli,
    EdgeStream,
    ExactM,
    Replacement,
    derive_seed,
    make_rng,
    sample_complement,
)
from hamboost.tests.conftest import complete_graph, cycle_graph


class TestDeriveSeed:
    """种子派生"""

    def test_deterministic(self):
        """同样的输入得到同样的种子"""
        assert derive_seed(7, 3, "r1") == derive_seed(7, 3, "r1")

    def test_tag_and_index_matter(self):
        """标签或编号不同则种子不同"""
        seeds = {derive_seed(7, 3, "r1"), derive_seed(7, 3, "r2"), derive_seed(7, 4, "r1"), derive_seed(8, 3, "r1")}
        assert len(seeds) == 4

    @given(st.integers(min_value=0, max_value=2**63 - 1), st.integers(min_value=0, max_value=10**6))
    def test_fits_in_64_bits(self, master, index):
        """派生种子是非负64位整数"""
        seed = derive_seed(master, index, "stream")
        assert 0 <= seed < 2**64


class TestExactM:
    """无放回的固定大小样本"""

    def test_zero_from_complete(self):
        """K₅ 上 ExactM(0) 为空"""
        assert sample_complement(complete_graph(5), ExactM(0), seed=1) == []

    def test_whole_complement_of_c4(self):
        """C₄ 的补集只有两条对角线"""
        edges = sample_complement(cycle_graph(4), ExactM(2), seed=1)
        assert sorted(edges) == [(0, 2), (1, 3)]

    def test_too_many(self):
        """m 超过补集大小"""
        with pytest.raises(SamplingError):
            EdgeStream(cycle_graph(4), ExactM(3), seed=1)

    def test_same_seed_same_sample(self):
        """同一种子得到同一样本"""
        host = cycle_graph(30)
        first = sample_complement(host, ExactM(40), seed=11)
        second = sample_complement(host, ExactM(40), seed=11)
        assert first == second

    @settings(max_examples=30, deadline=None)
    @given(
        st.integers(min_value=4, max_value=12),
        st.floats(min_value=0.0, max_value=1.0),
        st.integers(min_value=0, max_value=2**32),
        st.booleans(),
    )
    def test_distinct_and_outside_host(self, n, fraction, seed, directed):
        """样本互不相同且都不在基图中"""
        pairs = [(u, (u + 1) % n) for u in range(n)]
        host = from_arc_list(n, pairs) if directed else from_edge_list(n, pairs)
        m = int(fraction * host.complement_size())
        edges = EdgeStream(host, ExactM(m), seed).sample()
        assert len(edges) == m
        assert len(set(edges)) == m
        for u, v in edges:
            assert u != v
            if directed:
                assert not host.has_arc(u, v)
            else:
                assert u < v and not host.has_edge(u, v)


class TestBernoulli:
    """逐元素独立包含"""

    def test_probability_zero(self):
        """p = 0 时样本为空"""
        assert sample_complement(cycle_graph(10), Bernoulli(0.0), seed=3) == []

    def test_probability_one(self):
        """p = 1 时样本为整个补集"""
        host = cycle_graph(7)
        edges = sample_complement(host, Bernoulli(1.0), seed=3)
        assert len(edges) == host.complement_size()

    def test_bad_probability(self):
        """p 不在 [0, 1] 内"""
        with pytest.raises(SamplingError):
            EdgeStream(cycle_graph(5), Bernoulli(1.5), seed=0)


class TestReplacement:
    """有放回的随机边流"""

    def test_returns_stream(self):
        """Replacement 返回流句柄"""
        stream = sample_complement(cycle_graph(6), Replacement(), seed=5)
        assert isinstance(stream, EdgeStream)
        assert stream.cursor == 0
        stream.take(4)
        assert stream.cursor == 4

    def test_prefix_stable(self):
        """同一种子的两条流逐条相同"""
        host = cycle_graph(40)
        a = EdgeStream(host, Replacement(), seed=9)
        b = EdgeStream(host, Replacement(), seed=9)
        assert a.take(100) == [b.draw() for _ in range(100)]

    def test_draws_avoid_host(self):
        """抽到的边都在补集中（拒绝采样路径）"""
        host = cycle_graph(50)
        stream = EdgeStream(host, Replacement(), seed=2, materialize_limit=0)
        for u, v in stream.take(500):
            assert u < v and not host.has_edge(u, v)

    def test_directed_draws(self):
        """有向补集中的弧"""
        host = from_arc_list(5, [(0, 1), (1, 2)])
        stream = EdgeStream(host, Replacement(), seed=4)
        for u, v in stream.take(200):
            assert u != v and not host.has_arc(u, v)

    def test_empty_ground_set(self):
        """补集为空时抽样报错"""
        stream = EdgeStream(complete_graph(4), Replacement(), seed=0)
        with pytest.raises(SamplingError):
            stream.draw()

    def test_no_fixed_size_sample(self):
        """Replacement 模式没有固定大小的样本"""
        with pytest.raises(SamplingError):
            EdgeStream(cycle_graph(5), Replacement(), seed=0).sample()

    def test_uniform_frequencies(self):
        """约 10⁴ 个元素、10⁶ 次抽取的频数与均匀分布一致（卡方）"""
        host = from_edge_list(142, [])
        ground = host.complement_size()
        stream = EdgeStream(host, Replacement(), seed=2024)
        codes = stream.take_codes(1_000_000)
        counts = np.bincount(codes, minlength=142 * 142)
        counts = counts[counts > 0]
        assert len(counts) == ground
        expected = 1_000_000 / ground
        chi2 = float(((counts - expected) ** 2 / expected).sum())
        dof = ground - 1
        assert abs(chi2 - dof) < 5 * np.sqrt(2 * dof)


class TestUniformSubsets:
    """ExactM 在所有 m 元子集上均匀"""

    @pytest.mark.slow
    def test_two_of_four(self):
        """补集大小4、m=2，10⁵ 个种子下6个子集各占约 1/6"""
        host = from_edge_list(4, [(0, 1), (2, 3)])
        assert host.complement_size() == 4
        trials = 100_000
        counts = {}
        for seed in range(trials):
            key = frozenset(sample_complement(host, ExactM(2), seed=seed))
            counts[key] = counts.get(key, 0) + 1
        assert len(counts) == 6
        sigma = np.sqrt((1 / 6) * (5 / 6) / trials)
        for count in counts.values():
            assert abs(count / trials - 1 / 6) < 5 * sigma


class TestFrozenStreams:
    """PRNG 输出冻结，numpy 或种子派生的改动会破坏重放"""

    def test_derive_seed_values(self):
        """派生种子的固定值"""
        assert derive_seed(7, 3, "r1") == 290293619370104260
        assert derive_seed(0, 0, "stream") == 5275804765953738909

    def test_make_rng_values(self):
        """PCG64 + SeedSequence 的前几个输出"""
        assert make_rng(0).random() == 0.6369616873214543
        assert make_rng(42).integers(0, 10, size=5).tolist() == [0, 7, 6, 4, 4]

    def test_first_draws(self):
        """10个顶点的空图、种子2024时前8条边"""
        stream = EdgeStream(from_edge_list(10, []), Replacement(), seed=2024)
        assert stream.take(8) == [(1, 3), (4, 5), (0, 5), (1, 2), (1, 7), (1, 6), (6, 8), (5, 6)]
        assert stream.cursor == 8
