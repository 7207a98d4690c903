"""
实例生成器测试
"""

import pytest

from hamboost.core.exceptions import ConfigError, ConstantsError
from hamboost.core.generators import (
    InstanceFamily,
    InstanceSpec,
    bidirected_complete_bipartite,
    build_instance,
    complete_bipartite,
    dense_small_alpha,
    gnp,
    random_min_degree_digraph,
    random_min_degree_graph,
    side_sizes,
)
from hamboost.core.graph import Digraph, UndirectedGraph, min_degree
from hamboost.core.oracles import brute_hamiltonian


class TestCompleteBipartite:
    """下界构造 K_{A,B}"""

    def test_k37(self, k37):
        """n=10, d=0.3 给出 K_{3,7}"""
        assert k37.edge_count == 21
        assert min_degree(k37) == 3
        assert not brute_hamiltonian(k37)

    def test_balanced_is_hamiltonian(self):
        """K_{5,5} 是哈密顿的"""
        assert brute_hamiltonian(complete_bipartite(10, 0.5))

    def test_side_sizes(self):
        """n=2000, d=0.1 时 |A| = 200"""
        assert side_sizes(2000, 0.1) == (200, 1800)
        assert complete_bipartite(2000, 0.1).edge_count == 200 * 1800

    def test_empty_side(self):
        """⌊dn⌋ = 0"""
        with pytest.raises(ConstantsError):
            complete_bipartite(10, 0.01)

    def test_bidirected(self):
        """双向版本的弧数与最小度"""
        graph = bidirected_complete_bipartite(10, 0.3)
        assert graph.arc_count == 42
        assert min_degree(graph) == 3
        assert graph.has_arc(0, 5) and graph.has_arc(5, 0)
        assert not graph.has_arc(5, 6)


class TestRandomMinDegree:
    """随机最小度图"""

    def test_min_degree(self):
        """n=50, d=0.2 时 δ ≥ 10"""
        assert min_degree(random_min_degree_graph(50, 0.2, seed=1)) >= 10

    def test_nearly_complete(self):
        """d=0.98 时 δ ≥ 49，即完全图"""
        graph = random_min_degree_graph(50, 0.98, seed=1)
        assert min_degree(graph) >= 49
        assert graph.edge_count == 50 * 49 // 2

    def test_deterministic(self):
        """同一种子得到同一张图"""
        first = random_min_degree_graph(40, 0.3, seed=7)
        second = random_min_degree_graph(40, 0.3, seed=7)
        assert list(first.edges()) == list(second.edges())

    def test_digraph(self):
        """有向版本的出度与入度"""
        graph = random_min_degree_digraph(40, 0.25, seed=3)
        assert min_degree(graph) >= 10

    def test_degree_out_of_range(self):
        """d 不在 (0, 1) 内"""
        with pytest.raises(ConstantsError):
            random_min_degree_graph(10, 1.0, seed=0)


class TestDenseSmallAlpha:
    """小独立数的稠密图"""

    def test_complete(self):
        """q = 1 时 α = 1，满足 α < d²n/2"""
        instance = dense_small_alpha(10, 1.0, seed=0)
        assert instance.alpha == 1
        assert instance.exact
        assert instance.d == pytest.approx(0.9)
        assert instance.hypothesis_ok

    def test_empty(self):
        """q = 0 时 α = n，被过滤"""
        instance = dense_small_alpha(10, 0.0, seed=0)
        assert instance.alpha == 10
        assert not instance.hypothesis_ok

    def test_large_uses_upper_bound(self):
        """超过 alpha_max_n 时给出团覆盖上界"""
        instance = dense_small_alpha(45, 1.0, seed=0)
        assert not instance.exact
        assert instance.alpha == 1

    def test_bad_q(self):
        """q 不在 [0, 1] 内"""
        with pytest.raises(ConstantsError):
            gnp(5, 1.5, seed=0)


class TestInstanceSpec:
    """实例描述"""

    def test_round_trip(self):
        """to_dict 后 from_dict 得到同一描述"""
        spec = InstanceSpec(InstanceFamily.RANDOM_MIN_DEGREE, 30, d=0.2, seed=4)
        assert InstanceSpec.from_dict(spec.to_dict()) == spec

    def test_unknown_family(self):
        """未知实例族"""
        with pytest.raises(ConfigError) as info:
            InstanceSpec.from_dict({"family": "petersen", "n": 10})
        assert info.value.field == "instance.family"

    @pytest.mark.parametrize(
        "family,kind",
        [
            (InstanceFamily.COMPLETE_BIPARTITE, UndirectedGraph),
            (InstanceFamily.BIDIRECTED_COMPLETE_BIPARTITE, Digraph),
            (InstanceFamily.RANDOM_MIN_DEGREE, UndirectedGraph),
            (InstanceFamily.RANDOM_MIN_DEGREE_DIGRAPH, Digraph),
            (InstanceFamily.DENSE_SMALL_ALPHA, UndirectedGraph),
        ],
    )
    def test_build(self, family, kind):
        """每个实例族都能构造，方向与 directed 一致"""
        graph = build_instance(InstanceSpec(family, 20, d=0.3))
        assert isinstance(graph, kind)
        assert graph.n == 20
        assert family.directed == (kind is Digraph)

    def test_missing_density(self):
        """没有 d 也没有 q"""
        with pytest.raises(ConfigError):
            build_instance(InstanceSpec(InstanceFamily.COMPLETE_BIPARTITE, 20))
