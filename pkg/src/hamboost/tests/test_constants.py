"""
阈值常数测试
"""

import math

import pytest

from hamboost.core.constants import (
    DensityParams,
    expected_isolated,
    isolated_set_probability,
    r1_size,
    round_probability,
    threshold_constants,
)
from hamboost.core.exceptions import ConstantsError


class TestThresholdConstants:
    """各流程使用的常数"""

    def test_theta_at_half(self):
        """d = 1/2 时 θ = ln 2"""
        assert threshold_constants(0.5).theta == pytest.approx(0.693147, abs=1e-6)

    def test_values_at_one_tenth(self):
        """d = 0.1 时的上下界系数"""
        consts = threshold_constants(0.1)
        assert consts.theta == pytest.approx(2.302585, abs=1e-6)
        assert consts.m_upper_1a == pytest.approx(82.0776, abs=1e-4)
        assert consts.m_lower_1b == pytest.approx(0.767528, abs=1e-6)

    def test_c_star_at_one_tenth(self):
        """c* = (0.82/1.8)·ln 9"""
        consts = threshold_constants(0.1)
        assert consts.c_star == pytest.approx(0.82 / 1.8 * math.log(9), rel=1e-12)
        assert consts.c_star == pytest.approx(1.00096, abs=1e-5)

    def test_scaled_by_n(self):
        """给出 n 时边数常数乘以 n"""
        per_vertex = threshold_constants(0.2)
        scaled = threshold_constants(0.2, n=100)
        assert scaled.m_upper_1a == pytest.approx(100 * per_vertex.m_upper_1a)
        assert scaled.rho1 == per_vertex.rho1

    def test_digraph_rates(self):
        """ρ₁ = d⁻¹(15+6θ)，ρ₂ = 5d⁻²"""
        consts = threshold_constants(0.3)
        theta = math.log(1 / 0.3)
        assert consts.rho1 == pytest.approx((15 + 6 * theta) / 0.3)
        assert consts.rho2 == pytest.approx(5 / 0.09)

    @pytest.mark.parametrize("d", [0.0, -0.1, 0.6, 1.0])
    def test_domain(self, d):
        """d 超出 (0, 1/2]"""
        with pytest.raises(ConstantsError) as info:
            threshold_constants(d)
        assert "1/2" in info.value.constraint

    def test_lower_bound_cap(self):
        """下界构造要求 d ≤ 1/10"""
        threshold_constants(0.2)
        with pytest.raises(ConstantsError):
            threshold_constants(0.2, lower_bound=True)


class TestDerivedQuantities:
    """概率与期望"""

    def test_r1_size(self):
        """⌈30θn⌉"""
        assert r1_size(0.5, 10) == math.ceil(30 * math.log(2) * 10)

    def test_round_probability_solves_schedule(self):
        """1-(1-p)^r = m/|Ē|"""
        p = round_probability(400, 2000, 5)
        assert 1 - (1 - p) ** 5 == pytest.approx(0.2)

    def test_round_probability_edges(self):
        """空补集或 m 超过补集"""
        assert round_probability(10, 0, 3) == 0.0
        assert round_probability(5000, 2000, 3) == 1.0
        assert round_probability(0, 2000, 3) == 0.0

    def test_isolated_probability(self):
        """n=100, d=0.2, m=50: p = 100/6800"""
        assert isolated_set_probability(100, 0.2, 50) == pytest.approx(100 / 6800)
        assert isolated_set_probability(100, 0.2, 50, directed=True) == pytest.approx(50 / 6800)

    def test_expected_isolated(self):
        """80·(1-p)^79 ≈ 24.8"""
        p = 100 / 6800
        assert expected_isolated(100, 0.2, p) == pytest.approx(80 * (1 - p) ** 79)
        assert expected_isolated(100, 0.2, p) == pytest.approx(24.8, abs=0.05)
        assert expected_isolated(100, 0.2, 0.0) == 80
        assert expected_isolated(100, 0.2, p, directed=True) == pytest.approx(80 * (1 - p) ** 158)


class TestDensityParams:
    """密度参数"""

    def test_min_degree_target(self):
        """⌈dn⌉"""
        assert DensityParams(0.3, 10).min_degree_target == 3
        assert DensityParams(0.25, 10).min_degree_target == 3

    def test_remark_degree(self):
        """δ ≥ n^{3/4}"""
        params = DensityParams(0.1, 10_000)
        assert params.remark_degree_ok(1001)
        assert not params.remark_degree_ok(990)

    def test_invalid(self):
        """d 超出范围"""
        with pytest.raises(ConstantsError):
            DensityParams(0.7, 10)
