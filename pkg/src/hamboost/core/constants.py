"""
阈值常数

θ = ln d⁻¹ 以及上界与下界实验中使用的边数常数。所有边数常数都按"每个顶点"给出，
乘以 n 即为边数；threshold_constants(d, n) 可以直接给出乘好的值。
"""

import math
from dataclasses import dataclass
from typing import Optional

from .exceptions import ConstantsError

LOWER_BOUND_MAX_D = 0.1


@dataclass(frozen=True)
class DensityParams:
    """密度参数 d ∈ (0, 1/2] 与顶点数 n"""
    d: float
    n: int

    def __post_init__(self):
        if not 0.0 < self.d <= 0.5:
            raise ConstantsError("0 < d <= 1/2", self.d)
        if self.n < 1:
            raise ConstantsError("n >= 1", float(self.n))

    @property
    def theta(self) -> float:
        return -math.log(self.d)

    @property
    def min_degree_target(self) -> int:
        """⌈dn⌉"""
        return math.ceil(self.d * self.n - 1e-9)

    def remark_degree_ok(self, delta: int) -> bool:
        """δ(H) ≥ n^{3/4}：在此范围内上界的计算仍然成立（仅供参考）"""
        return delta >= self.n ** 0.75


@dataclass(frozen=True)
class ThresholdConstants:
    d: float
    n: int
    theta: float
    m_upper_1a: float
    m_lower_1b: float
    c_star: float
    rho1: float
    rho2: float

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "theta": self.theta,
            "m_upper_1a": self.m_upper_1a,
            "m_lower_1b": self.m_lower_1b,
            "c_star": self.c_star,
            "rho1": self.rho1,
            "rho2": self.rho2,
        }


def threshold_constants(d: float, n: int = 1, lower_bound: bool = False) -> ThresholdConstants:
    """
    计算各实验流程使用的常数

    Args:
        d: 密度，0 < d <= 1/2
        n: 顶点数；默认1，即返回每个顶点的系数
        lower_bound: 下界构造（lowerbound1b / lowerbound3b）额外要求 d <= 1/10

    Returns:
        theta = ln d⁻¹，m_upper_1a = (30θ+13)n，m_lower_1b = θn/3，
        c_star = (d²+(1-d)²)·ln(d⁻¹-1)/(2(1-d))，rho1 = d⁻¹(15+6θ)，rho2 = 5d⁻²
    """
    if not 0.0 < d <= 0.5:
        raise ConstantsError("0 < d <= 1/2", d)
    if lower_bound and d > LOWER_BOUND_MAX_D:
        raise ConstantsError("d <= 1/10 (下界构造)", d)
    theta = -math.log(d)
    c_star = (d * d + (1 - d) ** 2) * math.log(1.0 / d - 1.0) / (2 * (1 - d))
    return ThresholdConstants(
        d=d,
        n=n,
        theta=theta,
        m_upper_1a=(30 * theta + 13) * n,
        m_lower_1b=theta * n / 3,
        c_star=c_star,
        rho1=(15 + 6 * theta) / d,
        rho2=5 / (d * d),
    )


def r1_size(d: float, n: int) -> int:
    """thm1a 流程第一阶段的随机边数 ⌈30θn⌉"""
    return math.ceil(30 * -math.log(d) * n)


def round_probability(m: float, ground: int, rounds: int) -> float:
    """
    解 1-(1-p)^r = m/|Ē| 得到每轮的包含概率 p

    使用 log1p/expm1，避免 p 很小时的相消误差。
    """
    if ground <= 0 or rounds <= 0:
        return 0.0
    q = m / ground
    if q >= 1.0:
        return 1.0
    if q <= 0.0:
        return 0.0
    return -math.expm1(math.log1p(-q) / rounds)


def isolated_set_probability(n: int, d: float, m: float, directed: bool = False) -> float:
    """下界实验的包含概率：无向 2m/((d²+(1-d)²)n²)，有向 m/((d²+(1-d)²)n²)"""
    scale = (d * d + (1 - d) ** 2) * n * n
    p = (m if directed else 2 * m) / scale
    return min(1.0, max(0.0, p))


def expected_isolated(n: int, d: float, p: float, directed: bool = False, a: Optional[int] = None) -> float:
    """E|I| = |B|(1-p)^{|B|-1}；有向时指数为 2(|B|-1)"""
    if a is None:
        a = math.floor(d * n + 1e-9)
    b = n - a
    exponent = 2 * (b - 1) if directed else b - 1
    return b * (1 - p) ** exponent
