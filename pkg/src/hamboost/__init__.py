"""
hamboost - 稠密图加随机边的哈密顿圈

最小度为 dn 的图（或有向图）加上少量均匀随机边后的哈密顿圈构造：
Pósa 旋转撒边、圈划分合并、有向圈覆盖手术，以及下界构造、小规模精确预言机
和蒙特卡洛实验工具。
"""

__version__ = "0.1.0"
__author__ = "hamboost Team"
__description__ = "Hamilton cycles in dense graphs plus random edges"

try:
    from .core.exceptions import HamboostError
    from .core.graph import Digraph, UndirectedGraph, verify_hamilton_cycle
    from .core.harness import TrialConfig, run_trials
except ImportError:
    # 如果导入失败，至少保证版本信息可用
    HamboostError = None
    Digraph = None
    UndirectedGraph = None
    verify_hamilton_cycle = None
    TrialConfig = None
    run_trials = None

__all__ = [
    "HamboostError",
    "Digraph",
    "UndirectedGraph",
    "verify_hamilton_cycle",
    "TrialConfig",
    "run_trials",
    "__version__",
]
