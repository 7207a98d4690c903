"""
hamboost核心模块

图结构、随机边采样、三条构造流水线、实例生成器、精确预言机与实验运行器。
"""

from .exceptions import (
    CertificateError,
    ConfigError,
    ConstantsError,
    GraphFormatError,
    GraphValidationError,
    HamboostError,
    MatchingError,
    OracleLimitError,
    RotationError,
    SamplingError,
    SurgeryError,
)
from .graph import Digraph, UndirectedGraph, read_edge_list, verify_hamilton_cycle, write_edge_list
from .options import EngineOptions
from .sampling import Bernoulli, EdgeStream, ExactM, Replacement, derive_seed

__all__ = [
    "CertificateError",
    "ConfigError",
    "ConstantsError",
    "GraphFormatError",
    "GraphValidationError",
    "HamboostError",
    "MatchingError",
    "OracleLimitError",
    "RotationError",
    "SamplingError",
    "SurgeryError",
    "Digraph",
    "UndirectedGraph",
    "read_edge_list",
    "write_edge_list",
    "verify_hamilton_cycle",
    "EngineOptions",
    "Bernoulli",
    "EdgeStream",
    "ExactM",
    "Replacement",
    "derive_seed",
]
