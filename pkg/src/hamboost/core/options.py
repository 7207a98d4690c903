"""
引擎参数

由配置字典 engine / sampling / oracles 三节构造，传入各引擎。
"""

from dataclasses import dataclass, fields
from typing import Any, Dict, Optional


@dataclass(frozen=True)
class EngineOptions:
    dense_limit: int = 4096
    free_closure_probes: int = 8
    exhaustive_max_n: int = 12
    batch_size: int = 4096
    materialize_limit: int = 200_000
    cycle_bnb_max_n: int = 40
    bnb_node_limit: int = 2_000_000

    @classmethod
    def from_config(cls, config: Optional[Dict[str, Any]]) -> "EngineOptions":
        """从配置字典中挑出认识的键，其余忽略"""
        if not config:
            return cls()
        merged: Dict[str, Any] = {}
        for section in ("engine", "sampling", "oracles"):
            merged.update(config.get(section, {}))
        known = {f.name for f in fields(cls)}
        return cls(**{k: int(v) for k, v in merged.items() if k in known})

    def stream_options(self) -> Dict[str, int]:
        """传给 EdgeStream 的关键字参数"""
        return {
            "batch_size": self.batch_size,
            "materialize_limit": self.materialize_limit,
            "dense_limit": self.dense_limit,
        }


DEFAULT_OPTIONS = EngineOptions()
