"""
配置加载器模块
"""
import copy
import json
import os

from loguru import logger

from ..core.exceptions import ConfigError

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), 'config.json')


def _deep_merge(base, override):
    """把 override 逐节合并到 base 的副本上"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path=None, strict=False):
    """
    加载配置文件

    参数:
    config_path -- 配置文件路径，如不指定则使用默认路径
    strict -- 为True时读取或解析失败抛出 ConfigError，而不是回退到默认配置

    返回:
    与默认配置深度合并后的配置字典
    """
    if config_path is None:
        config_path = DEFAULT_CONFIG_PATH

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config = json.load(f)
        if not isinstance(config, dict):
            raise ValueError("顶层必须是 JSON 对象")
        logger.debug(f"配置文件加载成功: {config_path}")
        return _deep_merge(get_default_config(), config)
    except (OSError, ValueError) as e:
        if strict:
            raise ConfigError("config", f"{config_path}: {e}")
        logger.error(f"加载配置文件出错: {e}")
        logger.info("使用默认配置")
        return get_default_config()


def get_default_config():
    """
    获取默认配置

    返回:
    默认配置字典
    """
    return {
        "engine": {
            "dense_limit": 4096,
            "free_closure_probes": 8,
            "exhaustive_max_n": 12
        },
        "sampling": {
            "materialize_limit": 200000,
            "batch_size": 4096,
            "prng": "pcg64"
        },
        "oracles": {
            "ham_max_n": 18,
            "alpha_max_n": 40,
            "matching_exhaustive_max_n": 6,
            "permutation_max_n": 10,
            "cycle_bnb_max_n": 40,
            "bnb_node_limit": 2000000
        },
        "harness": {
            "budget_factor": 13,
            "significant_digits": 6,
            "format": "csv",
            "include_timing": False
        },
        "multiprocessing": {
            "enabled": True,
            "auto_adjust": True,
            "max_processes": {
                "trial": 4,
                "sweep": 4,
                "generic": 4
            }
        },
        "logging": {
            "level": "INFO",
            "file": None
        }
    }
