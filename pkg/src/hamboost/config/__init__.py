"""
配置模块，用于处理应用程序配置
"""
from .config_loader import get_default_config, load_config

__all__ = ['load_config', 'get_default_config']
