"""
hamboost命令行接口模块

提供基于typer的命令行接口。
"""

from .main import app

__all__ = ["app"]
