"""
多进程处理辅助模块，按试验编号顺序收集结果

每个试验的随机性只取决于 (主种子, 试验编号)，进程数只影响耗时，不影响结果。
"""
from multiprocessing import Pool, cpu_count
from typing import Any, Callable, Dict, List, Optional, Sequence

import psutil
from loguru import logger
from tqdm import tqdm

DEFAULT_MULTIPROCESSING = {
    "enabled": True,
    "auto_adjust": True,
    "max_processes": {
        "trial": 4,
        "sweep": 4,
        "generic": 4,
    },
}

# (内存占用%, CPU占用%, 进程数上限)，从紧到松
RESOURCE_TIERS = ((90, 95, 1), (80, 85, 2))


def resource_cap(configured: int) -> int:
    """根据当前内存与CPU占用给出进程数上限"""
    memory = psutil.virtual_memory().percent
    cpu = psutil.cpu_percent(interval=0.1)
    for memory_limit, cpu_limit, cap in RESOURCE_TIERS:
        if memory > memory_limit or cpu > cpu_limit:
            logger.warning(f"系统资源紧张 (内存: {memory}%, CPU: {cpu}%)，进程数降到 {cap}")
            return min(cap, configured)
    return max(1, min(configured, cpu_count() - 1))


class MultiprocessExecutor:
    """多进程执行器，进程数来自 --workers、配置或系统资源"""

    def __init__(self, process_type: str = "generic", config: Optional[Dict[str, Any]] = None,
                 workers: Optional[int] = None, progress: bool = True):
        """
        参数:
        process_type -- "trial"、"sweep" 或 "generic"，对应 max_processes 中的键
        config -- 完整配置字典，只读取其中的 multiprocessing 一节
        workers -- 显式指定的进程数，优先于配置
        progress -- 是否显示进度条
        """
        self.process_type = process_type
        self.workers = workers
        self.progress = progress
        self.settings = (config or {}).get("multiprocessing", DEFAULT_MULTIPROCESSING)

    def process_count(self, item_count: int) -> int:
        """本次运行实际使用的进程数，不超过项目数"""
        if self.workers is not None:
            wanted = max(1, int(self.workers))
        elif not self.settings.get("enabled", True):
            logger.info("多进程处理已被禁用，使用单进程模式")
            wanted = 1
        else:
            limits = self.settings.get("max_processes", {})
            configured = limits.get(self.process_type, limits.get("generic", 4))
            if self.settings.get("auto_adjust", True):
                wanted = resource_cap(configured)
            else:
                wanted = max(1, min(configured, cpu_count()))
        return max(1, min(wanted, item_count))

    def execute(self, process_func: Callable[[Any], Any], items: Sequence[Any], desc: str = "试验") -> List[Any]:
        """
        对每个项目调用 process_func

        process_func 必须是模块级函数（可被 pickle）。
        返回的结果列表与 items 顺序一致。
        """
        if not items:
            logger.info("没有需要运行的试验")
            return []

        processes = self.process_count(len(items))
        logger.debug(f"使用 {processes} 个进程运行 {len(items)} 个{desc}")

        results: List[Any] = []
        with tqdm(total=len(items), desc=desc, disable=not self.progress) as pbar:
            if processes == 1:
                for item in items:
                    results.append(process_func(item))
                    pbar.update(1)
                return results
            chunksize = max(1, len(items) // (processes * 8))
            with Pool(processes) as pool:
                for result in pool.imap(process_func, items, chunksize=chunksize):
                    results.append(result)
                    pbar.update(1)
        return results
