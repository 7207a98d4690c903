"""
多进程执行器测试
"""

from hamboost.core.multiprocess_helper import MultiprocessExecutor


def square(x):
    return x * x


class TestProcessCount:
    """进程数的确定"""

    def test_workers_override(self):
        """显式进程数优先于配置"""
        config = {"multiprocessing": {"enabled": False}}
        assert MultiprocessExecutor("trial", config, workers=3).process_count(10) == 3

    def test_never_more_than_items(self):
        """进程数不超过项目数"""
        assert MultiprocessExecutor("trial", workers=8).process_count(2) == 2

    def test_disabled(self):
        """禁用多进程时只用一个进程"""
        config = {"multiprocessing": {"enabled": False}}
        assert MultiprocessExecutor("sweep", config).process_count(100) == 1

    def test_fixed_without_auto_adjust(self):
        """不自动调整时使用配置值"""
        config = {"multiprocessing": {"enabled": True, "auto_adjust": False, "max_processes": {"trial": 1}}}
        assert MultiprocessExecutor("trial", config).process_count(100) == 1


class TestExecute:
    """结果收集"""

    def test_empty(self):
        """没有项目时返回空列表"""
        assert MultiprocessExecutor(workers=2, progress=False).execute(square, []) == []

    def test_order_single_process(self):
        """单进程结果按输入顺序"""
        items = list(range(20))
        assert MultiprocessExecutor(workers=1, progress=False).execute(square, items) == [x * x for x in items]

    def test_order_two_processes(self):
        """多进程结果同样按输入顺序"""
        items = list(range(50))
        assert MultiprocessExecutor(workers=2, progress=False).execute(square, items) == [x * x for x in items]
