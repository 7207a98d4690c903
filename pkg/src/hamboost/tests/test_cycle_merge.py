"""
圈划分与合并测试
"""

import pytest

from hamboost.core.cycle_merge import (
    EXACT,
    HEURISTIC,
    CyclePartition,
    MergeStep,
    RoundSchedule,
    cycle_partition,
    longest_cycle,
    merge_run,
)
from hamboost.core.exceptions import ConfigError
from hamboost.core.generators import gnp, random_min_degree_graph
from hamboost.core.graph import from_edge_list, verify_hamilton_cycle
from hamboost.tests.conftest import complete_graph, cycle_graph


def two_triangles():
    return from_edge_list(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])


def star_graph(leaves: int):
    return from_edge_list(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


class TestLongestCycle:
    """最长圈"""

    @pytest.mark.parametrize("mode", [EXACT, HEURISTIC])
    def test_cycle_graph(self, mode):
        """C₆ 的最长圈是自身"""
        cycle = longest_cycle(cycle_graph(6), mode)
        assert len(cycle) == 6

    def test_k4_minus_edge(self):
        """K₄ 去掉一条边仍有4-圈"""
        graph = from_edge_list(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        cycle = longest_cycle(graph, EXACT)
        assert len(cycle) == 4
        assert verify_hamilton_cycle(graph, cycle)

    @pytest.mark.parametrize("mode", [EXACT, HEURISTIC])
    def test_tree_has_none(self, mode):
        """树没有圈"""
        assert longest_cycle(star_graph(5), mode) is None

    def test_petersen(self, petersen):
        """Petersen 图的最长圈有9个顶点"""
        assert len(longest_cycle(petersen, EXACT)) == 9

    def test_heuristic_finds_some_cycle(self, petersen):
        """启发式结果是图中的一个圈"""
        cycle = longest_cycle(petersen, HEURISTIC, seed=4)
        assert len(cycle) >= 4
        for i in range(len(cycle)):
            assert petersen.has_edge(cycle[i], cycle[(i + 1) % len(cycle)])

    @pytest.mark.parametrize("n", [6, 8, 10, 11])
    def test_predecessors_independent(self, n):
        """最长圈 C 外的顶点 w：w 与其在 C 上邻居的前驱构成独立集"""
        for seed in range(10):
            graph = gnp(n, 0.3, seed)
            cycle = longest_cycle(graph, EXACT)
            if cycle is None or len(cycle) == n:
                continue
            position = {v: i for i, v in enumerate(cycle)}
            for w in range(n):
                if w in position:
                    continue
                group = {cycle[position[v] - 1] for v in graph.neighbors(w) if v in position} | {w}
                for a in group:
                    for b in group:
                        assert a == b or not graph.has_edge(a, b)

    def test_unknown_mode(self, c5):
        """未知模式"""
        with pytest.raises(ConfigError):
            longest_cycle(c5, "greedy")


class TestCyclePartition:
    """圈划分"""

    @pytest.mark.parametrize("n", [5, 12])
    def test_hamiltonian_graph(self, n):
        """C_n 划分为一个圈"""
        partition = cycle_partition(cycle_graph(n), 0.3)
        assert partition.ok
        assert len(partition.cycles) == 1
        assert partition.k0 == 6
        assert partition.validate(cycle_graph(n))

    def test_complete_graph(self):
        """K₆ 划分为一个圈"""
        partition = cycle_partition(complete_graph(6), 0.5, HEURISTIC)
        assert len(partition.cycles) == 1
        assert partition.k0 == 4

    def test_two_triangles(self):
        """两个不相连的三角形"""
        graph = two_triangles()
        partition = cycle_partition(graph, 0.5)
        assert len(partition.cycles) == 2
        assert partition.validate(graph)

    def test_petersen_leaves_a_vertex(self, petersen):
        """Petersen 图取走9-圈后剩一个孤立顶点，划分失败"""
        partition = cycle_partition(petersen, 0.3)
        assert not partition.ok
        assert partition.failure == "partition"
        assert len(partition.leftover) == 1

    def test_tree_fails(self):
        """树无法划分"""
        partition = cycle_partition(star_graph(4), 0.3, HEURISTIC)
        assert partition.failure == "partition"
        assert partition.cycles == []

    def test_k0_bound(self):
        """超过 k₀ 个圈时 within_k0 为假"""
        triangles = [(3 * i + a, 3 * i + b) for i in range(5) for a, b in ((0, 1), (1, 2), (2, 0))]
        partition = cycle_partition(from_edge_list(15, triangles), 0.5)
        assert len(partition.cycles) == 5
        assert not partition.within_k0


class TestRoundSchedule:
    """轮次概率"""

    def test_solve(self):
        """r 轮合起来的包含概率为 m/|Ē|"""
        schedule = RoundSchedule.solve(400, 2000, 5)
        assert 1 - (1 - schedule.p) ** 5 == pytest.approx(0.2)
        assert schedule.expected_round_size == pytest.approx(schedule.p * 2000)


class TestMergeRun:
    """合并"""

    def test_hamiltonian_partition(self):
        """划分本身就是哈密顿圈时不使用任何轮次"""
        outcome = merge_run(cycle_graph(8), 0.3, 10, seed=1)
        assert outcome.hamiltonian
        assert outcome.rounds_used == 0
        assert outcome.edges_consumed == 0

    def test_case1_merges_for_free(self):
        """K₆ 中的两个三角形只用已有的边合并"""
        partition = CyclePartition([(0, 1, 2), (3, 4, 5)], k0=4, exact=True)
        outcome = merge_run(complete_graph(6), 0.5, 0, seed=1, partition=partition)
        assert outcome.hamiltonian
        assert outcome.case_counts["case1"] == 1
        assert outcome.rounds_used == 0
        assert outcome.steps == [MergeStep("case1", 3, 0, True)]
        assert verify_hamilton_cycle(complete_graph(6), outcome.cycle)

    def test_case2_uses_round(self):
        """两个不相连的三角形需要一轮随机边"""
        host = two_triangles()
        outcome = merge_run(host, 0.5, host.complement_size(), seed=3, mode=EXACT)
        assert outcome.hamiltonian
        assert outcome.case_counts["case2"] == 1
        assert outcome.rounds_used == 1
        assert outcome.steps == [MergeStep("case2", 3, 0, True)]
        assert outcome.edges_consumed == host.complement_size()
        assert verify_hamilton_cycle(host.with_edges(outcome.consumed), outcome.cycle)

    def test_case2_no_edge(self):
        """m = 0 时轮次为空，情形2失败"""
        outcome = merge_run(two_triangles(), 0.5, 0, seed=3, mode=EXACT)
        assert not outcome.hamiltonian
        assert outcome.failure_stage == "case2"
        assert outcome.failure_reason == "no_edge"
        assert outcome.rounds_used == 1

    def test_partition_failure(self, petersen):
        """划分失败直接返回"""
        outcome = merge_run(petersen, 0.3, 10, seed=0, mode=EXACT)
        assert outcome.failure_stage == "partition"
        assert outcome.rounds_used == 0

    def test_deterministic(self):
        """同一种子得到同一结果，成功时证书成立"""
        host = random_min_degree_graph(40, 0.3, seed=8)
        first = merge_run(host, 0.3, 80, seed=11)
        second = merge_run(host, 0.3, 80, seed=11)
        assert first.cycle == second.cycle
        assert first.consumed == second.consumed
        assert first.hamiltonian or first.failure_stage is not None
        if first.hamiltonian:
            assert verify_hamilton_cycle(host.with_edges(first.consumed), first.cycle)

    @pytest.mark.parametrize("seed", range(8))
    def test_steps_keep_cover(self, seed):
        """每一步之后路径与圈仍覆盖 V；情形2只在 |V(P)| ≤ n/2 时、情形3只在 |V(P)| > n/2 时出现"""
        n = 60
        host = random_min_degree_graph(n, 0.1, seed=seed)
        outcome = merge_run(host, 0.1, 40, seed=seed)
        assert all(step.covered for step in outcome.steps)
        for step in outcome.steps:
            if step.case == "case2":
                assert step.path_before <= n / 2
            if step.case in ("case3", "close"):
                assert step.path_before > n / 2
        rounds = sum(1 for step in outcome.steps if step.case in ("case2", "case3"))
        assert rounds <= outcome.rounds_used
