"""
实验运行器测试
"""

import json
import math
from dataclasses import replace

import numpy as np
import pytest

from hamboost.core.constants import r1_size, threshold_constants
from hamboost.core.cycle_merge import EXACT, cycle_partition, merge_run
from hamboost.core.digraph_engine import hamilton, q2_check
from hamboost.core.exceptions import ConfigError, HamboostError
from hamboost.core.generators import (
    InstanceFamily,
    InstanceSpec,
    dense_small_alpha,
    gnp,
    random_min_degree_digraph,
)
from hamboost.core.graph import from_arc_list, verify_hamilton_cycle, write_edge_list
from hamboost.core.harness import (
    HarnessSettings,
    Pipeline,
    SweepRow,
    TrialConfig,
    format_isolated,
    format_sweep,
    format_trials,
    isolated_count,
    isolated_set_stat,
    replay_trial,
    run_trials,
    summarize,
    sweep,
    trial_seeds,
)
from hamboost.core.oracles import brute_hamiltonian
from hamboost.core.rotation import sprinkle
from hamboost.core.sampling import EdgeStream, ExactM, Replacement, derive_seed
from hamboost.tests.conftest import complete_graph, cycle_graph


def thm2_config(**overrides) -> TrialConfig:
    base = dict(pipeline=Pipeline.THM2, n=30, d=0.3, m=60.0, trials=3, master_seed=17)
    base.update(overrides)
    return TrialConfig(**base)


def thm3_config(**overrides) -> TrialConfig:
    base = dict(pipeline=Pipeline.THM3, n=20, d=0.3, rho1=0.5, trials=3, master_seed=5)
    base.update(overrides)
    return TrialConfig(**base)


class TestRunTrials:
    """批量试验"""

    def test_thm1a_small(self):
        """n=10, d=0.3：R₁ 截断为整个补集，每次都成功"""
        config = TrialConfig(Pipeline.THM1A, n=10, d=0.3, trials=20, master_seed=1)
        results = run_trials(config, workers=1, progress=False)
        assert len(results) == 20
        assert [r.trial for r in results] == list(range(20))
        for r in results:
            assert r.success
            assert r.edges_consumed == 0
            assert r.extra["r1"] == 24
            assert verify_hamilton_cycle(complete_graph(10), r.cycle)

    def test_zero_trials(self):
        """trials=0 时没有结果"""
        config = TrialConfig(Pipeline.THM1A, n=10, d=0.3, trials=0)
        assert run_trials(config, workers=1, progress=False) == []

    def test_invalid_config_raises(self):
        """配置不合法时不运行"""
        with pytest.raises(ConfigError):
            run_trials(TrialConfig(Pipeline.THM1A, n=0, d=0.3), workers=1, progress=False)

    @pytest.mark.parametrize("factory", [thm2_config, thm3_config])
    def test_deterministic_across_runs(self, factory):
        """同一主种子两次运行的 CSV 逐字节相同"""
        config = factory()
        first = format_trials(run_trials(config, workers=1, progress=False))
        second = format_trials(run_trials(config, workers=1, progress=False))
        assert first == second

    @pytest.mark.parametrize("factory", [thm2_config, thm3_config])
    def test_independent_of_workers(self, factory):
        """结果与进程数无关"""
        config = factory()
        single = format_trials(run_trials(config, workers=1, progress=False))
        double = format_trials(run_trials(config, workers=2, progress=False))
        assert single == double

    def test_seeds_are_per_trial(self):
        """每次试验的种子由 (主种子, 编号) 派生"""
        results = run_trials(thm3_config(), workers=1, progress=False)
        for r in results:
            assert (r.instance_seed, r.stream_seed) == trial_seeds(5, r.trial)

    def test_thm2_records_merge_details(self):
        """thm2 的 extra 包含圈数与轮次"""
        results = run_trials(thm2_config(trials=2), workers=1, progress=False)
        for r in results:
            assert r.extra["min_degree"] >= 9
            assert "alpha" in r.extra
            if r.failure_stage != "min_degree":
                assert r.extra["k0"] >= 1
                assert set(r.extra["cases"]) == {"case1", "case2", "case3"}
            assert r.success == (r.failure_stage is None)

    def test_instance_path(self, tmp_path):
        """所有试验共用文件给出的实例"""
        path = tmp_path / "c12.txt"
        write_edge_list(cycle_graph(12), path)
        config = TrialConfig(Pipeline.THM1A, n=12, d=0.2, trials=2, instance_path=str(path), budget=0)
        results = run_trials(config, workers=1, progress=False)
        assert all(r.success for r in results)

    def test_instance_path_mismatch(self, tmp_path):
        """实例顶点数与 n 不符"""
        path = tmp_path / "c12.txt"
        write_edge_list(cycle_graph(12), path)
        config = TrialConfig(Pipeline.THM1A, n=13, d=0.2, trials=1, instance_path=str(path))
        with pytest.raises(ConfigError) as info:
            run_trials(config, workers=1, progress=False)
        assert info.value.field == "instance_path"


class TestLowerBound:
    """下界流程"""

    def test_witness_matches_isolated_count(self):
        """success 当且仅当 |I| > |A|"""
        config = TrialConfig(Pipeline.LOWERBOUND1B, n=50, d=0.1, trials=5, master_seed=3)
        for r in run_trials(config, workers=1, progress=False):
            assert r.extra["a"] == 5
            assert r.success == (r.extra["isolated"] > 5)
            assert r.failure_stage == (None if r.success else "no_witness")

    def test_full_attempt(self):
        """小规模时同时判定哈密顿性，见证与哈密顿圈不并存"""
        config = TrialConfig(Pipeline.LOWERBOUND1B, n=10, d=0.1, trials=4, full_attempt=True)
        for r in run_trials(config, workers=1, progress=False):
            assert r.extra["hamiltonian"] in (True, False)
            if r.success:
                assert r.extra["hamiltonian"] is False

    def test_directed(self):
        """有向下界流程"""
        config = TrialConfig(Pipeline.LOWERBOUND3B, n=40, d=0.1, m=10, trials=2)
        results = run_trials(config, workers=1, progress=False)
        assert len(results) == 2
        assert all(r.extra["a"] == 4 for r in results)

    def test_isolated_count(self):
        """B = {3..9} 中未被触及的顶点"""
        assert isolated_count([(0, 5), (6, 7)], 10, 3) == 4
        assert isolated_count([], 10, 3) == 7


class TestTrialConfig:
    """试验配置"""

    def test_round_trip(self):
        """to_dict 后 from_dict 得到同一配置"""
        config = thm2_config(instance=InstanceSpec(InstanceFamily.RANDOM_MIN_DEGREE, 30, d=0.3, seed=2))
        assert TrialConfig.from_dict(config.to_dict()) == config
        assert TrialConfig.from_dict(json.loads(json.dumps(config.to_dict()))) == config

    @pytest.mark.parametrize(
        "overrides,field",
        [
            (dict(n=0), "n"),
            (dict(trials=-1), "trials"),
            (dict(d=1.2), "d"),
            (dict(pipeline=Pipeline.THM1A, d=0.7), "d"),
            (dict(pipeline=Pipeline.LOWERBOUND1B, d=0.2, m=None), "d"),
            (dict(m=None), "m"),
            (dict(m=-1.0), "m"),
            (dict(rho1=-0.1), "rho1"),
            (dict(budget=-5), "budget"),
            (dict(mode="greedy"), "mode"),
            (dict(mode="exact", n=60), "mode"),
            (dict(round_multiplier=0), "round_multiplier"),
            (dict(instance=InstanceSpec(InstanceFamily.RANDOM_MIN_DEGREE, 31, d=0.3)), "instance.n"),
            (dict(instance=InstanceSpec(InstanceFamily.RANDOM_MIN_DEGREE_DIGRAPH, 30, d=0.3)), "instance.family"),
            (dict(instance=InstanceSpec(InstanceFamily.RANDOM_MIN_DEGREE, 30, d=0.3), instance_path="g.txt"),
             "instance"),
        ],
    )
    def test_validation_names_field(self, overrides, field):
        """ConfigError 指出出错的字段"""
        with pytest.raises(ConfigError) as info:
            thm2_config(**overrides).validate()
        assert info.value.field == field

    def test_thm2_allows_dense(self):
        """thm2 允许 d > 1/2"""
        thm2_config(d=0.7).validate()

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as info:
            TrialConfig.from_dict({"pipeline": "thm1a", "n": 10, "d": 0.3, "colour": "red"})
        assert info.value.field == "colour"

    def test_unknown_pipeline(self):
        with pytest.raises(ConfigError) as info:
            TrialConfig.from_dict({"pipeline": "thm9", "n": 10, "d": 0.3})
        assert info.value.field == "pipeline"

    def test_bad_value(self):
        with pytest.raises(ConfigError) as info:
            TrialConfig.from_dict({"pipeline": "thm1a", "n": "ten", "d": 0.3})
        assert info.value.field == "n"

    def test_missing_required(self):
        with pytest.raises(ConfigError) as info:
            TrialConfig.from_dict({"pipeline": "thm1a", "n": 10})
        assert info.value.field == "d"


class TestReplay:
    """重放"""

    def test_replay_matches(self):
        """由持久化的种子重放得到同一结果"""
        config = thm2_config()
        recorded = run_trials(config, workers=1, progress=False)[1]
        replayed = replay_trial(config, 1, recorded)
        assert replayed.cycle == recorded.cycle
        assert replayed.phase_costs == recorded.phase_costs

    def test_replay_mismatch(self):
        """记录被篡改时报错"""
        config = thm3_config()
        recorded = run_trials(config, workers=1, progress=False)[0]
        tampered = replace(recorded, edges_consumed=recorded.edges_consumed + 1)
        with pytest.raises(HamboostError):
            replay_trial(config, 0, tampered)


class TestSweep:
    """沿 m 扫描"""

    def test_monotone_success(self):
        """同一批种子上成功率随 m 不减，m=0 时 K_{4,16} 不是哈密顿的"""
        config = TrialConfig(Pipeline.THM1A, n=20, d=0.2, trials=3, master_seed=9)
        rows = sweep(config, [0, 40, 400], workers=1, progress=False)
        assert [r.m for r in rows] == [0, 40, 400]
        assert all(r.trials == 3 for r in rows)
        assert rows[0].success_rate == 0.0
        assert rows[0].mean_Z is None
        assert rows[0].mean_isolated == pytest.approx(16.0)
        rates = [r.success_rate for r in rows]
        assert rates == sorted(rates)
        for r in rows:
            if r.mean_Z is not None:
                assert r.mean_Z <= r.m

    def test_independent_of_workers(self):
        """扫描结果与进程数无关"""
        config = TrialConfig(Pipeline.THM1A, n=20, d=0.2, trials=3, master_seed=2)
        single = format_sweep(sweep(config, [10, 100], workers=1, progress=False))
        double = format_sweep(sweep(config, [10, 100], workers=2, progress=False))
        assert single == double

    def test_single_value(self):
        """只有一个 m 值时只有一行"""
        config = TrialConfig(Pipeline.LOWERBOUND1B, n=30, d=0.1, trials=2)
        rows = sweep(config, [5], workers=1, progress=False)
        assert len(rows) == 1
        assert rows[0].trials == 2

    def test_empty_values(self):
        """没有 m 值时只输出表头"""
        config = TrialConfig(Pipeline.THM1A, n=20, d=0.2, trials=3)
        rows = sweep(config, [], workers=1, progress=False)
        assert rows == []
        assert format_sweep(rows) == "m,trials,success_rate,mean_Z,mean_isolated\n"

    def test_zero_trials(self):
        """trials=0 时每行的 trials 为0"""
        config = TrialConfig(Pipeline.THM1A, n=20, d=0.2, trials=0)
        rows = sweep(config, [1, 2], workers=1, progress=False)
        assert [r.trials for r in rows] == [0, 0]

    def test_descending_values(self):
        with pytest.raises(ConfigError) as info:
            sweep(TrialConfig(Pipeline.THM1A, n=20, d=0.2), [10, 5], workers=1, progress=False)
        assert info.value.field == "m_values"

    def test_directed_pipeline_rejected(self):
        with pytest.raises(ConfigError) as info:
            sweep(thm3_config(), [10], workers=1, progress=False)
        assert info.value.field == "pipeline"


class TestIsolatedSetStat:
    """孤立集统计"""

    def test_no_edges(self):
        """m = 0 时 |I| = (1-d)n"""
        stat = isolated_set_stat(100, 0.2, 0, trials=5)
        assert stat.mean == 80.0
        assert stat.formula == 80.0
        assert stat.z_score == 0.0

    def test_every_edge(self):
        """p = 1 时没有孤立顶点"""
        stat = isolated_set_stat(100, 0.2, p=1.0, trials=3)
        assert stat.mean == 0.0
        assert stat.z_score == 0.0

    def test_exactly_one_of_m_and_p(self):
        with pytest.raises(ConfigError):
            isolated_set_stat(100, 0.2, 10, p=0.1)
        with pytest.raises(ConfigError):
            isolated_set_stat(100, 0.2)

    @pytest.mark.slow
    def test_matches_formula(self):
        """n=100, d=0.2, m=50，10⁴ 次试验的均值与 |B|(1-p)^{|B|-1} 一致"""
        stat = isolated_set_stat(100, 0.2, 50, trials=10_000, seed=1)
        assert stat.p == pytest.approx(100 / 6800)
        assert abs(stat.z_score) < 3

    def test_independent_of_workers(self):
        """跨越分块边界时，单进程与两个进程的统计完全相同"""
        one = isolated_set_stat(60, 0.2, 30, trials=1_200, seed=5, workers=1)
        two = isolated_set_stat(60, 0.2, 30, trials=1_200, seed=5, workers=2)
        assert one == two

    def test_format_isolated(self):
        """CSV 为表头加一行，JSONL 为一行"""
        stat = isolated_set_stat(100, 0.2, 0, trials=3)
        lines = format_isolated(stat, "csv").splitlines()
        assert lines[0] == "n,d,p,trials,mean,formula,std_err,z_score,directed"
        assert len(lines) == 2
        assert lines[1].startswith("100,0.2,0.0,3,80.0,80.0,")
        record = json.loads(format_isolated(stat, "jsonl"))
        assert record["mean"] == 80.0
        with pytest.raises(ConfigError):
            format_isolated(stat, "xml")


class TestOutput:
    """CSV / JSONL 输出"""

    def test_csv_header(self):
        """表头与成功标记"""
        config = TrialConfig(Pipeline.THM1A, n=10, d=0.3, trials=2)
        text = format_trials(run_trials(config, workers=1, progress=False))
        lines = text.splitlines()
        assert lines[0] == "trial,success,edges_consumed,phases,failure_stage,instance_seed,stream_seed,extra"
        assert len(lines) == 3
        assert lines[1].startswith("0,1,0,")

    def test_empty_csv(self):
        """没有结果时只有表头"""
        assert format_trials([]).count("\n") == 1

    def test_jsonl(self):
        """JSONL 每行一条记录，附带证书"""
        config = TrialConfig(Pipeline.THM1A, n=10, d=0.3, trials=2)
        text = format_trials(run_trials(config, workers=1, progress=False), "jsonl")
        records = [json.loads(line) for line in text.splitlines()]
        assert [r["trial"] for r in records] == [0, 1]
        assert all(len(r["cycle"]) == 10 for r in records)

    def test_timing_column(self):
        """include_timing 时多一列"""
        settings = HarnessSettings(include_timing=True)
        config = TrialConfig(Pipeline.THM1A, n=10, d=0.3, trials=1)
        text = format_trials(run_trials(config, workers=1, progress=False), settings=settings)
        assert text.splitlines()[0].endswith(",wall_time")

    def test_significant_digits(self):
        """浮点数保留6位有效数字"""
        row = SweepRow(10, 3, 2 / 3, 12.3456789, None).to_row()
        assert row["success_rate"] == "0.666667"
        assert row["mean_Z"] == "12.3457"
        assert row["mean_isolated"] == ""

    def test_unknown_format(self):
        with pytest.raises(ConfigError):
            format_trials([], "xml")

    def test_settings_from_config(self):
        """配置中的非法格式"""
        with pytest.raises(ConfigError) as info:
            HarnessSettings.from_config({"harness": {"format": "xml"}})
        assert info.value.field == "harness.format"
        assert HarnessSettings.from_config(None) == HarnessSettings()


class TestSummary:
    def test_counts(self):
        """失败阶段计数"""
        config = TrialConfig(Pipeline.LOWERBOUND1B, n=30, d=0.1, m=0, trials=3)
        summary = summarize(run_trials(config, workers=1, progress=False))
        assert summary.trials == 3
        assert summary.successes == 3
        assert summary.success_rate == 1.0



def random_small_digraph(rng, n: int):
    q = float(rng.uniform(0.2, 0.7))
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < q]
    return from_arc_list(n, arcs)


@pytest.mark.slow
class TestAcceptance:
    """较大规模的验收试验"""

    def test_thm1a_bipartite(self):
        """n=200, d=0.1 的 K_{A,B}，默认预算下几乎总是成功"""
        config = TrialConfig(Pipeline.THM1A, n=200, d=0.1, trials=10, master_seed=2024)
        results = run_trials(config, progress=False)
        assert summarize(results).success_rate >= 0.9

    def test_engines_agree_with_exact_oracle(self):
        """500 个 n ≤ 10 的小图：引擎给出的圈都能通过验证，且对应的图确实是哈密顿图"""
        rng = np.random.default_rng(500)
        for i in range(500):
            n = int(rng.integers(3, 11))
            graph = gnp(n, float(rng.uniform(0.2, 0.7)), seed=i)
            free = sprinkle(graph, EdgeStream(graph, Replacement(), seed=i), budget=0)
            merged = merge_run(graph, 0.3, 0, seed=i, mode=EXACT)
            for outcome in (free, merged):
                if outcome.hamiltonian:
                    assert verify_hamilton_cycle(graph, outcome.cycle)
                    assert brute_hamiltonian(graph).hamiltonian, i
            boosted = sprinkle(graph, EdgeStream(graph, Replacement(), seed=i), budget=10_000)
            if boosted.hamiltonian:
                augmented = graph.with_edges(boosted.consumed)
                assert verify_hamilton_cycle(augmented, boosted.cycle)
                assert brute_hamiltonian(augmented).hamiltonian, i

            digraph = random_small_digraph(rng, int(rng.integers(2, 9)))
            outcome = hamilton(digraph, 0.3, seed=i, rho1=0, budget=0)
            if outcome.hamiltonian:
                assert verify_hamilton_cycle(digraph, outcome.cycle)
                assert brute_hamiltonian(digraph).hamiltonian, i

    def test_thm1a_two_stage(self):
        """K_{A,B}，d=0.2, n=400：50 个种子成功率 ≥ 95%，成功时消耗不超过 13n"""
        n = 400
        config = TrialConfig(Pipeline.THM1A, n=n, d=0.2, trials=50, master_seed=400)
        results = run_trials(config, progress=False)
        wins = [r for r in results if r.success]
        assert len(wins) >= 48
        assert sum(r.edges_consumed <= 13 * n for r in wins) >= 0.95 * len(wins)
        for r in wins:
            assert r.extra["r1"] == r1_size(0.2, n)

    def test_lower_bound_statistic(self):
        """d=0.1, n=2000, m=θn/3：|I| 均值在理论值3个标准误以内，见证比例 ≥ 95%"""
        n, d = 2000, 0.1
        m = threshold_constants(d, n, lower_bound=True).m_lower_1b
        stat = isolated_set_stat(n, d, m, trials=10_000, seed=2000)
        assert abs(stat.z_score) < 3
        config = TrialConfig(Pipeline.LOWERBOUND1B, n=n, d=d, trials=200, master_seed=2000)
        assert summarize(run_trials(config, progress=False)).success_rate >= 0.95

    def test_thm2_partition_and_merge(self):
        """50 个 α < d²n/2 的 dense_small_alpha(30, 0.75)：划分不超过 ⌊2/d⌋ 个圈，m=200 时合并成功率 ≥ 90%"""
        accepted = merged = 0
        seed = 0
        while accepted < 50 and seed < 2000:
            instance = dense_small_alpha(30, 0.75, seed)
            seed += 1
            if not (instance.exact and instance.hypothesis_ok):
                continue
            accepted += 1
            partition = cycle_partition(instance.graph, instance.d, EXACT)
            assert partition.ok
            assert partition.within_k0
            assert len(partition.cycles) <= math.floor(2 / instance.d)
            outcome = merge_run(instance.graph, instance.d, 200, seed=seed, mode=EXACT, partition=partition)
            merged += outcome.hamiltonian
        assert accepted == 50
        assert merged >= 45

    def test_thm3_pipeline(self):
        """随机有向图 d=0.3, n=300：匹配 ≥ 98%，哈密顿 ≥ 90%，Q2 抽检全部 ≥ 1/2"""
        n, d = 300, 0.3
        config = TrialConfig(Pipeline.THM3, n=n, d=d, trials=50, master_seed=300)
        results = run_trials(config, progress=False)
        assert sum(r.extra["matching_ok"] for r in results) >= 49
        assert summarize(results).successes >= 45

        host = random_min_degree_digraph(n, d, seed=300)
        rho1 = threshold_constants(d).rho1
        r1 = EdgeStream(host, ExactM(math.ceil(rho1 * n)), derive_seed(300, 0, "r1")).sample()
        report = q2_check(host.with_arcs(r1), 10_000, d, seed=300)
        assert report.samples == 10_000
        assert report.below_half == 0

    def test_output_independent_of_workers(self):
        """1 个与 8 个进程的输出逐字节相同"""
        trial_config = thm3_config(trials=8)
        one = format_trials(run_trials(trial_config, workers=1, progress=False))
        eight = format_trials(run_trials(trial_config, workers=8, progress=False))
        assert one == eight
        merge_config = thm2_config(trials=8)
        assert format_trials(run_trials(merge_config, workers=1, progress=False), "jsonl") == format_trials(
            run_trials(merge_config, workers=8, progress=False), "jsonl"
        )
        sweep_config = TrialConfig(Pipeline.THM1A, n=20, d=0.2, trials=8, master_seed=3)
        assert format_sweep(sweep(sweep_config, [0, 40, 400], workers=1, progress=False)) == format_sweep(
            sweep(sweep_config, [0, 40, 400], workers=8, progress=False)
        )
