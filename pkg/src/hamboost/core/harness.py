"""
实验运行器

按流水线批量运行试验、沿 m 扫描成功率、统计下界构造中的孤立集，并把结果写成
CSV / JSONL 表格。第 i 次试验的所有随机性都来自 (master_seed, i) 派生的种子，
因此结果与进程数无关，可以逐条重放。
"""

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from .constants import LOWER_BOUND_MAX_D, expected_isolated, isolated_set_probability, r1_size, threshold_constants
from .cycle_merge import EXACT, HEURISTIC, merge_run
from .digraph_engine import hamilton
from .exceptions import CertificateError, ConfigError, HamboostError
from .generators import InstanceFamily, InstanceSpec, build_instance, side_sizes
from .graph import AnyGraph, Digraph, Edge, UndirectedGraph, min_degree, read_edge_list, verify_hamilton_cycle
from .multiprocess_helper import MultiprocessExecutor
from .options import DEFAULT_OPTIONS, EngineOptions
from .oracles import DEFAULT_LIMITS, OracleLimits, brute_hamiltonian, exact_independence
from .rotation import BUDGET_FACTOR, sprinkle
from .sampling import Bernoulli, EdgeStream, ExactM, Replacement, derive_seed

TRIAL_COLUMNS = (
    "trial",
    "success",
    "edges_consumed",
    "phases",
    "failure_stage",
    "instance_seed",
    "stream_seed",
    "extra",
)
SWEEP_COLUMNS = ("m", "trials", "success_rate", "mean_Z", "mean_isolated")
FORMATS = ("csv", "jsonl")


class Pipeline(str, Enum):
    THM1A = "thm1a"
    THM2 = "thm2"
    THM3 = "thm3"
    LOWERBOUND1B = "lowerbound1b"
    LOWERBOUND3B = "lowerbound3b"

    @property
    def directed(self) -> bool:
        return self in (Pipeline.THM3, Pipeline.LOWERBOUND3B)

    @property
    def lower_bound(self) -> bool:
        return self in (Pipeline.LOWERBOUND1B, Pipeline.LOWERBOUND3B)


DEFAULT_FAMILY = {
    Pipeline.THM1A: InstanceFamily.COMPLETE_BIPARTITE,
    Pipeline.THM2: InstanceFamily.RANDOM_MIN_DEGREE,
    Pipeline.THM3: InstanceFamily.RANDOM_MIN_DEGREE_DIGRAPH,
    Pipeline.LOWERBOUND1B: InstanceFamily.COMPLETE_BIPARTITE,
    Pipeline.LOWERBOUND3B: InstanceFamily.BIDIRECTED_COMPLETE_BIPARTITE,
}


@dataclass(frozen=True)
class HarnessSettings:
    """配置文件 harness 节"""
    budget_factor: int = BUDGET_FACTOR
    significant_digits: int = 6
    format: str = "csv"
    include_timing: bool = False

    @classmethod
    def from_config(cls, config: Optional[Dict[str, Any]]) -> "HarnessSettings":
        section = (config or {}).get("harness", {})
        settings = cls(
            budget_factor=int(section.get("budget_factor", BUDGET_FACTOR)),
            significant_digits=int(section.get("significant_digits", 6)),
            format=str(section.get("format", "csv")),
            include_timing=bool(section.get("include_timing", False)),
        )
        if settings.format not in FORMATS:
            raise ConfigError("harness.format", f"只支持 {', '.join(FORMATS)}")
        if settings.significant_digits < 1:
            raise ConfigError("harness.significant_digits", "至少为1")
        return settings


DEFAULT_SETTINGS = HarnessSettings()


# ---------------------------------------------------------------------- 配置


@dataclass(frozen=True)
class TrialConfig:
    pipeline: Pipeline
    n: int
    d: float
    m: Optional[float] = None
    rho1: Optional[float] = None
    rho2: Optional[float] = None
    trials: int = 1
    master_seed: int = 0
    instance: Optional[InstanceSpec] = None
    instance_path: Optional[str] = None
    budget: Optional[int] = None
    mode: str = HEURISTIC
    round_multiplier: int = 1
    full_attempt: bool = False

    def validate(self, limits: OracleLimits = DEFAULT_LIMITS) -> "TrialConfig":
        """
        检查字段取值，返回自身

        Raises:
            ConfigError: 第一个不合法的字段
        """
        if self.n < 1:
            raise ConfigError("n", f"顶点数必须为正: {self.n}")
        if self.trials < 0:
            raise ConfigError("trials", f"试验次数不能为负: {self.trials}")
        if not 0.0 < self.d < 1.0:
            raise ConfigError("d", f"d 必须在 (0, 1) 内: {self.d}")
        if self.pipeline is not Pipeline.THM2 and self.d > 0.5:
            raise ConfigError("d", f"{self.pipeline.value} 要求 d ≤ 1/2: {self.d}")
        if self.pipeline.lower_bound and self.d > LOWER_BOUND_MAX_D:
            raise ConfigError("d", f"下界流程要求 d ≤ 1/10: {self.d}")
        if self.m is not None and self.m < 0:
            raise ConfigError("m", f"m 不能为负: {self.m}")
        if self.pipeline is Pipeline.THM2 and self.m is None:
            raise ConfigError("m", "thm2 流程需要给出 m")
        for name in ("rho1", "rho2"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ConfigError(name, f"{name} 不能为负: {value}")
        if self.budget is not None and self.budget < 0:
            raise ConfigError("budget", f"预算不能为负: {self.budget}")
        if self.mode not in (EXACT, HEURISTIC):
            raise ConfigError("mode", f"未知的划分模式: {self.mode!r}")
        if self.mode == EXACT and self.pipeline is Pipeline.THM2 and self.n > limits.cycle_bnb_max_n:
            raise ConfigError("mode", f"exact 模式只支持 n ≤ {limits.cycle_bnb_max_n}")
        if self.round_multiplier < 1:
            raise ConfigError("round_multiplier", "至少为1")
        if self.instance is not None and self.instance_path is not None:
            raise ConfigError("instance", "instance 与 instance_path 只能给出一个")
        if self.instance is not None:
            if self.instance.n != self.n:
                raise ConfigError("instance.n", f"实例顶点数 {self.instance.n} 与 n={self.n} 不一致")
            if self.instance.family.directed != self.pipeline.directed:
                raise ConfigError("instance.family", f"{self.instance.family.value} 与流程 {self.pipeline.value} 的方向性不符")
        if self.pipeline.lower_bound:
            if self.instance_path is not None:
                raise ConfigError("instance_path", "下界流程只在 K_A,B 构造上运行")
            if self.instance is not None and self.instance.family is not DEFAULT_FAMILY[self.pipeline]:
                raise ConfigError("instance.family", "下界流程只在 K_A,B 构造上运行")
        return self

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Pipeline):
                value = value.value
            elif isinstance(value, InstanceSpec):
                value = value.to_dict()
            data[f.name] = value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrialConfig":
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "未知字段")
        try:
            pipeline = Pipeline(data["pipeline"])
        except (KeyError, ValueError):
            raise ConfigError("pipeline", f"未知的流水线: {data.get('pipeline')!r}")
        kwargs: Dict[str, Any] = {"pipeline": pipeline}
        casts = {
            "n": int, "d": float, "m": float, "rho1": float, "rho2": float, "trials": int,
            "master_seed": int, "budget": int, "round_multiplier": int,
        }
        for key, cast in casts.items():
            if key not in data:
                continue
            value = data[key]
            if value is None:
                kwargs[key] = None
                continue
            try:
                kwargs[key] = cast(value)
            except (TypeError, ValueError):
                raise ConfigError(key, f"无法解析为 {cast.__name__}: {value!r}")
        for key in ("n", "d"):
            if kwargs.get(key) is None:
                raise ConfigError(key, "缺少必填字段")
        if data.get("instance") is not None:
            kwargs["instance"] = InstanceSpec.from_dict(data["instance"])
        if data.get("instance_path") is not None:
            kwargs["instance_path"] = str(data["instance_path"])
        if "mode" in data:
            kwargs["mode"] = str(data["mode"])
        if "full_attempt" in data:
            kwargs["full_attempt"] = bool(data["full_attempt"])
        return cls(**kwargs)


# ---------------------------------------------------------------------- 结果


@dataclass
class TrialResult:
    trial: int
    success: bool
    edges_consumed: int
    phase_costs: List[int]
    failure_stage: Optional[str]
    instance_seed: int
    stream_seed: int
    wall_time: float = 0.0
    extra: Dict[str, Any] = field(default_factory=dict)
    cycle: Optional[Tuple[int, ...]] = None

    @property
    def phases(self) -> int:
        return len(self.phase_costs)

    def to_row(self, settings: HarnessSettings = DEFAULT_SETTINGS) -> Dict[str, str]:
        """CSV 的一行；extra 为按键排序的紧凑 JSON"""
        digits = settings.significant_digits
        row = {
            "trial": str(self.trial),
            "success": "1" if self.success else "0",
            "edges_consumed": str(self.edges_consumed),
            "phases": str(self.phases),
            "failure_stage": self.failure_stage or "",
            "instance_seed": str(self.instance_seed),
            "stream_seed": str(self.stream_seed),
            "extra": json.dumps(_round_floats(self.extra, digits), sort_keys=True, separators=(",", ":")),
        }
        if settings.include_timing:
            row["wall_time"] = format_number(self.wall_time, digits)
        return row

    def to_record(self, settings: HarnessSettings = DEFAULT_SETTINGS) -> Dict[str, Any]:
        """JSONL 的一条记录，附带阶段代价与证书"""
        record = {
            "trial": self.trial,
            "success": self.success,
            "edges_consumed": self.edges_consumed,
            "phases": self.phases,
            "phase_costs": list(self.phase_costs),
            "failure_stage": self.failure_stage,
            "instance_seed": self.instance_seed,
            "stream_seed": self.stream_seed,
            "extra": _round_floats(self.extra, settings.significant_digits),
            "cycle": list(self.cycle) if self.cycle is not None else None,
        }
        if settings.include_timing:
            record["wall_time"] = _round_floats(self.wall_time, settings.significant_digits)
        return record


@dataclass
class TrialSummary:
    trials: int
    successes: int
    failure_counts: Dict[str, int]
    mean_edges: Optional[float]

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


@dataclass
class SweepRow:
    m: int
    trials: int
    success_rate: float
    mean_Z: Optional[float]
    mean_isolated: Optional[float]

    def to_row(self, settings: HarnessSettings = DEFAULT_SETTINGS) -> Dict[str, str]:
        digits = settings.significant_digits
        return {
            "m": str(self.m),
            "trials": str(self.trials),
            "success_rate": format_number(self.success_rate, digits),
            "mean_Z": "" if self.mean_Z is None else format_number(self.mean_Z, digits),
            "mean_isolated": "" if self.mean_isolated is None else format_number(self.mean_isolated, digits),
        }


@dataclass
class IsolatedStat:
    n: int
    d: float
    p: float
    trials: int
    mean: float
    formula: float
    std_err: float
    z_score: float
    directed: bool = False

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "p": self.p,
            "trials": self.trials,
            "mean": self.mean,
            "formula": self.formula,
            "std_err": self.std_err,
            "z_score": self.z_score,
            "directed": self.directed,
        }


def format_number(value: float, digits: int = 6) -> str:
    return f"{value:.{digits}g}"


def _round_floats(value: Any, digits: int) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return float(format_number(value, digits))
    if isinstance(value, dict):
        return {k: _round_floats(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(v, digits) for v in value]
    return value


# ---------------------------------------------------------------------- 实例


def trial_seeds(master_seed: int, index: int) -> Tuple[int, int]:
    """第 index 次试验的 (实例种子, 随机边种子)"""
    return derive_seed(master_seed, index, "instance"), derive_seed(master_seed, index, "stream")


@lru_cache(maxsize=4)
def _load_instance(path: str) -> AnyGraph:
    return read_edge_list(path)


def build_host(config: TrialConfig, instance_seed: int) -> AnyGraph:
    """
    构造第 i 次试验的基图 H

    instance_path 给出时所有试验共用该文件；否则按 instance（缺省为流水线默认的实例族）
    生成，随机族使用本次试验的实例种子。
    """
    if config.instance_path is not None:
        host = _load_instance(config.instance_path)
        if isinstance(host, Digraph) != config.pipeline.directed:
            raise ConfigError("instance_path", f"实例方向性与流程 {config.pipeline.value} 不符")
        if host.n != config.n:
            raise ConfigError("instance_path", f"实例顶点数 {host.n} 与 n={config.n} 不一致")
        return host
    spec = config.instance
    if spec is None:
        spec = InstanceSpec(DEFAULT_FAMILY[config.pipeline], config.n, d=config.d)
    return build_instance(replace(spec, seed=instance_seed))


def _require_certificate(graph: AnyGraph, cycle: Optional[Sequence[int]], what: str) -> None:
    if cycle is None or not verify_hamilton_cycle(graph, cycle):
        raise CertificateError(f"{what}：记录前的证书复核失败")


# ---------------------------------------------------------------------- 单次试验


def _run_thm1a(config: TrialConfig, host: UndirectedGraph, stream_seed: int,
               options: EngineOptions, settings: HarnessSettings) -> Dict[str, Any]:
    n = host.n
    want = r1_size(config.d, n)
    room = host.complement_size()
    if want > room:
        logger.warning(f"|R₁|={want} 超过补集大小 {room}，截断为 {room}")
        want = room
    r1 = EdgeStream(host, ExactM(want), derive_seed(stream_seed, 0, "r1"), **options.stream_options()).sample()
    g1 = host.with_edges(r1)
    stream = EdgeStream(host, Replacement(), derive_seed(stream_seed, 0, "r2"), **options.stream_options())
    if config.budget is not None:
        budget = config.budget
    elif config.m is not None:
        budget = max(0, math.ceil(config.m) - len(r1))
    else:
        budget = settings.budget_factor * n
    outcome = sprinkle(g1, stream, budget, options=options)
    if outcome.hamiltonian:
        _require_certificate(g1.with_edges(outcome.consumed), outcome.cycle, "thm1a")

    measured = [p for p in outcome.phases if p.kind != "reopen"]
    extra: Dict[str, Any] = {
        "r1": len(r1),
        "connected": g1.is_connected(),
        "final_path_len": outcome.final_path_len,
        "budget": budget,
    }
    if measured:
        extra["end_ok_fraction"] = sum(p.end_size >= n / 5 for p in measured) / len(measured)
    return {
        "success": outcome.hamiltonian,
        "edges_consumed": outcome.edges_consumed,
        "phase_costs": list(outcome.phase_costs),
        "failure_stage": outcome.failure_stage,
        "cycle": outcome.cycle,
        "extra": extra,
    }


def _run_thm2(config: TrialConfig, host: UndirectedGraph, stream_seed: int,
              options: EngineOptions, limits: OracleLimits) -> Dict[str, Any]:
    n = host.n
    delta = min_degree(host)
    d_eff = delta / n
    extra: Dict[str, Any] = {"d_eff": d_eff, "min_degree": delta}
    if n <= limits.alpha_max_n:
        alpha = exact_independence(host, limits)
        extra["alpha"] = alpha
        extra["alpha_ok"] = alpha < d_eff * d_eff * n / 2
    if delta == 0:
        return {"success": False, "edges_consumed": 0, "phase_costs": [], "failure_stage": "min_degree",
                "cycle": None, "extra": extra}

    outcome = merge_run(host, d_eff, config.m, stream_seed, mode=config.mode,
                        round_multiplier=config.round_multiplier, limits=limits, options=options)
    if outcome.hamiltonian:
        _require_certificate(host.with_edges(outcome.consumed), outcome.cycle, "thm2")
    extra.update({
        "initial_cycles": outcome.initial_cycles,
        "k0": outcome.k0,
        "within_k0": outcome.within_k0,
        "rounds_used": outcome.rounds_used,
        "cases": dict(outcome.case_counts),
    })
    if outcome.schedule is not None:
        extra["p"] = outcome.schedule.p
    if outcome.failure_reason:
        extra["failure_reason"] = outcome.failure_reason
    return {
        "success": outcome.hamiltonian,
        "edges_consumed": outcome.edges_consumed,
        "phase_costs": list(outcome.phase_costs),
        "failure_stage": outcome.failure_stage,
        "cycle": outcome.cycle,
        "extra": extra,
    }


def _run_thm3(config: TrialConfig, host: Digraph, stream_seed: int, options: EngineOptions) -> Dict[str, Any]:
    outcome = hamilton(host, config.d, stream_seed, config.rho1, config.rho2,
                       budget=config.budget, options=options)
    if outcome.hamiltonian:
        _require_certificate(host.with_arcs(outcome.r1 + outcome.consumed), outcome.cycle, "thm3")
    extra: Dict[str, Any] = {
        "r1": outcome.r1_size,
        "free_closures": outcome.free_closures,
        "matching_ok": outcome.failure_stage != "matching",
    }
    if outcome.cover_sizes:
        extra["initial_cycles"] = outcome.cover_sizes[0]
    if outcome.strongly_connected is not None:
        extra["strongly_connected"] = outcome.strongly_connected
    return {
        "success": outcome.hamiltonian,
        "edges_consumed": outcome.r2_consumed,
        "phase_costs": list(outcome.phase_costs),
        "failure_stage": outcome.failure_stage,
        "cycle": outcome.cycle,
        "extra": extra,
    }


def isolated_count(edges: Sequence[Edge], n: int, a: int) -> int:
    """B = {a..n-1} 中不与任何边（弧）关联的顶点数"""
    touched = np.zeros(n, dtype=bool)
    if len(edges):
        touched[np.asarray(edges, dtype=np.int64).ravel()] = True
    return int((~touched[a:]).sum())


def _run_lowerbound(config: TrialConfig, host: AnyGraph, stream_seed: int,
                    options: EngineOptions, limits: OracleLimits) -> Dict[str, Any]:
    directed = config.pipeline.directed
    n = host.n
    a, _ = side_sizes(n, config.d)
    m = config.m if config.m is not None else threshold_constants(config.d, n, lower_bound=True).m_lower_1b
    p = isolated_set_probability(n, config.d, m, directed)
    edges = EdgeStream(host, Bernoulli(p), derive_seed(stream_seed, 0, "lower"), **options.stream_options()).sample()
    isolated = isolated_count(edges, n, a)
    witness = isolated > a
    extra: Dict[str, Any] = {
        "m": m,
        "p": p,
        "isolated": isolated,
        "a": a,
        "expected_isolated": expected_isolated(n, config.d, p, directed, a),
    }
    if config.full_attempt:
        graph = host.with_arcs(edges) if directed else host.with_edges(edges)
        if n <= limits.ham_max_n:
            result = brute_hamiltonian(graph, limits)
            extra["hamiltonian"] = result.hamiltonian
            if witness and result.hamiltonian:
                raise CertificateError("孤立集见证与哈密顿圈并存")
        else:
            extra["hamiltonian"] = None
            logger.debug(f"n={n} 超过 ham_max_n={limits.ham_max_n}，跳过完整哈密顿性判定")
    return {
        "success": witness,
        "edges_consumed": len(edges),
        "phase_costs": [],
        "failure_stage": None if witness else "no_witness",
        "cycle": None,
        "extra": extra,
    }


def run_trial(
    config: TrialConfig,
    index: int,
    options: EngineOptions = DEFAULT_OPTIONS,
    limits: OracleLimits = DEFAULT_LIMITS,
    settings: HarnessSettings = DEFAULT_SETTINGS,
) -> TrialResult:
    """
    运行第 index 次试验

    下界流程的 success 表示得到了 |I| > |A| 的非哈密顿见证；其余流程表示得到了
    复核通过的哈密顿圈。
    """
    instance_seed, stream_seed = trial_seeds(config.master_seed, index)
    started = time.perf_counter()
    host = build_host(config, instance_seed)
    pipeline = config.pipeline
    if pipeline is Pipeline.THM1A:
        data = _run_thm1a(config, host, stream_seed, options, settings)
    elif pipeline is Pipeline.THM2:
        data = _run_thm2(config, host, stream_seed, options, limits)
    elif pipeline is Pipeline.THM3:
        data = _run_thm3(config, host, stream_seed, options)
    else:
        data = _run_lowerbound(config, host, stream_seed, options, limits)
    result = TrialResult(
        trial=index,
        instance_seed=instance_seed,
        stream_seed=stream_seed,
        wall_time=time.perf_counter() - started,
        **data,
    )
    logger.debug(f"试验 {index}: success={result.success}, 消耗 {result.edges_consumed}, 阶段 {result.phases}")
    return result


def _trial_task(args: Tuple[TrialConfig, int, EngineOptions, OracleLimits, HarnessSettings]) -> TrialResult:
    return run_trial(*args)


def run_trials(
    config: TrialConfig,
    *,
    options: EngineOptions = DEFAULT_OPTIONS,
    limits: OracleLimits = DEFAULT_LIMITS,
    settings: HarnessSettings = DEFAULT_SETTINGS,
    workers: Optional[int] = None,
    app_config: Optional[Dict[str, Any]] = None,
    progress: bool = True,
) -> List[TrialResult]:
    """
    运行 config.trials 次试验，结果按试验编号排列

    Raises:
        ConfigError: 配置不合法
    """
    config.validate(limits)
    if config.trials == 0:
        logger.info("trials=0，没有需要运行的试验")
        return []
    executor = MultiprocessExecutor("trial", app_config, workers=workers, progress=progress)
    tasks = [(config, i, options, limits, settings) for i in range(config.trials)]
    results = executor.execute(_trial_task, tasks, desc=f"{config.pipeline.value} 试验")
    summary = summarize(results)
    logger.info(f"{config.pipeline.value}: 成功 {summary.successes}/{summary.trials}，失败阶段 {summary.failure_counts}")
    return results


def summarize(results: Sequence[TrialResult]) -> TrialSummary:
    """成功数与各失败阶段的计数"""
    counts: Dict[str, int] = {}
    for r in results:
        if not r.success:
            stage = r.failure_stage or "unknown"
            counts[stage] = counts.get(stage, 0) + 1
    wins = [r.edges_consumed for r in results if r.success]
    mean = sum(wins) / len(wins) if wins else None
    return TrialSummary(len(results), len(wins), dict(sorted(counts.items())), mean)


def replay_trial(
    config: TrialConfig,
    index: int,
    recorded: Optional[TrialResult] = None,
    *,
    options: EngineOptions = DEFAULT_OPTIONS,
    limits: OracleLimits = DEFAULT_LIMITS,
    settings: HarnessSettings = DEFAULT_SETTINGS,
) -> TrialResult:
    """
    由持久化的种子重新运行一次试验（证书在运行中重新复核）

    给出 recorded 时还要求结果与记录一致。

    Raises:
        HamboostError: 重放结果与记录不一致
    """
    config.validate(limits)
    replayed = run_trial(config, index, options, limits, settings)
    if recorded is not None:
        if (recorded.instance_seed, recorded.stream_seed) != (replayed.instance_seed, replayed.stream_seed):
            raise HamboostError(f"试验 {index} 的种子与记录不一致")
        same = (
            recorded.success == replayed.success
            and recorded.edges_consumed == replayed.edges_consumed
            and recorded.phase_costs == replayed.phase_costs
            and recorded.cycle == replayed.cycle
        )
        if not same:
            raise HamboostError(f"试验 {index} 的重放结果与记录不一致")
    return replayed


# ---------------------------------------------------------------------- 扫描


def _sweep_task(args: Tuple[TrialConfig, int, Tuple[int, ...], EngineOptions]) -> List[Tuple[bool, Optional[int], Optional[int]]]:
    """
    单个种子上的前缀嵌套扫描

    G_m = H + 随机流的前 m 条边（有放回），引擎只用图中已有的边（预算0）。
    某个 m 成功后证书在更大的 m 上仍然成立，直接沿用。
    返回每个 m 的 (成功, 首次成功的 m, |I|)。
    """
    config, index, m_values, options = args
    instance_seed, stream_seed = trial_seeds(config.master_seed, index)
    host = build_host(config, instance_seed)
    n = host.n
    bipartite = config.instance_path is None and (
        config.instance is None or config.instance.family is InstanceFamily.COMPLETE_BIPARTITE
    )
    a, _ = side_sizes(n, config.d) if bipartite else (0, n)

    out: List[Tuple[bool, Optional[int], Optional[int]]] = []
    top = max(m_values) if m_values else 0
    prefix: List[Edge] = []
    if top and host.complement_size():
        stream = EdgeStream(host, Replacement(), derive_seed(stream_seed, 0, "sweep"), **options.stream_options())
        prefix = stream.take(top)
    first_success: Optional[int] = None
    for m in m_values:
        drawn = prefix[:m]
        if first_success is None:
            graph = host.with_edges(drawn)
            tail = EdgeStream(host, Replacement(), derive_seed(stream_seed, m, "sweep-tail"),
                              **options.stream_options())
            outcome = sprinkle(graph, tail, 0, options=options)
            if outcome.hamiltonian:
                _require_certificate(graph, outcome.cycle, "sweep")
                first_success = m
        isolated = isolated_count(drawn, n, a) if bipartite else None
        out.append((first_success is not None, first_success, isolated))
    return out


def sweep(
    config: TrialConfig,
    m_values: Sequence[int],
    *,
    options: EngineOptions = DEFAULT_OPTIONS,
    limits: OracleLimits = DEFAULT_LIMITS,
    workers: Optional[int] = None,
    app_config: Optional[Dict[str, Any]] = None,
    progress: bool = True,
) -> List[SweepRow]:
    """
    沿 m 扫描成功率

    每个种子只生成一次实例与一条随机流，所有 m 共用其前缀，因此同一种子上的成功
    随 m 单调。mean_Z 为成功种子首次成功时的 m 的均值；mean_isolated 只对 K_A,B 给出。

    Raises:
        ConfigError: m_values 不是升序，或流水线不是无向的
    """
    config.validate(limits)
    if config.pipeline not in (Pipeline.THM1A, Pipeline.LOWERBOUND1B):
        raise ConfigError("pipeline", "扫描只支持无向流程 thm1a / lowerbound1b")
    values = tuple(int(m) for m in m_values)
    if any(m < 0 for m in values):
        raise ConfigError("m_values", "m 不能为负")
    if any(b < a for a, b in zip(values, values[1:])):
        raise ConfigError("m_values", "m_values 必须升序")
    if not values or config.trials == 0:
        return [SweepRow(m, 0, 0.0, None, None) for m in values]

    executor = MultiprocessExecutor("sweep", app_config, workers=workers, progress=progress)
    tasks = [(config, i, values, options) for i in range(config.trials)]
    per_seed = executor.execute(_sweep_task, tasks, desc="m 扫描")

    rows: List[SweepRow] = []
    for j, m in enumerate(values):
        column = [seed_rows[j] for seed_rows in per_seed]
        wins = [first for ok, first, _ in column if ok]
        isolated = [iso for _, _, iso in column if iso is not None]
        rows.append(SweepRow(
            m=m,
            trials=len(column),
            success_rate=len(wins) / len(column),
            mean_Z=sum(wins) / len(wins) if wins else None,
            mean_isolated=sum(isolated) / len(isolated) if isolated else None,
        ))
    logger.info(f"扫描完成: {len(values)} 个 m 值, 每个 {config.trials} 个种子")
    return rows


# ---------------------------------------------------------------------- 孤立集统计


ISOLATED_CHUNK = 500


def _isolated_task(args: Tuple[Any, float, int, int, int, int, int, EngineOptions]) -> List[int]:
    """编号 [start, stop) 的孤立集抽样，返回每次的孤立顶点数"""
    host, p, seed, start, stop, n, a, options = args
    counts = []
    for i in range(start, stop):
        stream = EdgeStream(host, Bernoulli(p), derive_seed(seed, i, "isolated"), **options.stream_options())
        counts.append(isolated_count(stream.sample(), n, a))
    return counts


def isolated_set_stat(
    n: int,
    d: float,
    m: Optional[float] = None,
    *,
    p: Optional[float] = None,
    trials: int = 10_000,
    seed: int = 0,
    directed: bool = False,
    options: EngineOptions = DEFAULT_OPTIONS,
    workers: Optional[int] = None,
    app_config: Optional[dict] = None,
    progress: bool = False,
) -> IsolatedStat:
    """
    K_A,B 加 Bernoulli(p) 随机边后 B 中孤立顶点数的经验均值与理论值

    m 与 p 二选一；给 m 时按无向 2m/((d²+(1-d)²)n²)、有向 m/((d²+(1-d)²)n²) 换算。
    z 为 (经验均值 - 理论值) / 标准误；标准误为0时，两者相等记0，否则记 ±inf。
    抽样按编号分块交给多进程执行器，结果与进程数无关。
    """
    if (m is None) == (p is None):
        raise ConfigError("m", "m 与 p 必须恰好给出一个")
    if trials < 1:
        raise ConfigError("trials", "至少为1")
    if p is None:
        p = isolated_set_probability(n, d, m, directed)
    elif not 0.0 <= p <= 1.0:
        raise ConfigError("p", f"概率不在 [0, 1] 内: {p}")
    spec = InstanceSpec(
        InstanceFamily.BIDIRECTED_COMPLETE_BIPARTITE if directed else InstanceFamily.COMPLETE_BIPARTITE, n, d=d
    )
    host = build_instance(spec)
    a, _ = side_sizes(n, d)
    tasks = [
        (host, p, seed, start, min(start + ISOLATED_CHUNK, trials), n, a, options)
        for start in range(0, trials, ISOLATED_CHUNK)
    ]
    executor = MultiprocessExecutor("generic", app_config, workers=workers, progress=progress)
    chunks = executor.execute(_isolated_task, tasks, desc="孤立集抽样")
    counts = np.fromiter((c for chunk in chunks for c in chunk), dtype=np.float64, count=trials)
    mean = float(counts.mean())
    formula = expected_isolated(n, d, p, directed, a)
    std_err = float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    if std_err > 0:
        z = (mean - formula) / std_err
    else:
        z = 0.0 if math.isclose(mean, formula, abs_tol=1e-12) else math.copysign(math.inf, mean - formula)
    logger.debug(f"孤立集: n={n} p={p:.6g} 均值 {mean:.6g} 理论 {formula:.6g} z={z:.3g}")
    return IsolatedStat(n, d, p, trials, mean, formula, std_err, z, directed)


# ---------------------------------------------------------------------- 输出


def format_trials(results: Sequence[TrialResult], fmt: str = "csv",
                  settings: HarnessSettings = DEFAULT_SETTINGS) -> str:
    """把试验结果写成 CSV 或 JSONL 文本"""
    if fmt == "jsonl":
        return "".join(
            json.dumps(r.to_record(settings), sort_keys=True, ensure_ascii=False) + "\n" for r in results
        )
    if fmt != "csv":
        raise ConfigError("format", f"只支持 {', '.join(FORMATS)}")
    columns = list(TRIAL_COLUMNS) + (["wall_time"] if settings.include_timing else [])
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for r in results:
        writer.writerow(r.to_row(settings))
    return buffer.getvalue()


def format_sweep(rows: Sequence[SweepRow], fmt: str = "csv", settings: HarnessSettings = DEFAULT_SETTINGS) -> str:
    if fmt == "jsonl":
        return "".join(
            json.dumps(_round_floats(vars(r), settings.significant_digits), sort_keys=True) + "\n" for r in rows
        )
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(SWEEP_COLUMNS), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.to_row(settings))
    return buffer.getvalue()


def format_isolated(stat: IsolatedStat, fmt: str = "jsonl", settings: HarnessSettings = DEFAULT_SETTINGS) -> str:
    """孤立集统计写成一行 JSONL 或带表头的 CSV"""
    record = _round_floats(stat.as_dict(), settings.significant_digits)
    if fmt == "jsonl":
        return json.dumps(record, sort_keys=True) + "\n"
    if fmt != "csv":
        raise ConfigError("format", f"只支持 {', '.join(FORMATS)}")
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(record), lineterminator="\n")
    writer.writeheader()
    writer.writerow(record)
    return buffer.getvalue()


def write_text(text: str, path: Optional[Union[str, Path]]) -> None:
    """写入文件；path 为 None 时不做任何事（由调用方打印到标准输出）"""
    if path is None:
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")
    logger.info(f"结果已写入: {path}")


__all__ = [
    "Pipeline",
    "HarnessSettings",
    "TrialConfig",
    "TrialResult",
    "TrialSummary",
    "SweepRow",
    "IsolatedStat",
    "build_host",
    "trial_seeds",
    "run_trial",
    "run_trials",
    "summarize",
    "replay_trial",
    "sweep",
    "isolated_set_stat",
    "isolated_count",
    "format_trials",
    "format_sweep",
    "format_isolated",
    "write_text",
]
