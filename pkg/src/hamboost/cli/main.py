"""
hamboost命令行主程序

使用typer构建的命令行接口。数据表（CSV / JSONL）写到标准输出或 --out 文件，
提示信息与日志写到标准错误，因此重定向得到的表格逐字节稳定。
"""

import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import typer
from loguru import logger
from rich import print as rprint
from rich.console import Console
from rich.table import Table

from .. import __version__
from ..config import load_config
from ..core.constants import DensityParams, threshold_constants
from ..core.cycle_merge import EXACT, HEURISTIC, cycle_partition
from ..core.digraph_engine import hamilton, q2_check
from ..core.exceptions import (
    ConfigError,
    ConstantsError,
    GraphFormatError,
    OracleLimitError,
    SamplingError,
)
from ..core.generators import InstanceFamily, InstanceSpec, build_instance
from ..core.graph import Digraph, UndirectedGraph, min_degree, read_edge_list, write_edge_list
from ..core.harness import (
    FORMATS,
    HarnessSettings,
    Pipeline,
    TrialConfig,
    format_isolated,
    format_sweep,
    format_trials,
    isolated_set_stat,
    run_trials,
    summarize,
    sweep as run_sweep,
    write_text,
)
from ..core.options import EngineOptions
from ..core.oracles import (
    OracleLimits,
    brute_hamiltonian,
    brute_hamiltonian_permutations,
    exact_independence,
    longest_cycle_bnb,
    longest_path_exact,
)

# 创建typer应用
app = typer.Typer(
    name="hamboost",
    help="稠密图加随机边的哈密顿圈实验工具",
    add_completion=False,
    rich_markup_mode="rich",
)

# 提示信息走标准错误
console = Console(stderr=True)

USAGE_EXIT = 2
IO_EXIT = 1


def setup_logging(verbose: bool = False, quiet: bool = False, log_file: Optional[str] = None,
                  level: str = "INFO") -> None:
    """设置日志配置；-v / -q 优先于配置中的 logging.level"""
    try:
        logger.level(level)
    except ValueError:
        raise ConfigError("logging.level", f"未知的日志级别: {level!r}")
    logger.remove()

    if quiet:
        logger.add(sys.stderr, level="ERROR", format="<red>错误</red>: {message}")
    elif verbose:
        logger.add(
            sys.stderr,
            level="DEBUG",
            format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {message}",
        )
    else:
        logger.add(sys.stderr, level=level, format="<level>{level}</level>: {message}")

    if log_file:
        logger.add(
            log_file,
            level="DEBUG",
            rotation="10 MB",
            retention="30 days",
            encoding="utf-8",
            format="{time:YYYY-MM-DD HH:mm:ss} | {elapsed} | {level: <8} | {name}:{function}:{line} - {message}",
            enqueue=True,
        )


@contextmanager
def cli_errors() -> Iterator[None]:
    """把库异常映射为退出码：用法错误 2，读写/解析错误 1"""
    try:
        yield
    except (ConfigError, ConstantsError, OracleLimitError, SamplingError) as e:
        console.print(f"[red]参数错误[/red]: {e}")
        raise typer.Exit(USAGE_EXIT)
    except GraphFormatError as e:
        console.print(f"[red]实例文件错误[/red]: {e}")
        raise typer.Exit(IO_EXIT)
    except OSError as e:
        console.print(f"[red]读写错误[/red]: {e}")
        raise typer.Exit(IO_EXIT)


def _prepare(config_path: Optional[Path], verbose: bool, quiet: bool):
    """加载配置并设置日志，返回 (配置字典, 引擎参数, oracle上限, harness设置)"""
    with cli_errors():
        config = load_config(str(config_path), strict=True) if config_path else load_config()
        logging_section = config.get("logging", {})
        setup_logging(verbose, quiet, logging_section.get("file"), str(logging_section.get("level", "INFO")).upper())
        return config, EngineOptions.from_config(config), OracleLimits.from_config(config), HarnessSettings.from_config(config)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(text, nl=False)
    else:
        write_text(text, out)


def _instance_spec(family: Optional[str], n: int, d: Optional[float], q: Optional[float], seed: int) -> Optional[InstanceSpec]:
    if family is None:
        return None
    data = {"family": family, "n": n, "d": d, "q": q, "seed": seed}
    if family == InstanceFamily.DENSE_SMALL_ALPHA.value:
        data["d"] = None
        if q is None:
            raise ConfigError("q", "dense_small_alpha 需要 --q")
    return InstanceSpec.from_dict(data)


def _kv_table(title: str, data: dict) -> Table:
    table = Table(title=title, show_header=True, header_style="bold magenta")
    table.add_column("项目", style="cyan")
    table.add_column("值", style="green")
    for key, value in data.items():
        table.add_row(str(key), f"{value:.6g}" if isinstance(value, float) else str(value))
    return table


# 通用选项
VERBOSE = typer.Option(False, "-v", "--verbose", help="显示详细日志")
QUIET = typer.Option(False, "-q", "--quiet", help="静默模式，只显示错误")
CONFIG = typer.Option(None, "--config", help="JSON 配置文件", exists=True, dir_okay=False, readable=True)
OUT = typer.Option(None, "--out", help="输出文件（默认标准输出）")
INSTANCE = typer.Option(None, "--instance", help="边列表格式的实例文件", exists=True, dir_okay=False, readable=True)


@app.command()
def trial(
    pipeline: str = typer.Option(..., "--pipeline", help="thm1a | thm2 | thm3 | lowerbound1b | lowerbound3b"),
    n: int = typer.Option(..., "--n", "-n", help="顶点数"),
    d: float = typer.Option(..., "--d", "-d", help="密度参数 d"),
    m: Optional[float] = typer.Option(None, "--m", help="随机边数 m"),
    trials: int = typer.Option(1, "--trials", help="试验次数"),
    seed: int = typer.Option(0, "--seed", help="主种子"),
    workers: Optional[int] = typer.Option(None, "--workers", help="进程数"),
    fmt: Optional[str] = typer.Option(None, "--format", help="csv | jsonl"),
    out: Optional[Path] = OUT,
    instance: Optional[Path] = INSTANCE,
    family: Optional[str] = typer.Option(None, "--family", help="实例族（默认随流水线而定）"),
    q: Optional[float] = typer.Option(None, "--q", help="G(n,q) 的边概率"),
    budget: Optional[int] = typer.Option(None, "--budget", help="随机边预算"),
    rho1: Optional[float] = typer.Option(None, "--rho1", help="thm3: |R₁|/n"),
    rho2: Optional[float] = typer.Option(None, "--rho2", help="thm3: |R₂|/n"),
    mode: str = typer.Option(HEURISTIC, "--mode", help="thm2 圈划分: exact | heuristic"),
    round_multiplier: int = typer.Option(1, "--round-multiplier", help="thm2 轮数倍数"),
    full_attempt: bool = typer.Option(False, "--full-attempt", help="下界流程同时做完整哈密顿性判定"),
    config_path: Optional[Path] = CONFIG,
    verbose: bool = VERBOSE,
    quiet: bool = QUIET,
):
    """
    运行一组试验，输出逐次结果表

    示例:

        hamboost trial --pipeline thm1a -n 10 -d 0.3 --trials 20
        hamboost trial --pipeline thm3 -n 300 -d 0.3 --trials 50 --workers 4 --out thm3.csv
    """
    config, options, limits, settings = _prepare(config_path, verbose, quiet)
    with cli_errors():
        try:
            pipe = Pipeline(pipeline)
        except ValueError:
            raise ConfigError("pipeline", f"未知的流水线: {pipeline!r}")
        fmt = fmt or settings.format
        if fmt not in FORMATS:
            raise ConfigError("format", f"只支持 {', '.join(FORMATS)}")
        trial_config = TrialConfig(
            pipeline=pipe,
            n=n,
            d=d,
            m=m,
            rho1=rho1,
            rho2=rho2,
            trials=trials,
            master_seed=seed,
            instance=_instance_spec(family, n, d, q, seed),
            instance_path=str(instance) if instance else None,
            budget=budget,
            mode=mode,
            round_multiplier=round_multiplier,
            full_attempt=full_attempt,
        )
        results = run_trials(trial_config, options=options, limits=limits, settings=settings,
                             workers=workers, app_config=config, progress=not quiet)
        _emit(format_trials(results, fmt, settings), out)

    if not quiet:
        summary = summarize(results)
        data = {"试验次数": summary.trials, "成功": summary.successes, "成功率": summary.success_rate}
        if summary.mean_edges is not None:
            data["平均消耗"] = summary.mean_edges
        for stage, count in summary.failure_counts.items():
            data[f"失败: {stage}"] = count
        console.print(_kv_table(f"{pipe.value} 汇总", data))


@app.command()
def sweep(
    n: int = typer.Option(..., "--n", "-n", help="顶点数"),
    d: float = typer.Option(..., "--d", "-d", help="密度参数 d"),
    m_values: str = typer.Option(..., "--m-values", help="逗号分隔的 m 值（升序）"),
    per_n: bool = typer.Option(False, "--per-n", help="m 值按 n 的倍数给出"),
    trials: int = typer.Option(10, "--trials", help="每个 m 的种子数"),
    seed: int = typer.Option(0, "--seed", help="主种子"),
    workers: Optional[int] = typer.Option(None, "--workers", help="进程数"),
    fmt: Optional[str] = typer.Option(None, "--format", help="csv | jsonl"),
    out: Optional[Path] = OUT,
    instance: Optional[Path] = INSTANCE,
    family: Optional[str] = typer.Option(None, "--family", help="实例族（默认 complete_bipartite）"),
    q: Optional[float] = typer.Option(None, "--q", help="G(n,q) 的边概率"),
    config_path: Optional[Path] = CONFIG,
    verbose: bool = VERBOSE,
    quiet: bool = QUIET,
):
    """
    沿 m 扫描成功率（每个种子的随机边按前缀嵌套）

    示例:

        hamboost sweep -n 2000 -d 0.1 --m-values 0.5,0.767,1,1.5,2 --per-n --trials 20
    """
    config, options, limits, settings = _prepare(config_path, verbose, quiet)
    with cli_errors():
        try:
            raw = [float(x) for x in m_values.split(",") if x.strip()]
        except ValueError:
            raise ConfigError("m_values", f"无法解析: {m_values!r}")
        values = [round(x * n) if per_n else round(x) for x in raw]
        fmt = fmt or settings.format
        if fmt not in FORMATS:
            raise ConfigError("format", f"只支持 {', '.join(FORMATS)}")
        trial_config = TrialConfig(
            pipeline=Pipeline.THM1A,
            n=n,
            d=d,
            trials=trials,
            master_seed=seed,
            instance=_instance_spec(family, n, d, q, seed),
            instance_path=str(instance) if instance else None,
        )
        rows = run_sweep(trial_config, values, options=options, limits=limits,
                         workers=workers, app_config=config, progress=not quiet)
        _emit(format_sweep(rows, fmt, settings), out)


@app.command()
def lowerbound(
    n: int = typer.Option(..., "--n", "-n", help="顶点数"),
    d: float = typer.Option(..., "--d", "-d", help="|A|/n"),
    m: Optional[float] = typer.Option(None, "--m", help="随机边数 m（与 --p 二选一）"),
    p: Optional[float] = typer.Option(None, "--p", help="包含概率 p"),
    trials: int = typer.Option(10_000, "--trials", help="抽样次数"),
    seed: int = typer.Option(0, "--seed", help="主种子"),
    directed: bool = typer.Option(False, "--directed", help="双向 K_A,B 与弧模型"),
    workers: Optional[int] = typer.Option(None, "--workers", help="进程数"),
    fmt: str = typer.Option("jsonl", "--format", help="csv | jsonl"),
    out: Optional[Path] = OUT,
    config_path: Optional[Path] = CONFIG,
    verbose: bool = VERBOSE,
    quiet: bool = QUIET,
):
    """
    K_A,B 加随机边后 B 中孤立顶点数：经验均值与理论值对比

    示例:

        hamboost lowerbound -n 2000 -d 0.1 --m 5000 --workers 4 --format csv
    """
    config, options, limits, settings = _prepare(config_path, verbose, quiet)
    with cli_errors():
        if fmt not in FORMATS:
            raise ConfigError("format", f"只支持 {', '.join(FORMATS)}")
        stat = isolated_set_stat(n, d, m, p=p, trials=trials, seed=seed, directed=directed, options=options,
                                 workers=workers, app_config=config, progress=not quiet)
        _emit(format_isolated(stat, fmt, settings), out)
    if not quiet:
        console.print(_kv_table("孤立集统计", stat.as_dict()))


@app.command()
def digraph(
    n: int = typer.Option(..., "--n", "-n", help="顶点数"),
    d: float = typer.Option(..., "--d", "-d", help="密度参数 d"),
    seed: int = typer.Option(0, "--seed", help="种子"),
    instance: Optional[Path] = INSTANCE,
    family: str = typer.Option(InstanceFamily.RANDOM_MIN_DEGREE_DIGRAPH.value, "--family", help="有向实例族"),
    rho1: Optional[float] = typer.Option(None, "--rho1", help="|R₁|/n"),
    rho2: Optional[float] = typer.Option(None, "--rho2", help="|R₂|/n"),
    budget: Optional[int] = typer.Option(None, "--budget", help="R₂ 预算（覆盖 ρ₂n）"),
    q2_samples: int = typer.Option(0, "--q2-samples", help="在 H 上抽检扩张性的次数"),
    out: Optional[Path] = OUT,
    config_path: Optional[Path] = CONFIG,
    verbose: bool = VERBOSE,
    quiet: bool = QUIET,
):
    """
    在单个有向实例上运行有向流水线，可选写出哈密顿圈
    """
    config, options, limits, settings = _prepare(config_path, verbose, quiet)
    with cli_errors():
        if instance is not None:
            host = read_edge_list(instance)
            if not isinstance(host, Digraph):
                raise ConfigError("instance", "有向流水线需要有向实例")
        else:
            host = build_instance(_instance_spec(family, n, d, None, seed))
            if not isinstance(host, Digraph):
                raise ConfigError("family", f"{family} 不是有向实例族")
        outcome = hamilton(host, d, seed, rho1, rho2, budget=budget, options=options)
        report = {
            "n": host.n,
            "hamiltonian": outcome.hamiltonian,
            "failure_stage": outcome.failure_stage or "",
            "|R₁|": outcome.r1_size,
            "R₂ 消耗": outcome.r2_consumed,
            "阶段数": outcome.phases,
            "免费闭合": outcome.free_closures,
        }
        if outcome.cover_sizes:
            report["初始圈数"] = outcome.cover_sizes[0]
        if q2_samples > 0:
            q2 = q2_check(host, q2_samples, d, seed)
            report["Q2 最小比例"] = q2.min_ratio
            report["Q2 低于1/2"] = q2.below_half
        if out is not None and outcome.cycle is not None:
            write_text(" ".join(map(str, outcome.cycle)) + "\n", out)
    if not quiet:
        console.print(_kv_table("有向流水线", report))


@app.command()
def decompose(
    n: int = typer.Option(30, "--n", "-n", help="顶点数"),
    q: float = typer.Option(0.75, "--q", help="G(n,q) 的边概率"),
    seed: int = typer.Option(0, "--seed", help="种子"),
    instance: Optional[Path] = INSTANCE,
    mode: str = typer.Option(EXACT, "--mode", help="exact | heuristic"),
    out: Optional[Path] = OUT,
    config_path: Optional[Path] = CONFIG,
    verbose: bool = VERBOSE,
    quiet: bool = QUIET,
):
    """
    把无向实例划分为不相交的圈（反复取最长圈）

    不给 --instance 时在 G(n, q) 上运行。
    """
    config, options, limits, settings = _prepare(config_path, verbose, quiet)
    with cli_errors():
        if instance is not None:
            graph = read_edge_list(instance)
            if not isinstance(graph, UndirectedGraph):
                raise ConfigError("instance", "圈划分需要无向实例")
        else:
            graph = build_instance(InstanceSpec(InstanceFamily.DENSE_SMALL_ALPHA, n, q=q, seed=seed))
        delta = min_degree(graph)
        if delta == 0:
            raise ConfigError("instance", "最小度为0，无法确定 k₀")
        d = delta / graph.n
        partition = cycle_partition(graph, d, mode, seed=seed, limits=limits, options=options)
        text = "".join(" ".join(map(str, c)) + "\n" for c in partition.cycles)
        _emit(text, out)
    if not quiet:
        data = {
            "n": graph.n,
            "d = δ/n": d,
            "圈数": len(partition.cycles),
            "k₀": partition.k0,
            "不超过 k₀": partition.within_k0,
            "精确": partition.exact,
            "失败": partition.failure or "",
        }
        if graph.n <= limits.alpha_max_n:
            alpha = exact_independence(graph, limits)
            data["α"] = alpha
            data["α < d²n/2"] = alpha < d * d * graph.n / 2
        console.print(_kv_table("圈划分", data))


ORACLE_KINDS = ("ham", "ham-perm", "alpha", "longest-path", "longest-cycle")


@app.command()
def oracle(
    instance: Path = typer.Argument(..., help="边列表格式的实例文件", exists=True, dir_okay=False, readable=True),
    kind: str = typer.Option("ham", "--kind", help=" | ".join(ORACLE_KINDS)),
    config_path: Optional[Path] = CONFIG,
    verbose: bool = VERBOSE,
    quiet: bool = QUIET,
):
    """
    在小实例上运行精确预言机，结果以 JSON 写到标准输出
    """
    config, options, limits, settings = _prepare(config_path, verbose, quiet)
    with cli_errors():
        if kind not in ORACLE_KINDS:
            raise ConfigError("kind", f"只支持 {', '.join(ORACLE_KINDS)}")
        graph = read_edge_list(instance)
        result: dict = {"n": graph.n, "kind": kind}
        if kind in ("ham", "ham-perm"):
            found = brute_hamiltonian(graph, limits) if kind == "ham" else brute_hamiltonian_permutations(graph, limits)
            result["hamiltonian"] = found.hamiltonian
            result["cycle"] = list(found.cycle) if found.cycle else None
        else:
            if not isinstance(graph, UndirectedGraph):
                raise ConfigError("kind", f"{kind} 只支持无向图")
            if kind == "alpha":
                result["alpha"] = exact_independence(graph, limits)
            elif kind == "longest-path":
                result["path"] = list(longest_path_exact(graph, limits))
            else:
                cycle = longest_cycle_bnb(graph, limits)
                result["cycle"] = list(cycle) if cycle else None
    typer.echo(json.dumps(result, sort_keys=True))


@app.command()
def constants(
    d: float = typer.Option(..., "--d", "-d", help="密度参数 d"),
    n: int = typer.Option(1, "--n", "-n", help="顶点数（默认1，即每个顶点的系数）"),
    lower_bound: bool = typer.Option(False, "--lower-bound", help="按下界构造检查 d ≤ 1/10"),
    verbose: bool = VERBOSE,
    quiet: bool = QUIET,
):
    """
    显示阈值常数 θ、m 的上下界系数、c*、ρ₁、ρ₂
    """
    setup_logging(verbose, quiet)
    with cli_errors():
        consts = threshold_constants(d, n, lower_bound=lower_bound)
        data = consts.as_dict()
        if n > 1:
            data["min_degree_target"] = DensityParams(d, n).min_degree_target
    if quiet:
        typer.echo(json.dumps(data, sort_keys=True))
    else:
        console.print(_kv_table("阈值常数", data))


@app.command()
def generate(
    family: str = typer.Option(..., "--family", help=" | ".join(f.value for f in InstanceFamily)),
    n: int = typer.Option(..., "--n", "-n", help="顶点数"),
    out: Path = typer.Option(..., "--out", help="输出的边列表文件"),
    d: Optional[float] = typer.Option(None, "--d", "-d", help="密度参数 d"),
    q: Optional[float] = typer.Option(None, "--q", help="G(n,q) 的边概率"),
    seed: int = typer.Option(0, "--seed", help="种子"),
    verbose: bool = VERBOSE,
    quiet: bool = QUIET,
):
    """
    生成实例并写成边列表文件

    示例:

        hamboost generate --family complete_bipartite -n 10 -d 0.3 --out k37.txt
    """
    setup_logging(verbose, quiet)
    with cli_errors():
        spec = _instance_spec(family, n, d, q, seed)
        graph = build_instance(spec)
        write_edge_list(graph, out)
    if not quiet:
        kind = "有向" if isinstance(graph, Digraph) else "无向"
        console.print(f"[green]✓ 已生成[/green]: {out} ({kind}, n={graph.n}, 最小度 {min_degree(graph)})")


@app.command()
def version():
    """显示版本信息"""
    rprint(f"[bold blue]hamboost[/bold blue] version [green]{__version__}[/green]")
    rprint("稠密图加随机边的哈密顿圈实验工具")


if __name__ == "__main__":
    app()
