"""
cwm 命令行入口

子命令：entails | classify | types | normalize | fuzz
退出码：0 蕴涵成立（或其他子命令成功），1 不蕴涵（或差分测试出现分歧），2 错误。
"""

import argparse
import sys
from typing import List, Optional, TextIO

from pydantic import BaseModel, Field, ValidationError, validator

from .config.manager import ConfigManager
from .core.exceptions import CwmError
from .core.types import (
    ClassificationResult, EntailmentResult, FuzzCaseModel, FuzzResult, OracleModel,
    PreferredTypeModel, StatsModel, SubsumptionModel, TypesResult,
)
from .harness.fuzz import FuzzHarness, verdict_signature
from .harness.generator import GeneratorLimits
from .kb.model import KnowledgeBase, Query, Top
from .kb.parser import load_kb, parse_query
from .kb.renderer import render_concept, render_query
from .reasoning.entailment import EntailmentEngine, EntailmentVerdict
from .reasoning.explain import display_name, explain
from .reasoning.normalizer import normalize_kb, render_normalized_kb
from .reasoning.oracle import oracle_decide
from .reasoning.saturation import classify
from .reasoning.specificity import compute_specificity
from .utils.logging_config import get_logger, setup_logging

MODES = ("entails", "classify", "types", "normalize", "fuzz")
LOG_LEVELS = ["debug", "info", "warning", "error", "critical"]

EXIT_ENTAILED = 0
EXIT_NOT_ENTAILED = 1
EXIT_ERROR = 2


class RunConfig(BaseModel):
    """一次命令行调用的参数。"""
    mode: str
    kb_path: Optional[str] = None
    query_text: Optional[str] = None
    subject_text: Optional[str] = None
    oracle_check: bool = False
    candidate_budget: Optional[int] = None
    json_output: bool = Field(False, alias="json")
    seed: Optional[int] = None
    n: Optional[int] = None
    log_level: Optional[str] = None
    config_path: Optional[str] = None

    class Config:
        allow_population_by_field_name = True

    @validator("mode")
    def known_mode(cls, v):
        if v not in MODES:
            raise ValueError(f"未知的模式: {v}")
        return v

    @validator("candidate_budget")
    def positive_budget(cls, v):
        if v is not None and v < 1:
            raise ValueError("候选预算至少为 1")
        return v

    @validator("seed", "n")
    def non_negative(cls, v):
        if v is not None and v < 0:
            raise ValueError("seed 与 n 不能为负数")
        return v


# =============================================================================
# 输出转换
# =============================================================================

def _preferred_models(verdict: EntailmentVerdict) -> List[PreferredTypeModel]:
    return [
        PreferredTypeModel(
            concepts=sorted(display_name(c, verdict.nkb) for c in t.concepts),
            weights=t.weights.encode(),
        )
        for t in verdict.preferred
    ]


def _stats(verdict: EntailmentVerdict) -> StatsModel:
    return StatsModel(candidates=verdict.candidate_count, preferred=len(verdict.preferred))


def _require(value: Optional[str], flag: str) -> str:
    if not value:
        raise CwmError(f"缺少参数 {flag}")
    return value


# =============================================================================
# 子命令
# =============================================================================

def _engine(cfg: RunConfig, manager: ConfigManager) -> EntailmentEngine:
    options = manager.engine_options()
    if cfg.candidate_budget is not None:
        options["candidate_budget"] = cfg.candidate_budget
    return EntailmentEngine(**options)


def _run_entails(cfg: RunConfig, manager: ConfigManager, out: TextIO, err: TextIO) -> int:
    kb = load_kb(_require(cfg.kb_path, "--kb"))
    query = parse_query(_require(cfg.query_text, "--query"))
    verdict = _engine(cfg, manager).decide(kb, query)

    oracle = None
    if cfg.oracle_check:
        expected = oracle_decide(kb, query, max_class_names=manager.oracle_max_class_names)
        oracle = OracleModel(entailed=expected.entailed,
                             agrees=verdict_signature(expected) == verdict_signature(verdict))

    if cfg.json_output:
        result = EntailmentResult(
            query=render_query(query), entailed=verdict.entailed, vacuous=verdict.vacuous,
            preferred_types=_preferred_models(verdict), stats=_stats(verdict), oracle=oracle,
        )
        out.write(result.to_json() + "\n")
    else:
        out.write(explain(verdict).render() + "\n")
        if oracle is not None:
            out.write(f"oracle: {'entailed' if oracle.entailed else 'not entailed'}"
                      f" ({'agrees' if oracle.agrees else 'DISAGREES'})\n")

    if oracle is not None and not oracle.agrees:
        err.write("error: 主引擎与暴力判定结果不一致\n")
        return EXIT_ERROR
    return EXIT_ENTAILED if verdict.entailed else EXIT_NOT_ENTAILED


def _run_classify(cfg: RunConfig, manager: ConfigManager, out: TextIO) -> int:
    kb = load_kb(_require(cfg.kb_path, "--kb"))
    nkb = normalize_kb(kb)
    result = classify(nkb, sorted(kb.signature.concepts))
    spec = compute_specificity(nkb)
    if cfg.json_output:
        model = ClassificationResult(
            subsumptions=[SubsumptionModel(sub=a, sup=b) for a, b in result.subsumptions],
            unsatisfiable=list(result.unsatisfiable),
            specificity=[SubsumptionModel(sub=h, sup=j) for h, j in spec],
        )
        out.write(model.to_json() + "\n")
        return EXIT_ENTAILED
    lines = [f"{a} <= {b}" for a, b in result.subsumptions]
    lines += [f"{a} <= Bot" for a in result.unsatisfiable]
    lines += [f"specificity {h} > {j}" for h, j in spec]
    for line in sorted(lines):
        out.write(line + "\n")
    return EXIT_ENTAILED


def _run_types(cfg: RunConfig, manager: ConfigManager, out: TextIO) -> int:
    kb = load_kb(_require(cfg.kb_path, "--kb"))
    if cfg.subject_text:
        subject = parse_query(f"T({cfg.subject_text}) <= Top").subject
    else:
        subject = parse_query(_require(cfg.query_text, "--subject 或 --query")).subject
    verdict = _engine(cfg, manager).decide(kb, Query(subject, Top(), typicality=True))
    if cfg.json_output:
        model = TypesResult(subject=render_concept(subject), vacuous=verdict.vacuous,
                            preferred_types=_preferred_models(verdict), stats=_stats(verdict))
        out.write(model.to_json() + "\n")
        return EXIT_ENTAILED
    if verdict.vacuous:
        out.write(f"T({render_concept(subject)}): unsatisfiable subject, no preferred types\n")
    for t in _preferred_models(verdict):
        weights = ", ".join(f"{k}={v}" for k, v in t.weights.items())
        out.write(f"{{{', '.join(t.concepts)}}}  [{weights}]\n")
    return EXIT_ENTAILED


def _run_normalize(cfg: RunConfig, out: TextIO) -> int:
    kb: KnowledgeBase = load_kb(_require(cfg.kb_path, "--kb"))
    out.write(render_normalized_kb(normalize_kb(kb)))
    return EXIT_ENTAILED


def _run_fuzz(cfg: RunConfig, manager: ConfigManager, out: TextIO) -> int:
    n = cfg.n if cfg.n is not None else manager.fuzz_n
    seed = cfg.seed if cfg.seed is not None else manager.fuzz_seed
    options = manager.engine_options()
    if cfg.candidate_budget is not None:
        options["candidate_budget"] = cfg.candidate_budget
    harness = FuzzHarness(
        limits=GeneratorLimits(**manager.generator_limits),
        oracle_cap=manager.oracle_max_class_names,
        reproducer_dir=manager.reproducer_dir,
        threads=manager.threads,
        engine_options=options,
    )
    report = harness.run(n, seed)
    if cfg.json_output:
        model = FuzzResult(
            n=n, seed=seed, agreed=report.agreed, skipped=report.skipped,
            disagreements=[FuzzCaseModel(index=o.index, query=o.query, status=o.status, detail=o.detail)
                           for o in report.disagreements],
            reproducer=str(report.reproducer) if report.reproducer else None,
        )
        out.write(model.to_json() + "\n")
    else:
        out.write(f"fuzz: {n} cases, seed {seed}: {report.agreed} agreed, "
                  f"{report.skipped} skipped, {len(report.disagreements)} disagreed\n")
        for o in report.disagreements:
            out.write(f"  case {o.index}: {o.query}: {o.detail}\n")
        if report.reproducer:
            out.write(f"reproducer: {report.reproducer}\n")
    return EXIT_ENTAILED if report.ok else EXIT_NOT_ENTAILED


def run(cfg: RunConfig, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """执行一次命令，返回退出码；所有错误映射为 2 并在标准错误输出一行诊断。"""
    out = out or sys.stdout
    err = err or sys.stderr
    logger = get_logger()
    try:
        manager = ConfigManager(cfg.config_path)
        setup_logging(cfg.log_level or manager.log_level)
        if cfg.mode == "entails":
            return _run_entails(cfg, manager, out, err)
        if cfg.mode == "classify":
            return _run_classify(cfg, manager, out)
        if cfg.mode == "types":
            return _run_types(cfg, manager, out)
        if cfg.mode == "normalize":
            return _run_normalize(cfg, out)
        return _run_fuzz(cfg, manager, out)
    except (CwmError, OSError) as e:
        err.write(f"error: {e}\n")
        return EXIT_ERROR
    except Exception as e:
        logger.exception("未预期的异常")
        err.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kb", dest="kb_path", help="知识库文件 (.kb)")
    common.add_argument("--query", dest="query_text", help='查询，例如 "T(Emp) <= Young"')
    common.add_argument("--subject", dest="subject_text", help="types 子命令的主语概念")
    common.add_argument("--json", action="store_true", help="输出JSON")
    common.add_argument("--oracle", dest="oracle_check", action="store_true", help="同时运行暴力判定并比较")
    common.add_argument("--budget", dest="candidate_budget", type=int, help="候选子集数量上限")
    common.add_argument("--n", type=int, help="模糊测试用例数")
    common.add_argument("--seed", type=int, help="模糊测试种子")
    common.add_argument("--log-level", dest="log_level", choices=LOG_LEVELS, default=None,
                        help="日志级别 (覆盖配置文件设置，不指定则使用配置文件)")
    common.add_argument("--config", dest="config_path", default=None,
                        help="启动配置文件路径 (默认按 CWM_CONFIG / CWM_CONFIG_DIR / 向上查找)")

    parser = argparse.ArgumentParser(prog="cwm", description="加权可废止EL⊥知识库的cw^m-蕴涵推理机")
    sub = parser.add_subparsers(dest="mode", required=True)
    sub.add_parser("entails", parents=[common], help="判定典型性或严格查询")
    sub.add_parser("classify", parents=[common], help="输出全部原子包含关系")
    sub.add_parser("types", parents=[common], help="输出主语概念的偏好候选类型")
    sub.add_parser("normalize", parents=[common], help="输出范式化后的知识库")
    sub.add_parser("fuzz", parents=[common], help="主引擎与暴力判定的差分测试")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(**vars(args))
    except ValidationError as e:
        sys.stderr.write(f"error: {e.errors()[0]['msg']}\n")
        return EXIT_ERROR
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
