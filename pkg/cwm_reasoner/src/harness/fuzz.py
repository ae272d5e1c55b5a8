"""
主引擎与暴力判定器的差分测试

每个用例比较 entailed、vacuous 与偏好候选权重向量的集合。
用例在线程池中执行，结果按用例序号汇总；第一个分歧被最小化后写入复现文件。
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, List, Optional, Tuple, Union

from ..core.base_logger import BaseLogger, log_operation
from ..core.exceptions import CwmError, OracleCapExceeded
from ..kb.model import KnowledgeBase, Query
from ..kb.renderer import render_kb, render_query
from ..reasoning.candidates import resolve_threads
from ..reasoning.entailment import EntailmentEngine, EntailmentVerdict
from ..reasoning.oracle import ORACLE_MAX_CLASS_NAMES, oracle_decide
from ..utils.path_utils import ensure_dir
from .generator import GeneratorLimits, gen_case
from .minimize import minimize_kb

AGREED = "agreed"
SKIPPED = "skipped"
DISAGREED = "disagreed"


@dataclass(frozen=True)
class CaseOutcome:
    """单个用例的结果（按用例缓冲，避免输出交错）。"""
    index: int
    query: str
    status: str
    detail: Optional[str] = None


@dataclass
class FuzzReport:
    n: int
    seed: int
    outcomes: List[CaseOutcome] = field(default_factory=list)
    reproducer: Optional[Path] = None
    elapsed: float = 0.0

    @property
    def agreed(self) -> int:
        return sum(1 for o in self.outcomes if o.status == AGREED)

    @property
    def skipped(self) -> int:
        return sum(1 for o in self.outcomes if o.status == SKIPPED)

    @property
    def disagreements(self) -> List[CaseOutcome]:
        return [o for o in self.outcomes if o.status == DISAGREED]

    @property
    def ok(self) -> bool:
        return not self.disagreements


def verdict_signature(v: EntailmentVerdict) -> Tuple[bool, bool, FrozenSet[Tuple]]:
    """可比较的判定摘要：是否蕴涵、是否空真、偏好权重向量集合。"""
    vectors = frozenset(
        tuple((name, str(weight)) for name, weight in t.weights.entries) for t in v.preferred
    )
    return v.entailed, v.vacuous, vectors


def compare(kb: KnowledgeBase, query: Query, oracle_cap: int = ORACLE_MAX_CLASS_NAMES,
            engine_options: Optional[dict] = None) -> Tuple[str, Optional[str]]:
    """运行两种判定并比较；返回 (状态, 说明)。"""
    options = dict(engine_options or {})
    options["threads"] = 1
    try:
        expected = oracle_decide(kb, query, max_class_names=oracle_cap)
    except OracleCapExceeded as e:
        return SKIPPED, str(e)
    except CwmError as e:
        return DISAGREED, f"暴力判定出错: {e}"
    try:
        actual = EntailmentEngine(**options).decide(kb, query)
    except CwmError as e:
        return DISAGREED, f"主引擎出错: {e}"
    if verdict_signature(expected) != verdict_signature(actual):
        return DISAGREED, (f"主引擎 entailed={actual.entailed} vacuous={actual.vacuous}, "
                           f"暴力判定 entailed={expected.entailed} vacuous={expected.vacuous}")
    return AGREED, None


class FuzzHarness(BaseLogger):
    """差分测试驱动。"""

    def __init__(self, limits: Optional[GeneratorLimits] = None, oracle_cap: int = ORACLE_MAX_CLASS_NAMES,
                 reproducer_dir: Union[str, Path] = "reports/fuzz", threads: Optional[int] = None,
                 engine_options: Optional[dict] = None, **kwargs) -> None:
        super().__init__(**kwargs)
        self.limits = limits or GeneratorLimits()
        self.oracle_cap = oracle_cap
        self.reproducer_dir = Path(reproducer_dir)
        self.threads = threads
        self.engine_options = engine_options or {}

    def run_case(self, seed: int, index: int) -> CaseOutcome:
        kb, query = gen_case(seed, index, self.limits)
        status, detail = compare(kb, query, self.oracle_cap, self.engine_options)
        return CaseOutcome(index, render_query(query), status, detail)

    @log_operation("差分测试")
    def run(self, n: int, seed: int) -> FuzzReport:
        start = time.perf_counter()
        workers = resolve_threads(self.threads)
        if workers == 1:
            outcomes = [self.run_case(seed, i) for i in range(n)]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(lambda i: self.run_case(seed, i), range(n)))

        report = FuzzReport(n=n, seed=seed, outcomes=outcomes)
        failures = report.disagreements
        if failures:
            first = failures[0]
            self.logger.error(f"用例 {first.index} 出现分歧: {first.query}: {first.detail}")
            report.reproducer = self.write_reproducer(seed, first.index)
        report.elapsed = time.perf_counter() - start
        self._log_stats("FuzzHarness", {
            "cases": n, "agreed": report.agreed, "skipped": report.skipped,
            "disagreed": len(failures), "elapsed": f"{report.elapsed:.2f}s",
        })
        return report

    def write_reproducer(self, seed: int, index: int) -> Path:
        """最小化分歧用例并写入 case_<seed>_<index>.kb。"""
        kb, query = gen_case(seed, index, self.limits)

        def still_failing(candidate: KnowledgeBase) -> bool:
            return compare(candidate, query, self.oracle_cap, self.engine_options)[0] == DISAGREED

        minimal = minimize_kb(kb, still_failing)
        path = ensure_dir(self.reproducer_dir) / f"case_{seed}_{index}.kb"
        header = f"# query: {render_query(query)}\n# seed: {seed} case: {index}\n"
        path.write_text(header + render_kb(minimal), encoding="utf-8")
        self.logger.info(f"复现用例已写入 {path}")
        return path
