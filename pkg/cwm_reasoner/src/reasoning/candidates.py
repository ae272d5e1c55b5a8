"""
原型候选类型枚举

对类名子集 S（恒含 C_q）以 {Inst(#aux, A) : A ∈ S} ∪ ABox 为种子饱和，
丢弃不一致者，按闭包去重。子集按Gray码顺序遍历：加入一个类时在当前状态上增量饱和，
移除一个类时从ABox基态重建。Gray序列被切成连续的块并行求值，按块序合并。
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from ..core.exceptions import CandidateBudgetExceeded, ConfigurationError
from ..kb.model import TOP_NAME
from .normalizer import NormalizedKB
from .preference import CandidateType, make_candidate
from .saturation import AUX, Inst, SaturationEngine

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1 << 20
MAX_AUTO_THREADS = 8
PARALLEL_MIN_SUBSETS = 256


def free_class_names(nkb: NormalizedKB, subject: str) -> Tuple[str, ...]:
    """参与枚举的类名：除 Top 与 C_q 外的全部类名，排序。"""
    return tuple(sorted(n for n in set(nkb.class_names) if n not in (TOP_NAME, subject)))


def resolve_threads(configured: Optional[int] = None) -> int:
    """线程数：CWM_THREADS 环境变量优先，0 表示自动。"""
    value = configured if configured is not None else 0
    env = os.environ.get("CWM_THREADS")
    if env is not None and env.strip():
        try:
            value = int(env)
        except ValueError:
            logger.warning(f"忽略无效的 CWM_THREADS={env!r}")
    if value <= 0:
        value = min(os.cpu_count() or 1, MAX_AUTO_THREADS)
    return max(1, value)


def check_budget(nkb: NormalizedKB, subject: str, budget: int) -> int:
    bound = 1 << len(free_class_names(nkb, subject))
    if bound > budget:
        raise CandidateBudgetExceeded(bound, budget)
    return bound


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def _seed(names: Sequence[str], mask: int, subject: str) -> List[Inst]:
    atoms = [Inst(AUX, subject)]
    atoms += [Inst(AUX, names[b]) for b in range(len(names)) if mask >> b & 1]
    return atoms


class _ChunkWalker:
    """在一段连续的Gray码区间上增量饱和。"""

    def __init__(self, base: SaturationEngine, names: Sequence[str], subject: str):
        self.base = base
        self.names = names
        self.subject = subject
        self.saturations = 0

    def _fresh(self, mask: int) -> SaturationEngine:
        self.saturations += 1
        return self.base.copy().add(_seed(self.names, mask, self.subject))

    def walk(self, lo: int, hi: int) -> Dict[FrozenSet[str], None]:
        found: Dict[FrozenSet[str], None] = {}
        mask = _gray(lo)
        engine = self._fresh(mask)
        self._record(engine, found)
        for i in range(lo + 1, hi):
            nxt = _gray(i)
            flipped = mask ^ nxt
            bit = flipped.bit_length() - 1
            if nxt & flipped:
                # 加入类：单调，已派生或已冲突时闭包不变
                name = self.names[bit]
                if not engine.is_inconsistent(None) and name not in engine.classes_of(AUX):
                    engine.add([Inst(AUX, name)])
                    self.saturations += 1
            else:
                engine = self._fresh(nxt)
            mask = nxt
            self._record(engine, found)
        return found

    @staticmethod
    def _record(engine: SaturationEngine, found: Dict[FrozenSet[str], None]) -> None:
        if not engine.is_inconsistent(None):
            found.setdefault(engine.classes_of(AUX), None)


def _base_engine(nkb: NormalizedKB) -> SaturationEngine:
    return SaturationEngine(nkb).open_context(None)


def enumerate_gray(nkb: NormalizedKB, subject: str, budget: int = DEFAULT_BUDGET,
                   threads: Optional[int] = None) -> Tuple[CandidateType, ...]:
    """Gray码增量枚举，按块并行。"""
    total = check_budget(nkb, subject, budget)
    names = free_class_names(nkb, subject)
    base = _base_engine(nkb)
    if base.is_inconsistent(None):
        return ()

    workers = resolve_threads(threads)
    if total < PARALLEL_MIN_SUBSETS:
        workers = 1
    chunks = workers * 4 if workers > 1 else 1
    step = -(-total // chunks)
    bounds = [(lo, min(lo + step, total)) for lo in range(0, total, step)]

    def run(bound: Tuple[int, int]) -> Dict[FrozenSet[str], None]:
        return _ChunkWalker(base, names, subject).walk(*bound)

    if workers == 1:
        parts = [run(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))

    closures: Dict[FrozenSet[str], None] = {}
    for part in parts:
        for closure in part:
            closures.setdefault(closure, None)
    result = tuple(sorted((make_candidate(c, nkb) for c in closures), key=CandidateType.sort_key))
    logger.debug(f"Gray枚举: {total} 个子集, {len(bounds)} 个块, {len(result)} 个去重候选")
    return result


def enumerate_naive(nkb: NormalizedKB, subject: str, budget: int = DEFAULT_BUDGET,
                    threads: Optional[int] = None) -> Tuple[CandidateType, ...]:
    """每个子集独立饱和。"""
    total = check_budget(nkb, subject, budget)
    names = free_class_names(nkb, subject)
    base = _base_engine(nkb)
    seen: Set[FrozenSet[str]] = set()
    for mask in range(total):
        engine = base.copy().add(_seed(names, mask, subject))
        if not engine.is_inconsistent(None):
            seen.add(engine.classes_of(AUX))
    return tuple(sorted((make_candidate(c, nkb) for c in seen), key=CandidateType.sort_key))


ENUMERATION_ALGORITHMS = {
    "gray_incremental": enumerate_gray,
    "naive": enumerate_naive,
}


def enumerate_candidates(nkb: NormalizedKB, subject: str, budget: int = DEFAULT_BUDGET,
                         threads: Optional[int] = None,
                         algorithm: str = "gray_incremental") -> Tuple[CandidateType, ...]:
    """全部去重后的一致候选类型，规范排序。"""
    if algorithm not in ENUMERATION_ALGORITHMS:
        raise ConfigurationError(f"未知的枚举算法: {algorithm}")
    return ENUMERATION_ALGORITHMS[algorithm](nkb, subject, budget, threads)
