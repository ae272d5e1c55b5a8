"""
cw^m-蕴涵判定

典型性查询 T(C) ⊑ D：范式化知识库与查询得到 (C_q, D_q)，枚举候选类型。
C_q 是区分概念 C_i 时取 <_{C_i} 极小元（W_i 最大），否则取全局偏好极小元；
D_q 属于全部极小元时蕴涵成立；没有一致候选时空真成立。
严格查询 C ⊑ D 直接通过子类推理回答。
"""

import time
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from ..core.base_logger import handle_reasoner_errors, log_operation
from ..core.exceptions import KbValidationError
from ..core.interfaces import BaseDecisionProcedure
from ..kb.model import KnowledgeBase, Query, validate_kb, validate_query
from .candidates import DEFAULT_BUDGET, enumerate_gray, enumerate_naive
from .normalizer import NormalizedKB, normalize_kb, normalize_query
from .preference import CandidateType, concept_minimal_candidates, minimal_candidates
from .saturation import subsumes_in, subsumption_engine
from .specificity import SpecificityRelation, compute_specificity


@dataclass(frozen=True)
class EntailmentVerdict:
    """判定结果：vacuous 蕴含 entailed；非空真时 preferred 非空。"""
    entailed: bool
    vacuous: bool
    preferred: Tuple[CandidateType, ...] = ()
    candidate_count: int = 0
    elapsed: float = 0.0
    subject: str = ""
    object: str = ""
    strict: bool = False
    nkb: Optional[NormalizedKB] = field(default=None, compare=False, repr=False)
    specificity: Optional[SpecificityRelation] = field(default=None, compare=False, repr=False)


class EntailmentEngine(BaseDecisionProcedure):
    """主判定引擎：按名称选择候选枚举算法，记录统计信息。"""

    def __init__(self, algorithm: str = "gray_incremental", minima: str = "numpy_block",
                 candidate_budget: int = DEFAULT_BUDGET, threads: Optional[int] = None,
                 block_size: int = 256, **kwargs: Any) -> None:
        super().__init__(algorithm=algorithm, **kwargs)
        self.minima = minima
        self.candidate_budget = candidate_budget
        self.threads = threads
        self.block_size = block_size
        self.stats: Dict[str, Any] = {}

    def _register_algorithms(self) -> None:
        self._register_algorithm("gray_incremental", enumerate_gray)
        self._register_algorithm("naive", enumerate_naive)

    @staticmethod
    def _validate(kb: KnowledgeBase, query: Query) -> None:
        diagnostics = validate_kb(kb) + validate_query(kb, query)
        if diagnostics:
            raise KbValidationError(diagnostics)

    @log_operation("蕴涵判定")
    @handle_reasoner_errors("蕴涵判定")
    def decide(self, kb: KnowledgeBase, query: Query) -> EntailmentVerdict:
        start = time.perf_counter()
        self._validate(kb, query)
        nkb, subject, obj = normalize_query(normalize_kb(kb), query)

        if not query.typicality:
            verdict = self._decide_strict(nkb, subject, obj, start)
        else:
            verdict = self._decide_typical(nkb, subject, obj, start)

        self.stats = {
            "algorithm": self.algorithm if query.typicality else "strict",
            "candidates": verdict.candidate_count,
            "preferred": len(verdict.preferred),
            "elapsed": f"{verdict.elapsed:.4f}s",
        }
        self._log_stats("EntailmentEngine", self.stats)
        return verdict

    def _decide_strict(self, nkb: NormalizedKB, subject: str, obj: str, start: float) -> EntailmentVerdict:
        engine = subsumption_engine(nkb, [subject])
        vacuous = engine.is_inconsistent(subject)
        return EntailmentVerdict(
            entailed=subsumes_in(engine, subject, obj),
            vacuous=vacuous,
            elapsed=time.perf_counter() - start,
            subject=subject,
            object=obj,
            strict=True,
            nkb=nkb,
        )

    def _decide_typical(self, nkb: NormalizedKB, subject: str, obj: str, start: float) -> EntailmentVerdict:
        cands = self._execute_algorithm(self.algorithm, nkb, subject, self.candidate_budget, self.threads)
        spec = compute_specificity(nkb)
        if not cands:
            return EntailmentVerdict(
                entailed=True, vacuous=True, elapsed=time.perf_counter() - start,
                subject=subject, object=obj, nkb=nkb, specificity=spec,
            )
        if subject in nkb.distinguished:
            preferred = concept_minimal_candidates(cands, subject)
        else:
            preferred = minimal_candidates(cands, spec, algorithm=self.minima, block_size=self.block_size)
        return EntailmentVerdict(
            entailed=all(obj in t.concepts for t in preferred),
            vacuous=False,
            preferred=preferred,
            candidate_count=len(cands),
            elapsed=time.perf_counter() - start,
            subject=subject,
            object=obj,
            nkb=nkb,
            specificity=spec,
        )


def decide_entailment(kb: KnowledgeBase, query: Query, **options: Any) -> EntailmentVerdict:
    """以默认（或给定）配置判定一次查询。"""
    return EntailmentEngine(**options).decide(kb, query)
