"""
暴力判定器

与主引擎只共享解析/模型层和范式化器（使用右优先分解）。
推理采用朴素的全规则轮询直到无新事实；权重、全局偏好和极小元均按定义逐字实现。
仅用于小规模输入（范式化后类名不超过上限）。
"""

import itertools
import time
from typing import Any, Dict, FrozenSet, List, Optional, Set, Tuple

from ..core.base_logger import handle_reasoner_errors, log_operation
from ..core.exceptions import KbValidationError, OracleCapExceeded, WeightOverflowError
from ..core.interfaces import BaseDecisionProcedure
from ..kb.model import TOP_NAME, WEIGHT_MAX, WEIGHT_MIN, KnowledgeBase, Query, validate_kb, validate_query
from .entailment import EntailmentVerdict
from .normalizer import (
    ConceptFact, NominalClass, NormalizedKB, RoleFact, SubAtomic, SubBot, SubConj,
    SubExists, SupExists, normalize_kb, normalize_query,
)
from .preference import CandidateType, ExtendedWeight, WeightVector

ORACLE_MAX_CLASS_NAMES = 12

PROBE = "probe!"
PROTOTYPE = "aux!"
NEG_INF = float("-inf")


def _naive_closure(nkb: NormalizedKB, facts: Set[Tuple]) -> Tuple[Set[Tuple], bool]:
    """
    反复完整应用全部规则直至不再产生新事实。
    事实为 ("i", 项, 类) 或 ("t", 项, 角色, 项)；返回闭包与是否出现冲突。
    """
    facts = set(facts)
    for fact in nkb.abox:
        if isinstance(fact, ConceptFact):
            facts.add(("i", fact.individual, fact.cls))
        elif isinstance(fact, RoleFact):
            facts.add(("t", fact.subject, fact.role, fact.object))
    for ind in nkb.individuals:
        facts.add(("i", ind, TOP_NAME))
    nominal_owner = {}
    for axiom in nkb.axioms:
        if isinstance(axiom, NominalClass):
            facts.add(("i", axiom.individual, axiom.cls))
            nominal_owner[axiom.cls] = axiom.individual

    clash = False
    while True:
        new: Set[Tuple] = set()
        terms = {f[1] for f in facts} | {f[3] for f in facts if f[0] == "t"}
        inst = {(f[1], f[2]) for f in facts if f[0] == "i"}
        triples = [f[1:] for f in facts if f[0] == "t"]
        for t in terms:
            new.add(("i", t, TOP_NAME))
        for axiom in nkb.axioms:
            if isinstance(axiom, SubAtomic):
                new |= {("i", x, axiom.sup) for x, c in inst if c == axiom.sub}
            elif isinstance(axiom, SubConj):
                new |= {("i", x, axiom.sup) for x, c in inst
                        if c == axiom.left and (x, axiom.right) in inst}
            elif isinstance(axiom, SubExists):
                new |= {("i", x, axiom.sup) for x, r, y in triples
                        if r == axiom.role and (y, axiom.filler) in inst}
            elif isinstance(axiom, SupExists):
                w = f"w!{axiom.sub}!{axiom.role}!{axiom.filler}"
                for x, c in inst:
                    if c == axiom.sub:
                        new.add(("t", x, axiom.role, w))
                        new.add(("i", w, axiom.filler))
            elif isinstance(axiom, SubBot):
                if any(c == axiom.sub for _, c in inst):
                    clash = True
        # 名词：属于 {a} 的项与 a 相同
        for x, c in inst:
            owner = nominal_owner.get(c)
            if owner is None or owner == x:
                continue
            for y, d in inst:
                if y == owner:
                    new.add(("i", x, d))
                elif y == x:
                    new.add(("i", owner, d))
            for s, r, o in triples:
                if o == x:
                    new.add(("t", s, r, owner))
                if o == owner:
                    new.add(("t", s, r, x))
                if s == x:
                    new.add(("t", owner, r, o))
                if s == owner:
                    new.add(("t", x, r, o))
        if new <= facts:
            return facts, clash
        facts |= new


def _classes(facts: Set[Tuple], term: str) -> FrozenSet[str]:
    return frozenset(f[2] for f in facts if f[0] == "i" and f[1] == term)


def _weight(concepts: FrozenSet[str], concept: str, nkb: NormalizedKB):
    if concept not in concepts:
        return NEG_INF
    total = 0
    for head, w in nkb.typicality.get(concept, ()):
        if head in concepts:
            total += w
    if total > WEIGHT_MAX or total < WEIGHT_MIN:
        raise WeightOverflowError(f"权重求和 {total} 超出64位有符号整数范围")
    return total


def _globally_better(x: Dict[str, Any], y: Dict[str, Any], spec: Set[Tuple[str, str]]) -> bool:
    concepts = list(x)
    condition_i = any(x[c] > y[c] for c in concepts)
    condition_ii = all(
        not (y[j] > x[j]) or any((h, j) in spec and x[h] > y[h] for h in concepts)
        for j in concepts
    )
    return condition_i and condition_ii


class OracleDecisionProcedure(BaseDecisionProcedure):
    """暴力判定器：穷举子集、朴素不动点、两两全扫描。"""

    def __init__(self, max_class_names: int = ORACLE_MAX_CLASS_NAMES, **kwargs: Any) -> None:
        super().__init__(algorithm="exhaustive", **kwargs)
        self.max_class_names = max_class_names

    def _register_algorithms(self) -> None:
        self._register_algorithm("exhaustive", self._exhaustive)

    @log_operation("暴力判定")
    @handle_reasoner_errors("暴力判定")
    def decide(self, kb: KnowledgeBase, query: Query) -> EntailmentVerdict:
        diagnostics = validate_kb(kb) + validate_query(kb, query)
        if diagnostics:
            raise KbValidationError(diagnostics)
        nkb, subject, obj = normalize_query(normalize_kb(kb, decomposition="right"), query,
                                            decomposition="right")
        names = sorted(set(nkb.class_names) - {TOP_NAME})
        if len(names) > self.max_class_names:
            raise OracleCapExceeded(f"类名数量 {len(names)} 超过暴力判定上限 {self.max_class_names}")
        return self._execute_algorithm(self.algorithm, nkb, subject, obj, names, query.typicality)

    def _subsumes(self, nkb: NormalizedKB, sub: str, sup: str) -> Tuple[bool, bool]:
        facts, clash = _naive_closure(nkb, {("i", PROBE, sub)})
        return clash or sup in _classes(facts, PROBE), clash

    def _exhaustive(self, nkb: NormalizedKB, subject: str, obj: str, names: List[str],
                    typicality: bool) -> EntailmentVerdict:
        start = time.perf_counter()
        if not typicality:
            entailed, clash = self._subsumes(nkb, subject, obj)
            return EntailmentVerdict(entailed=entailed, vacuous=clash, elapsed=time.perf_counter() - start,
                                     subject=subject, object=obj, strict=True, nkb=nkb)

        spec = set()
        for h in nkb.distinguished:
            for j in nkb.distinguished:
                if h != j and self._subsumes(nkb, h, j)[0] and not self._subsumes(nkb, j, h)[0]:
                    spec.add((h, j))

        others = [n for n in names if n != subject]
        closures: Dict[FrozenSet[str], None] = {}
        for size in range(len(others) + 1):
            for chosen in itertools.combinations(others, size):
                seed = {("i", PROTOTYPE, subject)} | {("i", PROTOTYPE, c) for c in chosen}
                facts, clash = _naive_closure(nkb, seed)
                if not clash:
                    closures.setdefault(_classes(facts, PROTOTYPE), None)

        if not closures:
            return EntailmentVerdict(entailed=True, vacuous=True, elapsed=time.perf_counter() - start,
                                     subject=subject, object=obj, nkb=nkb)

        typed = [(c, {d: _weight(c, d, nkb) for d in nkb.distinguished}) for c in closures]
        if subject in nkb.distinguished:
            # T(C_i)：W_i 不被任何候选严格超过
            minima = [
                (c, w) for c, w in typed
                if not any(w2[subject] > w[subject] for _, w2 in typed)
            ]
        else:
            minima = [
                (c, w) for c, w in typed
                if not any(_globally_better(w2, w, spec) for _, w2 in typed)
            ]
        preferred = tuple(sorted(
            (CandidateType(c, WeightVector(tuple(
                (d, ExtendedWeight(None if w[d] == NEG_INF else w[d])) for d in nkb.distinguished
            ))) for c, w in minima),
            key=CandidateType.sort_key,
        ))
        return EntailmentVerdict(
            entailed=all(obj in c for c, _ in minima),
            vacuous=False,
            preferred=preferred,
            candidate_count=len(typed),
            elapsed=time.perf_counter() - start,
            subject=subject,
            object=obj,
            nkb=nkb,
        )


def oracle_decide(kb: KnowledgeBase, query: Query, max_class_names: Optional[int] = None) -> EntailmentVerdict:
    """暴力判定一次查询。"""
    cap = max_class_names if max_class_names is not None else ORACLE_MAX_CLASS_NAMES
    return OracleDecisionProcedure(max_class_names=cap).decide(kb, query)
