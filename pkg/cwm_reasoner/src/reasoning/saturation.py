"""
EL⊥物化演算的半朴素饱和引擎

规则 R0-R7 在按上下文标记的原子上运行：
- ctx=None 为实例推理（ABox个体、原型常量 #aux）；
- ctx=Q 为子类推理，探针项 #sc(Q) 是 Q 的实例，InstSc(A, B, Q) 即 Inst(#sc(A), B, ctx=Q)。
每个出现过的上下文都包含全部ABox事实。引擎可增量扩展（add）与分叉（copy）。
"""

import logging
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import DefaultDict, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from ..kb.model import TOP_NAME
from .normalizer import (
    ConceptFact, NominalClass, NormalizedKB, RoleFact, SubAtomic, SubBot,
    SubConj, SubExists, SupExists,
)

logger = logging.getLogger(__name__)

AUX = "#aux"


def witness_term(sub: str, role: str, filler: str) -> str:
    return f"#w({sub},{role},{filler})"


def probe_term(cls: str) -> str:
    return f"#sc({cls})"


@dataclass(frozen=True)
class Inst:
    """inst(term, cls)，ctx 为子类推理上下文"""
    term: str
    cls: str
    ctx: Optional[str] = None


@dataclass(frozen=True)
class Triple:
    """triple(subj, role, obj)"""
    subj: str
    role: str
    obj: str
    ctx: Optional[str] = None


@dataclass(frozen=True)
class Clash:
    """R6：term 属于某个不可满足的类"""
    term: str
    ctx: Optional[str] = None


Atom = Union[Inst, Triple, Clash]


def inst_sc(sub: str, cls: str, ctx: str) -> Inst:
    """inst_sc(sub, cls, ctx)：上下文 ctx 中探针 #sc(sub) 属于 cls。"""
    return Inst(probe_term(sub), cls, ctx)


@dataclass(frozen=True)
class Saturation:
    """饱和结果：派生原子集合与发生冲突的上下文。"""
    derived: FrozenSet[Atom]
    inconsistent_contexts: FrozenSet[Optional[str]]

    def holds(self, atom: Atom) -> bool:
        return atom in self.derived

    def is_inconsistent(self, ctx: Optional[str] = None) -> bool:
        return ctx in self.inconsistent_contexts

    def classes_of(self, term: str, ctx: Optional[str] = None) -> FrozenSet[str]:
        return frozenset(a.cls for a in self.derived
                         if isinstance(a, Inst) and a.term == term and a.ctx == ctx)


class _RuleIndex:
    """范式公理按规则体建立的索引（只读，可被多个引擎共享）。"""

    def __init__(self, nkb: NormalizedKB):
        self.sub_atomic: DefaultDict[str, List[str]] = defaultdict(list)
        self.conj: DefaultDict[str, List[Tuple[str, str]]] = defaultdict(list)
        self.exists_by_filler: DefaultDict[str, List[Tuple[str, str]]] = defaultdict(list)
        self.exists_by_role: DefaultDict[str, List[Tuple[str, str]]] = defaultdict(list)
        self.sup_exists: DefaultDict[str, List[Tuple[str, str]]] = defaultdict(list)
        self.bot: Set[str] = set()
        self.nominal_of: Dict[str, str] = {}

        for axiom in nkb.axioms:
            if isinstance(axiom, SubAtomic):
                self.sub_atomic[axiom.sub].append(axiom.sup)
            elif isinstance(axiom, SubConj):
                self.conj[axiom.left].append((axiom.right, axiom.sup))
                if axiom.right != axiom.left:
                    self.conj[axiom.right].append((axiom.left, axiom.sup))
            elif isinstance(axiom, SubExists):
                self.exists_by_filler[axiom.filler].append((axiom.role, axiom.sup))
                self.exists_by_role[axiom.role].append((axiom.filler, axiom.sup))
            elif isinstance(axiom, SupExists):
                self.sup_exists[axiom.sub].append(
                    (axiom.role, witness_term(axiom.sub, axiom.role, axiom.filler)))
            elif isinstance(axiom, SubBot):
                self.bot.add(axiom.sub)
            elif isinstance(axiom, NominalClass):
                self.nominal_of[axiom.cls] = axiom.individual

        self.witness_class: Dict[str, str] = {}
        for axiom in nkb.axioms:
            if isinstance(axiom, SupExists):
                self.witness_class[witness_term(axiom.sub, axiom.role, axiom.filler)] = axiom.filler

        self.abox = nkb.abox
        self.individuals = nkb.individuals
        self.nominal_axioms = [(ind, cls) for cls, ind in self.nominal_of.items()]


class SaturationEngine:
    """
    半朴素饱和引擎

    议程中的每个原子只被处理一次：处理时先写入索引，再与索引中已处理的原子做连接。
    二元规则体由两者中后处理的一方触发，因此结果与处理顺序无关。
    """

    def __init__(self, nkb: NormalizedKB, rng: Optional[random.Random] = None,
                 index: Optional[_RuleIndex] = None):
        self.nkb = nkb
        self.rng = rng
        self.index = index or _RuleIndex(nkb)
        self.derived: Set[Atom] = set()
        self.agenda: List[Atom] = []
        self.contexts: Set[Optional[str]] = set()
        self.clashes: Set[Optional[str]] = set()
        self.terms: Set[Tuple[Optional[str], str]] = set()
        self.classes: DefaultDict[Tuple[Optional[str], str], Set[str]] = defaultdict(set)
        self.succ: DefaultDict[Tuple[Optional[str], str], Set[Tuple[str, str]]] = defaultdict(set)
        self.pred: DefaultDict[Tuple[Optional[str], str], Set[Tuple[str, str]]] = defaultdict(set)
        self.same: DefaultDict[Tuple[Optional[str], str], Set[str]] = defaultdict(set)
        self.rounds = 0

    # ------------------------------------------------------------------
    # 公共接口
    # ------------------------------------------------------------------
    def copy(self) -> "SaturationEngine":
        """分叉当前（已到达不动点的）状态。"""
        other = SaturationEngine(self.nkb, rng=self.rng, index=self.index)
        other.derived = set(self.derived)
        other.agenda = list(self.agenda)
        other.contexts = set(self.contexts)
        other.clashes = set(self.clashes)
        other.terms = set(self.terms)
        other.classes = defaultdict(set, {k: set(v) for k, v in self.classes.items()})
        other.succ = defaultdict(set, {k: set(v) for k, v in self.succ.items()})
        other.pred = defaultdict(set, {k: set(v) for k, v in self.pred.items()})
        other.same = defaultdict(set, {k: set(v) for k, v in self.same.items()})
        return other

    def add(self, atoms: Iterable[Atom]) -> "SaturationEngine":
        """加入种子原子并推进到不动点。"""
        for atom in atoms:
            self._emit(atom)
        self._run()
        return self

    def open_context(self, ctx: Optional[str]) -> "SaturationEngine":
        """确保上下文存在（R0/R1/R7 的ABox部分）。"""
        self._ensure_context(ctx)
        self._run()
        return self

    def is_inconsistent(self, ctx: Optional[str] = None) -> bool:
        return ctx in self.clashes

    def classes_of(self, term: str, ctx: Optional[str] = None) -> FrozenSet[str]:
        return frozenset(self.classes.get((ctx, term), ()))

    def holds(self, atom: Atom) -> bool:
        return atom in self.derived

    def snapshot(self) -> Saturation:
        return Saturation(frozenset(self.derived), frozenset(self.clashes))

    # ------------------------------------------------------------------
    # 议程
    # ------------------------------------------------------------------
    def _emit(self, atom: Atom) -> None:
        if atom in self.derived:
            return
        self._ensure_context(atom.ctx)
        self.derived.add(atom)
        self.agenda.append(atom)

    def _ensure_context(self, ctx: Optional[str]) -> None:
        if ctx in self.contexts:
            return
        self.contexts.add(ctx)
        # R0 个体属于论域；R1 ABox；R7 名词类包含其个体
        for ind in self.index.individuals:
            self._emit(Inst(ind, TOP_NAME, ctx))
        for fact in self.index.abox:
            if isinstance(fact, ConceptFact):
                self._emit(Inst(fact.individual, fact.cls, ctx))
            elif isinstance(fact, RoleFact):
                self._emit(Triple(fact.subject, fact.role, fact.object, ctx))
        for ind, cls in self.index.nominal_axioms:
            self._emit(Inst(ind, cls, ctx))

    def _pop(self) -> Atom:
        if self.rng is None:
            return self.agenda.pop()
        i = self.rng.randrange(len(self.agenda))
        self.agenda[i], self.agenda[-1] = self.agenda[-1], self.agenda[i]
        return self.agenda.pop()

    def _run(self) -> None:
        while self.agenda:
            atom = self._pop()
            self.rounds += 1
            if isinstance(atom, Inst):
                self._process_inst(atom)
            elif isinstance(atom, Triple):
                self._process_triple(atom)
            else:
                self.clashes.add(atom.ctx)

    def _touch(self, ctx: Optional[str], term: str) -> None:
        if (ctx, term) not in self.terms:
            self.terms.add((ctx, term))
            self._emit(Inst(term, TOP_NAME, ctx))

    # ------------------------------------------------------------------
    # 规则
    # ------------------------------------------------------------------
    def _process_inst(self, atom: Inst) -> None:
        ctx, x, a = atom.ctx, atom.term, atom.cls
        self._touch(ctx, x)
        known = self.classes[(ctx, x)]
        known.add(a)
        idx = self.index

        # R2
        for b in idx.sub_atomic.get(a, ()):
            self._emit(Inst(x, b, ctx))
        # R3
        for other, b in idx.conj.get(a, ()):
            if other in known:
                self._emit(Inst(x, b, ctx))
        # R4：a 作为存在限定的填充类
        for role, b in idx.exists_by_filler.get(a, ()):
            for r, z in self.pred.get((ctx, x), ()):
                if r == role:
                    self._emit(Inst(z, b, ctx))
        # R5
        for role, w in idx.sup_exists.get(a, ()):
            self._emit(Triple(x, role, w, ctx))
            self._emit(Inst(w, idx.witness_class[w], ctx))
        # R6
        if a in idx.bot:
            self._emit(Clash(x, ctx))
        # R7：x ∈ {ind} 时 x 与 ind 等同
        ind = idx.nominal_of.get(a)
        if ind is not None and ind != x:
            self._merge(ctx, x, ind)
        for partner in self.same.get((ctx, x), ()):
            self._emit(Inst(partner, a, ctx))

    def _process_triple(self, atom: Triple) -> None:
        ctx, x, role, y = atom.ctx, atom.subj, atom.role, atom.obj
        self._touch(ctx, x)
        self._touch(ctx, y)
        self.succ[(ctx, x)].add((role, y))
        self.pred[(ctx, y)].add((role, x))

        # R4：边到达时检查目标的类
        targets = self.classes.get((ctx, y), ())
        for filler, b in self.index.exists_by_role.get(role, ()):
            if filler in targets:
                self._emit(Inst(x, b, ctx))
        # R7：等同项之间镜像边
        for partner in self.same.get((ctx, y), ()):
            self._emit(Triple(x, role, partner, ctx))
        for partner in self.same.get((ctx, x), ()):
            self._emit(Triple(partner, role, y, ctx))

    def _merge(self, ctx: Optional[str], x: str, ind: str) -> None:
        if ind in self.same[(ctx, x)]:
            return
        self.same[(ctx, x)].add(ind)
        self.same[(ctx, ind)].add(x)
        for left, right in ((x, ind), (ind, x)):
            for cls in list(self.classes.get((ctx, left), ())):
                self._emit(Inst(right, cls, ctx))
            for role, y in list(self.succ.get((ctx, left), ())):
                self._emit(Triple(right, role, y, ctx))
            for role, z in list(self.pred.get((ctx, left), ())):
                self._emit(Triple(z, role, right, ctx))


# =============================================================================
# 函数式接口
# =============================================================================

def saturate(nkb: NormalizedKB, seed: Iterable[Atom] = (), rng: Optional[random.Random] = None) -> Saturation:
    """对 facts(nkb) ∪ seed 求最小不动点。"""
    engine = SaturationEngine(nkb, rng=rng)
    engine.open_context(None)
    engine.add(seed)
    logger.debug(f"饱和完成: {len(engine.derived)} 个原子, {engine.rounds} 次处理")
    return engine.snapshot()


def subsumption_engine(nkb: NormalizedKB, names: Iterable[str]) -> SaturationEngine:
    """为每个类名打开子类推理上下文（共享一次饱和）。"""
    engine = SaturationEngine(nkb)
    engine.add(inst_sc(name, name, name) for name in names)
    return engine


def subsumes_in(engine: SaturationEngine, sub: str, sup: str) -> bool:
    if engine.is_inconsistent(sub):
        return True
    return engine.holds(inst_sc(sub, sup, sub))


def strict_subsumes(nkb: NormalizedKB, sub: str, sup: str) -> bool:
    """sub ⊑ sup 是否成立（sub 不可满足时平凡成立）。"""
    if sub == sup or sup == TOP_NAME:
        return True
    return subsumes_in(subsumption_engine(nkb, [sub]), sub, sup)


def is_consistent(nkb: NormalizedKB) -> bool:
    """实例上下文中没有冲突即一致。"""
    engine = SaturationEngine(nkb)
    engine.open_context(None)
    return not engine.is_inconsistent(None)


@dataclass(frozen=True)
class Classification:
    """类名之间的全部原子包含关系。"""
    subsumptions: Tuple[Tuple[str, str], ...]
    unsatisfiable: Tuple[str, ...]


def classify(nkb: NormalizedKB, names: Optional[Iterable[str]] = None) -> Classification:
    """一次饱和计算所有类名之间的严格包含（不含自反对与 Top）。"""
    names = sorted(names if names is not None else nkb.class_names)
    engine = subsumption_engine(nkb, names)
    unsat = tuple(n for n in names if engine.is_inconsistent(n))
    pairs = []
    for sub in names:
        if sub in unsat:
            continue
        derived = engine.classes_of(probe_term(sub), sub)
        for sup in names:
            if sup != sub and sup in derived:
                pairs.append((sub, sup))
    logger.debug(f"分类完成: {len(pairs)} 条包含, {len(unsat)} 个不可满足类")
    return Classification(tuple(pairs), unsat)
