"""
EL⊥范式化

把知识库与查询改写为扩展签名上的范式公理：
- SubAtomic(A, B)        A ⊑ B
- SubConj(A1, A2, B)     A1 ⊓ A2 ⊑ B
- SubExists(r, A, B)     ∃r.A ⊑ B
- SupExists(A, r, B)     A ⊑ ∃r.B
- SubBot(A)              A ⊑ ⊥
- NominalClass(a, A)     {a} ≡ A
操作数均为概念名或 Top。严格公理单向分解；典型性头部与查询概念使用双向定义的新名字。
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple, Union

from ..core.exceptions import NormalizationError
from ..kb.model import (
    TOP_NAME, Atomic, Bot, ConceptAssertion, ConceptExpr, Conj, Exists,
    KnowledgeBase, Nominal, Query, RoleAssertion, StrictAxiom, Top,
    count_connectives, iter_subconcepts, signature_of,
)

logger = logging.getLogger(__name__)

FRESH_PREFIX = "_N"
MAX_FRESH = 2 ** 31


@dataclass(frozen=True)
class SubAtomic:
    sub: str
    sup: str


@dataclass(frozen=True)
class SubConj:
    left: str
    right: str
    sup: str


@dataclass(frozen=True)
class SubExists:
    role: str
    filler: str
    sup: str


@dataclass(frozen=True)
class SupExists:
    sub: str
    role: str
    filler: str


@dataclass(frozen=True)
class SubBot:
    sub: str


@dataclass(frozen=True)
class NominalClass:
    individual: str
    cls: str


NormalAxiom = Union[SubAtomic, SubConj, SubExists, SupExists, SubBot, NominalClass]


@dataclass(frozen=True)
class ConceptFact:
    """原子概念断言 A(a)"""
    cls: str
    individual: str


@dataclass(frozen=True)
class RoleFact:
    """角色断言 r(a, b)"""
    role: str
    subject: str
    object: str


AtomicAssertion = Union[ConceptFact, RoleFact]


@dataclass(frozen=True)
class NormalizedKB:
    """范式知识库：范式公理、原子化的典型性包含、原子ABox与新名字登记表。"""
    axioms: Tuple[NormalAxiom, ...] = ()
    typicality: Dict[str, Tuple[Tuple[str, int], ...]] = field(default_factory=dict)
    abox: Tuple[AtomicAssertion, ...] = ()
    fresh_registry: Dict[str, ConceptExpr] = field(default_factory=dict)
    distinguished: Tuple[str, ...] = ()
    class_names: Tuple[str, ...] = ()
    roles: Tuple[str, ...] = ()
    individuals: Tuple[str, ...] = ()
    nominals: Dict[str, str] = field(default_factory=dict)
    next_fresh: int = 1


def _is_bottom(c: ConceptExpr) -> bool:
    """概念在任何解释下都为空（含 ⊥ 的合取或存在限定）。"""
    if isinstance(c, Bot):
        return True
    if isinstance(c, Conj):
        return _is_bottom(c.left) or _is_bottom(c.right)
    if isinstance(c, Exists):
        return _is_bottom(c.filler)
    return False


class Normalizer:
    """
    范式化器

    每次调用持有自己的新名字计数器；decomposition 决定合取操作数的处理顺序
    （"left" 先左后右，"right" 先右后左），两种顺序得到等价的范式。
    """

    def __init__(self, reserved_names, start: int = 1, decomposition: str = "left",
                 nominals: Optional[Dict[str, str]] = None,
                 registry: Optional[Dict[str, ConceptExpr]] = None):
        if decomposition not in ("left", "right"):
            raise NormalizationError(f"未知的分解顺序: {decomposition}")
        self.reserved = set(reserved_names)
        self.counter = start
        self.decomposition = decomposition
        self.axioms: List[NormalAxiom] = []
        self.registry: Dict[str, ConceptExpr] = dict(registry or {})
        self.nominals: Dict[str, str] = dict(nominals or {})

    # ------------------------------------------------------------------
    # 新名字
    # ------------------------------------------------------------------
    def fresh(self, origin: ConceptExpr) -> str:
        while True:
            if self.counter >= MAX_FRESH:
                raise NormalizationError(f"新名字计数器溢出（上限 {MAX_FRESH}）")
            name = f"{FRESH_PREFIX}{self.counter}"
            self.counter += 1
            if name not in self.reserved and name not in self.registry:
                self.registry[name] = origin
                return name

    def nominal_class(self, individual: str) -> str:
        if individual not in self.nominals:
            name = self.fresh(Nominal(individual))
            self.nominals[individual] = name
            self.axioms.append(NominalClass(individual, name))
        return self.nominals[individual]

    def _ordered(self, c: Conj) -> Tuple[ConceptExpr, ConceptExpr]:
        return (c.left, c.right) if self.decomposition == "left" else (c.right, c.left)

    # ------------------------------------------------------------------
    # 左侧：返回代表 c 的原子名 X，使 c ⊑ X 成立
    # ------------------------------------------------------------------
    def left_atom(self, c: ConceptExpr) -> str:
        if isinstance(c, Top):
            return TOP_NAME
        if isinstance(c, Atomic):
            return c.name
        if isinstance(c, Nominal):
            return self.nominal_class(c.individual)
        x = self.fresh(c)
        self.left_into(c, x)
        return x

    def left_into(self, c: ConceptExpr, b: str) -> None:
        """生成 c ⊑ b 的范式公理（c 不含 ⊥）。"""
        if isinstance(c, (Top, Atomic, Nominal)):
            self.axioms.append(SubAtomic(self.left_atom(c), b))
        elif isinstance(c, Conj):
            first, second = self._ordered(c)
            a1 = self.left_atom(first)
            a2 = self.left_atom(second)
            if self.decomposition == "right":
                a1, a2 = a2, a1
            self.axioms.append(SubConj(a1, a2, b))
        elif isinstance(c, Exists):
            self.axioms.append(SubExists(c.role, self.left_atom(c.filler), b))
        else:
            raise NormalizationError(f"左侧出现无法处理的概念: {c!r}")

    # ------------------------------------------------------------------
    # 右侧：返回原子名 X，使 X ⊑ c 成立
    # ------------------------------------------------------------------
    def right_atom(self, c: ConceptExpr) -> str:
        if isinstance(c, Top):
            return TOP_NAME
        if isinstance(c, Atomic):
            return c.name
        if isinstance(c, Nominal):
            return self.nominal_class(c.individual)
        x = self.fresh(c)
        self.right_from(x, c)
        return x

    def right_from(self, a: str, c: ConceptExpr) -> None:
        """生成 a ⊑ c 的范式公理。"""
        if isinstance(c, Top):
            return
        if isinstance(c, Bot):
            self.axioms.append(SubBot(a))
        elif isinstance(c, (Atomic, Nominal)):
            self.axioms.append(SubAtomic(a, self.right_atom(c)))
        elif isinstance(c, Conj):
            for part in self._ordered(c):
                self.right_from(a, part)
        elif isinstance(c, Exists):
            self.axioms.append(SupExists(a, c.role, self.right_atom(c.filler)))
        else:
            raise NormalizationError(f"右侧出现无法处理的概念: {c!r}")

    # ------------------------------------------------------------------
    # 公理与定义
    # ------------------------------------------------------------------
    def gci(self, lhs: ConceptExpr, rhs: ConceptExpr) -> None:
        """范式化一条严格包含 lhs ⊑ rhs（单向分解）。"""
        if _is_bottom(lhs) or isinstance(rhs, Top):
            return
        if isinstance(rhs, (Atomic, Nominal)):
            self.left_into(lhs, self.right_atom(rhs))
            return
        # rhs 为 ⊥、合取或 ∃r.C：左侧需要原子名
        self.right_from(self.left_atom(lhs), rhs)

    def define(self, c: ConceptExpr) -> str:
        """为概念取一个双向定义的名字 X ≡ c（原子概念与 Top 直接返回）。"""
        if isinstance(c, Top):
            return TOP_NAME
        if isinstance(c, Atomic):
            return c.name
        if isinstance(c, Nominal):
            return self.nominal_class(c.individual)
        x = self.fresh(c)
        self.right_from(x, c)
        if not _is_bottom(c):
            self.left_into(c, x)
        return x


def normalize_kb(kb: KnowledgeBase, decomposition: str = "left") -> NormalizedKB:
    """把知识库线性时间地改写为范式。"""
    concepts, roles, individuals = signature_of(kb)
    reserved = set(concepts) | set(roles) | set(individuals)
    norm = Normalizer(reserved, decomposition=decomposition)

    for axiom in kb.strict:
        norm.gci(axiom.lhs, axiom.rhs)

    typicality: Dict[str, Tuple[Tuple[str, int], ...]] = {}
    for name in kb.distinguished:
        entries = []
        for inclusion in kb.defeasible.get(name, ()):
            entries.append((norm.define(inclusion.head), inclusion.weight))
        typicality[name] = tuple(entries)

    abox: List[AtomicAssertion] = []
    for assertion in kb.abox:
        if isinstance(assertion, RoleAssertion):
            abox.append(RoleFact(assertion.role, assertion.subject, assertion.object))
        elif isinstance(assertion.concept, Top):
            continue
        elif isinstance(assertion.concept, Atomic):
            abox.append(ConceptFact(assertion.concept.name, assertion.individual))
        else:
            abox.append(ConceptFact(norm.right_atom(assertion.concept), assertion.individual))

    nkb = NormalizedKB(
        axioms=tuple(_dedupe(norm.axioms)),
        typicality=typicality,
        abox=tuple(abox),
        fresh_registry=norm.registry,
        distinguished=tuple(kb.distinguished),
        class_names=tuple(concepts) + tuple(norm.registry),
        roles=tuple(roles),
        individuals=tuple(individuals),
        nominals=norm.nominals,
        next_fresh=norm.counter,
    )
    logger.debug(f"范式化完成: {len(nkb.axioms)} 条范式公理, {len(norm.registry)} 个新名字")
    return nkb


def normalize_query(nkb: NormalizedKB, q: Query, decomposition: str = "left") -> Tuple[NormalizedKB, str, str]:
    """为查询的主语与宾语引入双向定义的名字，返回扩展后的范式知识库与两个名字。"""
    reserved = set(nkb.class_names) | set(nkb.roles) | set(nkb.individuals)
    norm = Normalizer(reserved, start=nkb.next_fresh, decomposition=decomposition,
                      nominals=nkb.nominals, registry=nkb.fresh_registry)
    subject = norm.define(q.subject)
    obj = norm.define(q.object)
    if not norm.axioms and norm.registry == nkb.fresh_registry:
        return nkb, subject, obj
    new_names = tuple(n for n in norm.registry if n not in nkb.fresh_registry)
    extended = replace(
        nkb,
        axioms=tuple(_dedupe(list(nkb.axioms) + norm.axioms)),
        fresh_registry=norm.registry,
        class_names=nkb.class_names + new_names,
        nominals=norm.nominals,
        next_fresh=norm.counter,
    )
    return extended, subject, obj


def _dedupe(axioms: List[NormalAxiom]) -> List[NormalAxiom]:
    seen = set()
    result = []
    for axiom in axioms:
        if axiom not in seen:
            seen.add(axiom)
            result.append(axiom)
    return result


def _is_name(x) -> bool:
    return isinstance(x, str)


_SHAPE_FIELDS = {
    SubAtomic: ("sub", "sup"),
    SubConj: ("left", "right", "sup"),
    SubExists: ("filler", "sup"),
    SupExists: ("sub", "filler"),
    SubBot: ("sub",),
    NominalClass: ("cls",),
}


def _is_normal_strict(axiom: StrictAxiom) -> bool:
    lhs, rhs = axiom.lhs, axiom.rhs
    simple = (Atomic, Top)
    if isinstance(lhs, simple) and isinstance(rhs, (Atomic, Bot)):
        return True
    if isinstance(lhs, Conj) and isinstance(lhs.left, simple) and isinstance(lhs.right, simple) \
            and isinstance(rhs, Atomic):
        return True
    if isinstance(lhs, Exists) and isinstance(lhs.filler, simple) and isinstance(rhs, Atomic):
        return True
    if isinstance(lhs, simple) and isinstance(rhs, Exists) and isinstance(rhs.filler, simple):
        return True
    return False


def is_normal_form(kb: Union[NormalizedKB, KnowledgeBase]) -> bool:
    """判断知识库是否处于范式（接受范式知识库或原始知识库）。"""
    if isinstance(kb, KnowledgeBase):
        if not all(_is_normal_strict(axiom) for axiom in kb.strict):
            return False
        for inclusion in kb.inclusions():
            if not isinstance(inclusion.head, (Atomic, Top)):
                return False
        return all(isinstance(a, RoleAssertion) or isinstance(a.concept, Atomic) for a in kb.abox)

    for axiom in kb.axioms:
        fields = _SHAPE_FIELDS.get(type(axiom))
        if fields is None:
            return False
        if not all(_is_name(getattr(axiom, f)) for f in fields):
            return False
    for subject, entries in kb.typicality.items():
        if not _is_name(subject):
            return False
        for head, weight in entries:
            if not _is_name(head) or not isinstance(weight, int):
                return False
    return True


def kb_size(kb: KnowledgeBase) -> int:
    """知识库规模：公理、包含、断言条数加上构造子个数。"""
    size = len(kb.strict) + len(kb.abox)
    for axiom in kb.strict:
        size += count_connectives(axiom.lhs) + count_connectives(axiom.rhs)
    for inclusion in kb.inclusions():
        size += 1 + count_connectives(inclusion.head)
    for assertion in kb.abox:
        if isinstance(assertion, ConceptAssertion):
            size += count_connectives(assertion.concept)
    return size


def _render_axiom(axiom: NormalAxiom) -> List[str]:
    if isinstance(axiom, SubAtomic):
        return [f"{axiom.sub} <= {axiom.sup}"]
    if isinstance(axiom, SubConj):
        return [f"{axiom.left} and {axiom.right} <= {axiom.sup}"]
    if isinstance(axiom, SubExists):
        return [f"exists {axiom.role}.{axiom.filler} <= {axiom.sup}"]
    if isinstance(axiom, SupExists):
        return [f"{axiom.sub} <= exists {axiom.role}.{axiom.filler}"]
    if isinstance(axiom, SubBot):
        return [f"{axiom.sub} <= Bot"]
    return [f"{{{axiom.individual}}} <= {axiom.cls}", f"{axiom.cls} <= {{{axiom.individual}}}"]


def render_normalized_kb(nkb: NormalizedKB) -> str:
    """以知识库表层语法输出范式知识库，新名字作为概念声明。"""
    lines: List[str] = []
    concepts = sorted(n for n in nkb.class_names if n != TOP_NAME)
    if concepts:
        lines.append(f"concept {', '.join(concepts)}")
    if nkb.roles:
        lines.append(f"role {', '.join(sorted(nkb.roles))}")
    if nkb.individuals:
        lines.append(f"individual {', '.join(sorted(nkb.individuals))}")
    for axiom in nkb.axioms:
        lines += _render_axiom(axiom)
    for name in nkb.distinguished:
        for head, weight in nkb.typicality.get(name, ()):
            lines.append(f"T({name}) <= {head} @ {weight}")
    for fact in nkb.abox:
        if isinstance(fact, ConceptFact):
            lines.append(f"{fact.cls}({fact.individual})")
        else:
            lines.append(f"{fact.role}({fact.subject}, {fact.object})")
    return "\n".join(lines) + ("\n" if lines else "")
