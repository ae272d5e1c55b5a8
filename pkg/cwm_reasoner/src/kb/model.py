"""
加权可废止EL⊥知识库的抽象语法

包含：
- 概念表达式：Top / Bot / Atomic / Nominal / Conj / Exists
- 严格公理、断言、带权典型性包含、知识库与查询
- 良构性校验 validate_kb 与签名提取 signature_of

所有节点均为不可变dataclass，结构相等性忽略源码位置。
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

# 64位有符号整数的对称区间；最小值保留给 -∞ 的数组编码
WEIGHT_MAX = 2 ** 63 - 1
WEIGHT_MIN = -WEIGHT_MAX

TOP_NAME = "Top"


@dataclass(frozen=True)
class SourceSpan:
    """源码位置（行、列均从1开始）。"""
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    """校验/解析诊断。"""
    code: str
    message: str
    span: Optional[SourceSpan] = None

    def __str__(self) -> str:
        where = f"[{self.span}] " if self.span else ""
        return f"{where}{self.code}: {self.message}"


# =============================================================================
# 概念表达式
# =============================================================================

@dataclass(frozen=True)
class Top:
    """⊤"""
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Bot:
    """⊥"""
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Atomic:
    """原子概念 A"""
    name: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Nominal:
    """名词概念 {a}"""
    individual: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Conj:
    """有序二元合取 C ⊓ D"""
    left: "ConceptExpr"
    right: "ConceptExpr"
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Exists:
    """存在限定 ∃r.C"""
    role: str
    filler: "ConceptExpr"
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


ConceptExpr = Union[Top, Bot, Atomic, Nominal, Conj, Exists]


def conj_all(parts: List[ConceptExpr]) -> ConceptExpr:
    """将多元合取按右结合折叠为二元合取。"""
    if not parts:
        return Top()
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Conj(part, result)
    return result


def iter_subconcepts(c: ConceptExpr) -> Iterator[ConceptExpr]:
    """先序遍历所有子概念（含自身）。"""
    stack = [c]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Conj):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, Exists):
            stack.append(node.filler)


def count_connectives(c: ConceptExpr) -> int:
    """统计 ⊓ 与 ∃ 构造子的数量。"""
    return sum(1 for node in iter_subconcepts(c) if isinstance(node, (Conj, Exists)))


# =============================================================================
# 公理、断言与知识库
# =============================================================================

@dataclass(frozen=True)
class StrictAxiom:
    """严格概念包含 lhs ⊑ rhs"""
    lhs: ConceptExpr
    rhs: ConceptExpr
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ConceptAssertion:
    """概念断言 C(a)"""
    concept: ConceptExpr
    individual: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RoleAssertion:
    """角色断言 r(a, b)"""
    role: str
    subject: str
    object: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


Assertion = Union[ConceptAssertion, RoleAssertion]


@dataclass(frozen=True)
class WeightedInclusion:
    """带权典型性包含 T(subject) ⊑ head，权重 weight"""
    subject: str
    head: ConceptExpr
    weight: int
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Signature:
    """已声明的名字集合。"""
    concepts: FrozenSet[str] = frozenset()
    roles: FrozenSet[str] = frozenset()
    individuals: FrozenSet[str] = frozenset()


@dataclass(frozen=True)
class KnowledgeBase:
    """加权EL⊥知识库 ⟨T_strict, T_C1, …, T_Ck, A⟩。"""
    distinguished: Tuple[str, ...] = ()
    strict: Tuple[StrictAxiom, ...] = ()
    defeasible: Dict[str, Tuple[WeightedInclusion, ...]] = field(default_factory=dict)
    abox: Tuple[Assertion, ...] = ()
    signature: Signature = field(default_factory=Signature)

    def inclusions(self) -> Iterator[WeightedInclusion]:
        """按区分概念顺序遍历全部带权包含。"""
        for name in self.distinguished:
            yield from self.defeasible.get(name, ())


@dataclass(frozen=True)
class Query:
    """查询：typicality=True 表示 T(subject) ⊑ object，否则为严格包含。"""
    subject: ConceptExpr
    object: ConceptExpr
    typicality: bool = True


# =============================================================================
# 签名与校验
# =============================================================================

def _names_in_concept(c: ConceptExpr, concepts: set, roles: set, individuals: set) -> None:
    for node in iter_subconcepts(c):
        if isinstance(node, Atomic):
            concepts.add(node.name)
        elif isinstance(node, Nominal):
            individuals.add(node.individual)
        elif isinstance(node, Exists):
            roles.add(node.role)


def _used_names(kb: KnowledgeBase) -> Tuple[set, set, set]:
    concepts: set = set()
    roles: set = set()
    individuals: set = set()
    for axiom in kb.strict:
        _names_in_concept(axiom.lhs, concepts, roles, individuals)
        _names_in_concept(axiom.rhs, concepts, roles, individuals)
    concepts.update(kb.distinguished)
    for key, inclusions in kb.defeasible.items():
        concepts.add(key)
        for inclusion in inclusions:
            concepts.add(inclusion.subject)
            _names_in_concept(inclusion.head, concepts, roles, individuals)
    for assertion in kb.abox:
        if isinstance(assertion, ConceptAssertion):
            _names_in_concept(assertion.concept, concepts, roles, individuals)
            individuals.add(assertion.individual)
        else:
            roles.add(assertion.role)
            individuals.add(assertion.subject)
            individuals.add(assertion.object)
    return concepts, roles, individuals


def signature_of(kb: KnowledgeBase) -> Tuple[Tuple[str, ...], Tuple[str, ...], Tuple[str, ...]]:
    """返回知识库中出现或声明的 (概念名, 角色名, 个体名)，均已排序。"""
    concepts, roles, individuals = _used_names(kb)
    concepts |= set(kb.signature.concepts)
    roles |= set(kb.signature.roles)
    individuals |= set(kb.signature.individuals)
    return tuple(sorted(concepts)), tuple(sorted(roles)), tuple(sorted(individuals))


def _check_concept(c: ConceptExpr, sig: Signature, span: Optional[SourceSpan],
                   out: List[Diagnostic]) -> None:
    for node in iter_subconcepts(c):
        where = node.span or span
        if isinstance(node, Atomic) and node.name not in sig.concepts:
            out.append(Diagnostic("undeclared-concept", f"概念 '{node.name}' 未声明", where))
        elif isinstance(node, Nominal) and node.individual not in sig.individuals:
            out.append(Diagnostic("undeclared-individual", f"个体 '{node.individual}' 未声明", where))
        elif isinstance(node, Exists) and node.role not in sig.roles:
            out.append(Diagnostic("undeclared-role", f"角色 '{node.role}' 未声明", where))


def validate_kb(kb: KnowledgeBase) -> List[Diagnostic]:
    """校验知识库的全部类型不变式，返回诊断列表（空列表表示合法）。"""
    diagnostics: List[Diagnostic] = []
    sig = kb.signature

    overlap = (sig.concepts & sig.roles) | (sig.concepts & sig.individuals) | (sig.roles & sig.individuals)
    for name in sorted(overlap):
        diagnostics.append(Diagnostic("duplicate-declaration", f"名字 '{name}' 被声明为多种类别"))

    seen = set()
    for name in kb.distinguished:
        if name in seen:
            diagnostics.append(Diagnostic("duplicate-distinguished", f"区分概念 '{name}' 重复"))
        seen.add(name)
        if name not in sig.concepts:
            diagnostics.append(Diagnostic("undeclared-concept", f"区分概念 '{name}' 未声明"))

    for axiom in kb.strict:
        _check_concept(axiom.lhs, sig, axiom.span, diagnostics)
        _check_concept(axiom.rhs, sig, axiom.span, diagnostics)

    for key, inclusions in kb.defeasible.items():
        if key not in kb.distinguished:
            span = inclusions[0].span if inclusions else None
            diagnostics.append(Diagnostic("not-distinguished", f"可废止TBox的键 '{key}' 不在区分概念集合中", span))
        for inclusion in inclusions:
            if inclusion.subject != key:
                diagnostics.append(Diagnostic(
                    "subject-mismatch", f"包含的主语 '{inclusion.subject}' 与键 '{key}' 不一致", inclusion.span))
            if not (WEIGHT_MIN <= inclusion.weight <= WEIGHT_MAX):
                diagnostics.append(Diagnostic(
                    "weight-range", f"权重 {inclusion.weight} 超出64位有符号整数范围", inclusion.span))
            _check_concept(inclusion.head, sig, inclusion.span, diagnostics)

    for assertion in kb.abox:
        if isinstance(assertion, ConceptAssertion):
            _check_concept(assertion.concept, sig, assertion.span, diagnostics)
            if assertion.individual not in sig.individuals:
                diagnostics.append(Diagnostic(
                    "undeclared-individual", f"个体 '{assertion.individual}' 未声明", assertion.span))
        else:
            if assertion.role not in sig.roles:
                diagnostics.append(Diagnostic("undeclared-role", f"角色 '{assertion.role}' 未声明", assertion.span))
            for ind in (assertion.subject, assertion.object):
                if ind not in sig.individuals:
                    diagnostics.append(Diagnostic("undeclared-individual", f"个体 '{ind}' 未声明", assertion.span))

    return diagnostics


def validate_query(kb: KnowledgeBase, query: Query) -> List[Diagnostic]:
    """校验查询只使用知识库签名中的名字。"""
    diagnostics: List[Diagnostic] = []
    _check_concept(query.subject, kb.signature, query.subject.span, diagnostics)
    _check_concept(query.object, kb.signature, query.object.span, diagnostics)
    return diagnostics
