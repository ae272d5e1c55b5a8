"""知识库与查询的确定性文本输出（与解析器互逆）。"""

from typing import List

from .model import (
    Atomic, Bot, ConceptAssertion, ConceptExpr, Conj, Exists, KnowledgeBase,
    Nominal, Query, RoleAssertion, Top,
)


def render_concept(c: ConceptExpr) -> str:
    """输出概念表达式，只在必要处加括号。"""
    if isinstance(c, Top):
        return "Top"
    if isinstance(c, Bot):
        return "Bot"
    if isinstance(c, Atomic):
        return c.name
    if isinstance(c, Nominal):
        return "{" + c.individual + "}"
    if isinstance(c, Exists):
        return f"exists {c.role}.{_render_unary(c.filler)}"
    if isinstance(c, Conj):
        # 右结合：左操作数若是合取需要括号
        left = f"({render_concept(c.left)})" if isinstance(c.left, Conj) else render_concept(c.left)
        return f"{left} and {render_concept(c.right)}"
    raise TypeError(f"未知的概念节点: {c!r}")


def _render_unary(c: ConceptExpr) -> str:
    if isinstance(c, Conj):
        return f"({render_concept(c)})"
    return render_concept(c)


def render_query(q: Query) -> str:
    """输出查询文本。"""
    subject = f"T({render_concept(q.subject)})" if q.typicality else render_concept(q.subject)
    return f"{subject} <= {render_concept(q.object)}"


def _render_namelist(keyword: str, names) -> List[str]:
    if not names:
        return []
    return [f"{keyword} {', '.join(sorted(names))}"]


def render_kb(kb: KnowledgeBase) -> str:
    """输出知识库：声明、严格公理、按区分概念分组的典型性包含、断言。"""
    lines: List[str] = []
    lines += _render_namelist("concept", kb.signature.concepts)
    lines += _render_namelist("role", kb.signature.roles)
    lines += _render_namelist("individual", kb.signature.individuals)

    for axiom in kb.strict:
        lines.append(f"{render_concept(axiom.lhs)} <= {render_concept(axiom.rhs)}")

    for name in kb.distinguished:
        for inclusion in kb.defeasible.get(name, ()):
            lines.append(f"T({inclusion.subject}) <= {render_concept(inclusion.head)} @ {inclusion.weight}")

    for assertion in kb.abox:
        if isinstance(assertion, RoleAssertion):
            lines.append(f"{assertion.role}({assertion.subject}, {assertion.object})")
        elif isinstance(assertion, ConceptAssertion) and isinstance(assertion.concept, Atomic):
            lines.append(f"{assertion.concept.name}({assertion.individual})")
        else:
            lines.append(f"({render_concept(assertion.concept)})({assertion.individual})")

    return "\n".join(lines) + ("\n" if lines else "")
