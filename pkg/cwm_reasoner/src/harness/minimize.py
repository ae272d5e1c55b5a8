"""模糊测试反例的贪心最小化。"""

import logging
from dataclasses import replace
from typing import Callable, Iterator

from ..kb.model import KnowledgeBase, validate_kb

logger = logging.getLogger(__name__)


def _without_strict(kb: KnowledgeBase, i: int) -> KnowledgeBase:
    return replace(kb, strict=kb.strict[:i] + kb.strict[i + 1:])


def _without_assertion(kb: KnowledgeBase, i: int) -> KnowledgeBase:
    return replace(kb, abox=kb.abox[:i] + kb.abox[i + 1:])


def _without_inclusion(kb: KnowledgeBase, name: str, i: int) -> KnowledgeBase:
    remaining = kb.defeasible[name][:i] + kb.defeasible[name][i + 1:]
    defeasible = dict(kb.defeasible)
    distinguished = kb.distinguished
    if remaining:
        defeasible[name] = remaining
    else:
        # 最后一条包含删除后该概念不再是区分概念
        del defeasible[name]
        distinguished = tuple(n for n in distinguished if n != name)
    return replace(kb, defeasible=defeasible, distinguished=distinguished)


def _reductions(kb: KnowledgeBase) -> Iterator[KnowledgeBase]:
    for i in range(len(kb.strict)):
        yield _without_strict(kb, i)
    for name in kb.distinguished:
        for i in range(len(kb.defeasible.get(name, ()))):
            yield _without_inclusion(kb, name, i)
    for i in range(len(kb.abox)):
        yield _without_assertion(kb, i)


def minimize_kb(kb: KnowledgeBase, still_failing: Callable[[KnowledgeBase], bool]) -> KnowledgeBase:
    """逐条删除严格公理、典型性包含与断言，保留仍然复现分歧的删除，直到无法再删。"""
    current = kb
    changed = True
    while changed:
        changed = False
        for candidate in _reductions(current):
            if validate_kb(candidate):
                continue
            if still_failing(candidate):
                current = candidate
                changed = True
                break
    logger.debug(f"最小化完成: {len(current.strict)} 条严格公理, "
                 f"{sum(len(v) for v in current.defeasible.values())} 条包含, {len(current.abox)} 条断言")
    return current
