"""知识库抽象语法、解析与输出。"""

from .model import KnowledgeBase, Query, signature_of, validate_kb, validate_query
from .parser import load_kb, parse_kb, parse_query
from .renderer import render_concept, render_kb, render_query

__all__ = [
    "KnowledgeBase",
    "Query",
    "signature_of",
    "validate_kb",
    "validate_query",
    "parse_kb",
    "parse_query",
    "load_kb",
    "render_kb",
    "render_concept",
    "render_query",
]
