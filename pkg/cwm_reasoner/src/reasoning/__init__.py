"""推理层：范式化、饱和、偏好、蕴涵判定与解释。"""

from .entailment import EntailmentEngine, EntailmentVerdict, decide_entailment
from .explain import ExplanationReport, explain
from .normalizer import NormalizedKB, is_normal_form, normalize_kb, normalize_query
from .oracle import OracleDecisionProcedure, oracle_decide

__all__ = [
    "EntailmentEngine",
    "EntailmentVerdict",
    "decide_entailment",
    "ExplanationReport",
    "explain",
    "NormalizedKB",
    "normalize_kb",
    "normalize_query",
    "is_normal_form",
    "OracleDecisionProcedure",
    "oracle_decide",
]
