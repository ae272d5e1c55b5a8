"""判定结果的解释报告。"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..kb.model import Atomic, ConceptExpr, Top
from ..kb.renderer import render_concept
from .entailment import EntailmentVerdict
from .normalizer import NormalizedKB
from .preference import ExtendedWeight

SATISFIED = "satisfied"
VIOLATED = "violated"
VACUOUS = "satisfied-vacuously"


@dataclass(frozen=True)
class InclusionStatus:
    subject: str
    head: str
    weight: int
    status: str


@dataclass(frozen=True)
class ConceptReport:
    concept: str
    weight: ExtendedWeight
    inclusions: Tuple[InclusionStatus, ...] = ()


@dataclass(frozen=True)
class CandidateReport:
    concepts: Tuple[str, ...]
    per_concept: Tuple[ConceptReport, ...]
    object_holds: bool


@dataclass(frozen=True)
class ExplanationReport:
    query_subject: str
    query_object: str
    entailed: bool
    vacuous: bool
    strict: bool
    candidates: Tuple[CandidateReport, ...] = field(default_factory=tuple)

    def render(self) -> str:
        verdict = "entailed" if self.entailed else "not entailed"
        lines = [f"query: {'' if self.strict else 'T'}({self.query_subject}) <= {self.query_object}: {verdict}"]
        if self.vacuous:
            lines.append("subject is unsatisfiable: entailed vacuously")
            return "\n".join(lines)
        if self.strict:
            return "\n".join(lines)
        for i, cand in enumerate(self.candidates, 1):
            lines.append(f"preferred type #{i}: {{{', '.join(cand.concepts)}}}")
            for report in cand.per_concept:
                lines.append(f"  W[{report.concept}] = {report.weight}")
                for inc in report.inclusions:
                    lines.append(f"    T({inc.subject}) <= {inc.head} @ {inc.weight}: {inc.status}")
            lines.append(f"  object holds: {'yes' if cand.object_holds else 'no'}")
        return "\n".join(lines)


def display_name(name: str, nkb: Optional[NormalizedKB]) -> str:
    """把新名字还原为它代表的概念表达式。"""
    if nkb is None:
        return name
    origin: Optional[ConceptExpr] = nkb.fresh_registry.get(name)
    if origin is None or isinstance(origin, (Atomic, Top)):
        return name
    return render_concept(origin)


def explain(verdict: EntailmentVerdict, nkb: Optional[NormalizedKB] = None) -> ExplanationReport:
    """逐个偏好候选列出各区分概念的权重与每条包含的满足情况。"""
    nkb = nkb or verdict.nkb
    candidates: List[CandidateReport] = []
    for cand in verdict.preferred:
        per_concept = []
        for concept in (nkb.distinguished if nkb else ()):
            member = concept in cand.concepts
            inclusions = []
            for head, weight in nkb.typicality.get(concept, ()):
                if not member:
                    status = VACUOUS
                elif head in cand.concepts:
                    status = SATISFIED
                else:
                    status = VIOLATED
                inclusions.append(InclusionStatus(concept, display_name(head, nkb), weight, status))
            per_concept.append(ConceptReport(concept, cand.weights[concept], tuple(inclusions)))
        shown = tuple(sorted(display_name(c, nkb) for c in cand.concepts))
        candidates.append(CandidateReport(shown, tuple(per_concept), verdict.object in cand.concepts))

    return ExplanationReport(
        query_subject=display_name(verdict.subject, nkb),
        query_object=display_name(verdict.object, nkb),
        entailed=verdict.entailed,
        vacuous=verdict.vacuous,
        strict=verdict.strict,
        candidates=tuple(candidates),
    )
