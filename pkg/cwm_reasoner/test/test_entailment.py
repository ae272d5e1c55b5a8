#!/usr/bin/env python3
"""候选枚举、蕴涵判定与解释报告测试。"""

import sys
from dataclasses import replace
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.exceptions import CandidateBudgetExceeded, ConfigurationError, KbValidationError
from src.harness.generator import gen_case
from src.kb.model import Atomic, Conj, KnowledgeBase, Query
from src.kb.parser import load_kb, parse_kb, parse_query
from src.reasoning.candidates import enumerate_candidates, free_class_names
from src.reasoning.entailment import EntailmentEngine, decide_entailment
from src.reasoning.explain import SATISFIED, VACUOUS, VIOLATED, explain
from src.reasoning.normalizer import normalize_kb, normalize_query
from src.reasoning.preference import Finite

KB_DIR = Path(__file__).resolve().parents[2] / "resources" / "kb"


@pytest.fixture
def emp_kb() -> KnowledgeBase:
    return load_kb(str(KB_DIR / "emp_student.kb"))


@pytest.fixture
def phd_kb() -> KnowledgeBase:
    return load_kb(str(KB_DIR / "phd_student.kb"))


# =============================================================================
# 候选枚举
# =============================================================================

def test_single_class_has_one_candidate():
    nkb = normalize_kb(parse_kb("concept C\n"))
    cands = enumerate_candidates(nkb, "C")
    assert [c.concepts for c in cands] == [frozenset({"Top", "C"})]


def test_every_emp_candidate_is_an_adult(emp_kb):
    nkb = normalize_kb(emp_kb)
    cands = enumerate_candidates(nkb, "Emp")
    assert cands
    assert all({"Emp", "Adult", "Top"} <= c.concepts for c in cands)
    # 去重且规范排序
    assert len({c.concepts for c in cands}) == len(cands)
    assert [c.sort_key() for c in cands] == sorted(c.sort_key() for c in cands)


def test_unsatisfiable_subject_has_no_candidates():
    nkb = normalize_kb(parse_kb("concept Emp\nEmp <= Bot\n"))
    assert enumerate_candidates(nkb, "Emp") == ()


def test_inconsistent_abox_has_no_candidates():
    nkb = normalize_kb(parse_kb("concept A, B\nindividual a\nA <= Bot\nA(a)\n"))
    assert enumerate_candidates(nkb, "B") == ()


def test_free_class_names_exclude_top_and_subject(emp_kb):
    names = free_class_names(normalize_kb(emp_kb), "Emp")
    assert "Emp" not in names and "Top" not in names
    assert list(names) == sorted(names)


def test_candidate_budget(emp_kb):
    nkb = normalize_kb(emp_kb)
    with pytest.raises(CandidateBudgetExceeded):
        enumerate_candidates(nkb, "Emp", budget=2)
    with pytest.raises(CandidateBudgetExceeded):
        EntailmentEngine(candidate_budget=2).decide(emp_kb, parse_query("T(Emp) <= Young"))


def test_unknown_enumeration_algorithm(emp_kb):
    with pytest.raises(ConfigurationError):
        enumerate_candidates(normalize_kb(emp_kb), "Emp", algorithm="bogus")
    with pytest.raises(ConfigurationError):
        EntailmentEngine(algorithm="bogus").decide(emp_kb, parse_query("T(Emp) <= Young"))


@pytest.mark.parametrize("seed", range(60))
def test_gray_enumeration_matches_naive(seed):
    """Gray码增量枚举与逐子集独立饱和得到相同的候选。"""
    kb, query = gen_case(seed, 0)
    nkb, subject, _ = normalize_query(normalize_kb(kb), query)
    gray = enumerate_candidates(nkb, subject, threads=1, algorithm="gray_incremental")
    naive = enumerate_candidates(nkb, subject, algorithm="naive")
    assert gray == naive


def _wide_kb() -> KnowledgeBase:
    names = [f"A{i}" for i in range(9)]
    text = (
        f"concept {', '.join(names)}\nrole r\n"
        "A1 and A2 <= A3\nA4 <= exists r.A5\nexists r.A5 <= A6\nA7 and A8 <= Bot\n"
        "T(A0) <= A3 @ 5\nT(A0) <= A6 @ -2\n"
    )
    return parse_kb(text)


def test_parallel_enumeration_is_deterministic(monkeypatch):
    """足够多子集时分块并行；结果与单线程一致。"""
    monkeypatch.delenv("CWM_THREADS", raising=False)
    nkb = normalize_kb(_wide_kb())
    assert 1 << len(free_class_names(nkb, "A0")) >= 256
    single = enumerate_candidates(nkb, "A0", threads=1)
    parallel = enumerate_candidates(nkb, "A0", threads=4)
    assert single == parallel
    assert all(not {"A7", "A8"} <= c.concepts for c in single)


def test_env_thread_override(monkeypatch):
    monkeypatch.setenv("CWM_THREADS", "3")
    nkb = normalize_kb(_wide_kb())
    assert enumerate_candidates(nkb, "A0", threads=1) == enumerate_candidates(nkb, "A0", threads=8)


# =============================================================================
# 判定：雇员/学生示例
# =============================================================================

@pytest.mark.parametrize("query, expected", [
    ("T(Emp) <= exists has_boss.Emp", True),
    ("T(Emp) <= Young", False),
    ("T(Emp) <= Adult", True),
    ("T(Emp) <= Emp", True),
    ("T(Student) <= Young", True),
    ("T(Student) <= exists hasScholarship.Top", False),
])
def test_emp_student_queries(emp_kb, query, expected):
    verdict = decide_entailment(emp_kb, parse_query(query))
    assert verdict.entailed is expected
    assert not verdict.vacuous
    assert verdict.preferred


def test_emp_preferred_types_have_boss(emp_kb):
    verdict = decide_entailment(emp_kb, parse_query("T(Emp) <= exists has_boss.Emp"))
    assert all(verdict.object in t.concepts for t in verdict.preferred)
    assert any(t.weights["Emp"] == Finite(100) for t in verdict.preferred)


def test_distinguished_subject_uses_its_own_preference(emp_kb):
    """T(Student) 取 W_Student 最大的候选，Emp 上的权重不参与比较。"""
    verdict = decide_entailment(emp_kb, parse_query("T(Student) <= Young"))
    assert verdict.entailed
    assert {t.weights["Student"] for t in verdict.preferred} == {Finite(170)}
    assert all("Young" in t.concepts for t in verdict.preferred)
    assert any("Emp" in t.concepts for t in verdict.preferred)


def test_student_only_young():
    kb = load_kb(str(KB_DIR / "student_only.kb"))
    verdict = decide_entailment(kb, parse_query("T(Student) <= Young"))
    assert verdict.entailed
    assert {t.weights["Student"] for t in verdict.preferred} == {Finite(170)}


def test_specificity_override_phd(phd_kb):
    """PhdStudent 比 Student 更特殊：典型博士生不年轻但有课。"""
    young = decide_entailment(phd_kb, parse_query("T(PhdStudent) <= Young"))
    classes = decide_entailment(phd_kb, parse_query("T(PhdStudent) <= exists has_classes.Top"))
    assert not young.entailed
    assert classes.entailed
    assert {tuple(sorted(t.weights.encode().items())) for t in classes.preferred} == {
        (("PhdStudent", 20), ("Student", 0)),
    }


def test_strict_queries(emp_kb):
    verdict = decide_entailment(emp_kb, parse_query("PhdStudent <= Student"))
    assert verdict.entailed and verdict.strict and not verdict.vacuous
    assert verdict.preferred == ()
    assert not decide_entailment(emp_kb, parse_query("Student <= PhdStudent")).entailed
    assert decide_entailment(emp_kb, parse_query("Emp <= exists has_SSN.Top")).entailed


def test_vacuous_entailment():
    kb = parse_kb("concept A, B\nA <= Bot\nT(A) <= B @ 1\n")
    verdict = decide_entailment(kb, parse_query("T(A) <= B"))
    assert verdict.entailed and verdict.vacuous
    assert verdict.preferred == ()
    strict = decide_entailment(kb, parse_query("A <= B"))
    assert strict.entailed and strict.vacuous


def test_conjunctive_subject(emp_kb):
    verdict = decide_entailment(emp_kb, parse_query("T(Emp and Student) <= Adult"))
    assert verdict.entailed
    assert all({"Emp", "Student"} <= t.concepts for t in verdict.preferred)


def test_query_over_undeclared_names(emp_kb):
    with pytest.raises(KbValidationError):
        decide_entailment(emp_kb, Query(Atomic("Emp"), Atomic("Manager")))


def test_engine_records_stats(emp_kb):
    engine = EntailmentEngine(minima="pairwise_scan")
    verdict = engine.decide(emp_kb, parse_query("T(Emp) <= Young"))
    assert engine.stats["candidates"] == verdict.candidate_count
    assert engine.stats["algorithm"] == "gray_incremental"


def test_minima_algorithms_agree(emp_kb):
    q = parse_query("T(Emp and Student) <= Young")
    a = decide_entailment(emp_kb, q, minima="numpy_block", block_size=3)
    b = decide_entailment(emp_kb, q, minima="pairwise_scan")
    assert a.preferred == b.preferred


# =============================================================================
# 解释报告
# =============================================================================

def test_explain_emp(emp_kb):
    verdict = decide_entailment(emp_kb, parse_query("T(Emp) <= Young"))
    report = explain(verdict)
    assert not report.entailed
    best = [c for c in report.candidates
            if any(r.concept == "Emp" and r.weight == Finite(100) for r in c.per_concept)]
    assert best
    emp = next(r for r in best[0].per_concept if r.concept == "Emp")
    statuses = {inc.head: inc.status for inc in emp.inclusions}
    assert statuses == {
        "Young": VIOLATED,
        "exists has_boss.Emp": SATISFIED,
        "exists has_classes.Top": VIOLATED,
    }
    assert not best[0].object_holds
    text = report.render()
    assert "not entailed" in text
    assert "T(Emp) <= exists has_boss.Emp @ 100: satisfied" in text


def test_explain_vacuous_membership():
    kb = parse_kb("concept A, B\nA and B <= Bot\nT(A) <= A @ 1\nT(B) <= B @ 1\n")
    report = explain(decide_entailment(kb, parse_query("T(A) <= A")))
    (cand,) = report.candidates
    b = next(r for r in cand.per_concept if r.concept == "B")
    assert str(b.weight) == "-inf"
    assert [inc.status for inc in b.inclusions] == [VACUOUS]


def test_explain_unsatisfiable_subject():
    kb = parse_kb("concept A, B\nA <= Bot\nT(A) <= B @ 1\n")
    text = explain(decide_entailment(kb, parse_query("T(A) <= B"))).render()
    assert "subject is unsatisfiable" in text


# =============================================================================
# 推理性质
# =============================================================================

@pytest.mark.parametrize("seed", range(80))
def test_reflexivity(seed):
    kb, query = gen_case(seed, 1)
    assert decide_entailment(kb, Query(query.subject, query.subject)).entailed


@pytest.mark.parametrize("seed", range(60))
def test_right_weakening(seed):
    """T(C) ⊑ D 成立且严格地 D ⊑ E 时 T(C) ⊑ E 成立。"""
    kb, query = gen_case(seed, 2)
    classes = sorted(kb.signature.concepts)
    for d in classes:
        if not decide_entailment(kb, Query(query.subject, Atomic(d))).entailed:
            continue
        for e in classes:
            if decide_entailment(kb, Query(Atomic(d), Atomic(e), typicality=False)).entailed:
                assert decide_entailment(kb, Query(query.subject, Atomic(e))).entailed, (d, e)


@pytest.mark.parametrize("seed", range(60))
def test_and(seed):
    """T(C) ⊑ D 与 T(C) ⊑ E 同时成立时 T(C) ⊑ D ⊓ E 成立。"""
    kb, query = gen_case(seed, 3)
    classes = sorted(kb.signature.concepts)
    entailed = [d for d in classes if decide_entailment(kb, Query(query.subject, Atomic(d))).entailed]
    for d in entailed:
        for e in entailed:
            assert decide_entailment(kb, Query(query.subject, Conj(Atomic(d), Atomic(e)))).entailed


@pytest.mark.parametrize("seed", range(150))
def test_raising_weight_of_entailed_head_keeps_it(seed):
    """只有一个区分概念时，提高已蕴涵头部的权重不会破坏蕴涵。"""
    kb, _ = gen_case(seed, 4)
    if len(kb.distinguished) != 1:
        pytest.skip("需要恰好一个区分概念")
    (name,) = kb.distinguished
    for i, inclusion in enumerate(kb.defeasible[name]):
        if not isinstance(inclusion.head, Atomic):
            continue
        query = Query(Atomic(name), inclusion.head)
        if not decide_entailment(kb, query).entailed:
            continue
        raised = list(kb.defeasible[name])
        raised[i] = replace(inclusion, weight=inclusion.weight + 50)
        stronger = replace(kb, defeasible={**kb.defeasible, name: tuple(raised)})
        assert decide_entailment(stronger, query).entailed


def test_reflexivity_on_every_declared_concept(emp_kb):
    for name in sorted(emp_kb.signature.concepts):
        assert decide_entailment(emp_kb, Query(Atomic(name), Atomic(name))).entailed, name


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(500))
def test_postulates_on_fuzzed_cases(seed):
    """自反、右弱化与合取在500个随机用例上成立。"""
    kb, query = gen_case(seed, 9)
    subject = query.subject
    assert decide_entailment(kb, Query(subject, subject)).entailed
    classes = sorted(kb.signature.concepts)
    entailed = [d for d in classes if decide_entailment(kb, Query(subject, Atomic(d))).entailed]
    for d in entailed:
        for e in classes:
            if decide_entailment(kb, Query(Atomic(d), Atomic(e), typicality=False)).entailed:
                assert e in entailed, (d, e)
        for e in entailed:
            assert decide_entailment(kb, Query(subject, Conj(Atomic(d), Atomic(e)))).entailed


@pytest.mark.parametrize("seed", range(60))
def test_cautious_monotonicity(seed):
    """非区分概念 C 上 T(C) ⊑ D 与 T(C) ⊑ E 同时成立时 T(C ⊓ D) ⊑ E 成立。"""
    kb, _ = gen_case(seed, 6)
    plain = [c for c in sorted(kb.signature.concepts) if c not in kb.distinguished]
    if not plain:
        pytest.skip("没有非区分概念")
    subject = Atomic(plain[0])
    classes = sorted(kb.signature.concepts)
    entailed = [d for d in classes if decide_entailment(kb, Query(subject, Atomic(d))).entailed]
    for d in entailed:
        for e in entailed:
            assert decide_entailment(kb, Query(Conj(subject, Atomic(d)), Atomic(e))).entailed, (d, e)


@pytest.mark.parametrize("seed", range(30))
def test_verdicts_are_deterministic(seed):
    kb, query = gen_case(seed, 8)
    first = decide_entailment(kb, query, threads=1)
    second = decide_entailment(kb, query, threads=4, algorithm="naive", minima="pairwise_scan")
    assert (first.entailed, first.vacuous, first.preferred) == (second.entailed, second.vacuous, second.preferred)
