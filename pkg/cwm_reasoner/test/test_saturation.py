#!/usr/bin/env python3
"""饱和引擎、子类推理与特殊性关系测试。"""

import random
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.harness.generator import GeneratorLimits, gen_random_kb
from src.kb.model import (
    Atomic, Bot, ConceptAssertion, ConceptExpr, Conj, Exists, KnowledgeBase, Nominal, Query, Top,
)
from src.kb.parser import load_kb, parse_kb
from src.reasoning.normalizer import NormalizedKB, normalize_kb, normalize_query
from src.reasoning.saturation import (
    AUX, Inst, SaturationEngine, Triple, classify, is_consistent, saturate,
    strict_subsumes, witness_term,
)
from src.reasoning.specificity import compute_specificity, is_strict_partial_order

KB_DIR = Path(__file__).resolve().parents[2] / "resources" / "kb"


@pytest.fixture
def emp_nkb() -> NormalizedKB:
    return normalize_kb(load_kb(str(KB_DIR / "emp_student.kb")))


def _nkb(text: str) -> NormalizedKB:
    return normalize_kb(parse_kb(text))


# =============================================================================
# 实例推理
# =============================================================================

def test_emp_prototype_saturation(emp_nkb):
    """Emp ⊑ Adult ⊑ ∃has_SSN.⊤：原型得到 Adult 与 has_SSN 见证边。"""
    result = saturate(emp_nkb, [Inst(AUX, "Emp")])
    witness = witness_term("Adult", "has_SSN", "Top")
    assert result.holds(Inst(AUX, "Adult"))
    assert result.holds(Triple(AUX, "has_SSN", witness))
    assert result.holds(Inst(witness, "Top"))
    assert not result.is_inconsistent()
    assert result.classes_of(AUX) == frozenset({"Top", "Emp", "Adult"})


def test_empty_kb_derives_nothing():
    result = saturate(_nkb(""), [])
    assert result.derived == frozenset()


def test_bottom_makes_context_inconsistent():
    nkb = _nkb("concept A\nA <= Bot\n")
    assert saturate(nkb, [Inst("x", "A")]).is_inconsistent()
    assert not saturate(nkb, []).is_inconsistent()


def test_abox_facts_and_individuals():
    nkb = _nkb("concept A, B\nrole r\nindividual a, b\nA <= exists r.B\nexists r.B <= B\nA(a)\nr(b, a)\n")
    result = saturate(nkb, [])
    assert result.holds(Inst("a", "Top")) and result.holds(Inst("b", "Top"))
    assert result.holds(Inst("a", "B"))
    assert result.holds(Triple("b", "r", "a"))


def test_role_edges_trigger_existential_rule():
    """R4：边先于填充类到达或晚于填充类到达都能触发。"""
    nkb = _nkb("concept A, B\nrole r\nindividual a, b\nexists r.A <= B\nr(a, b)\n")
    engine = SaturationEngine(nkb).open_context(None)
    assert "B" not in engine.classes_of("a")
    engine.add([Inst("b", "A")])
    assert "B" in engine.classes_of("a")


def test_nominal_merging():
    """属于 {a} 的项与 a 共享类与边。"""
    nkb = _nkb("concept A, B, C\nrole r\nindividual a, b\nA <= {a}\nB(a)\nr(b, a)\nexists r.C <= C\n")
    engine = SaturationEngine(nkb).open_context(None)
    engine.add([Inst(AUX, "A"), Inst(AUX, "C")])
    assert "B" in engine.classes_of(AUX)
    assert "C" in engine.classes_of("a")
    assert engine.holds(Triple("b", "r", AUX))
    assert "C" in engine.classes_of("b")


def test_copy_forks_state(emp_nkb):
    base = SaturationEngine(emp_nkb).open_context(None)
    fork = base.copy().add([Inst(AUX, "Emp")])
    assert "Adult" in fork.classes_of(AUX)
    assert base.classes_of(AUX) == frozenset()


# =============================================================================
# 子类推理与一致性
# =============================================================================

def test_strict_subsumption(emp_nkb):
    assert strict_subsumes(emp_nkb, "PhdStudent", "Student")
    assert strict_subsumes(emp_nkb, "Emp", "Adult")
    assert not strict_subsumes(emp_nkb, "Student", "PhdStudent")
    assert not strict_subsumes(emp_nkb, "Emp", "Student")
    for name in emp_nkb.class_names:
        assert strict_subsumes(emp_nkb, name, name)


def test_subsumption_through_fresh_name(emp_nkb):
    """Emp ⊑ ∃has_SSN.⊤ 经由查询宾语的新名字成立。"""
    extended, subject, obj = normalize_query(emp_nkb, Query(Atomic("Emp"), Exists("has_SSN", Top()), False))
    assert subject == "Emp"
    assert strict_subsumes(extended, subject, obj)


def test_unsatisfiable_class_subsumes_everything():
    nkb = _nkb("concept A, B\nA <= Bot\n")
    assert strict_subsumes(nkb, "A", "B")
    assert not strict_subsumes(nkb, "B", "A")


def test_consistency():
    assert is_consistent(_nkb("concept A\nindividual a\n"))
    assert not is_consistent(_nkb("concept A\nindividual a\nA <= Bot\nA(a)\n"))
    assert is_consistent(_nkb("concept A\nA <= Bot\n"))


def test_classify(emp_nkb):
    result = classify(emp_nkb, ["Adult", "Emp", "PhdStudent", "Student", "Young"])
    assert ("Emp", "Adult") in result.subsumptions
    assert ("PhdStudent", "Student") in result.subsumptions
    assert ("Emp", "Student") not in result.subsumptions
    assert result.unsatisfiable == ()


def test_classify_reports_unsatisfiable():
    nkb = _nkb("concept A, B, C\nA and B <= Bot\nC <= A\nC <= B\n")
    result = classify(nkb, ["A", "B", "C"])
    assert result.unsatisfiable == ("C",)
    assert ("A", "B") not in result.subsumptions


# =============================================================================
# 特殊性关系
# =============================================================================

def test_specificity_emp_student(emp_nkb):
    spec = compute_specificity(emp_nkb)
    assert len(spec) == 0
    assert not spec.more_specific("Emp", "Student")
    assert not spec.more_specific("Student", "Emp")


def test_specificity_phd_student():
    spec = compute_specificity(normalize_kb(load_kb(str(KB_DIR / "phd_student.kb"))))
    assert spec.more_specific("PhdStudent", "Student")
    assert not spec.more_specific("Student", "PhdStudent")
    assert spec.overriders("Student") == ("PhdStudent",)
    assert list(spec) == [("PhdStudent", "Student")]


def test_specificity_ignores_equivalent_concepts():
    nkb = _nkb("concept A, B\nA <= B\nB <= A\nT(A) <= B @ 1\nT(B) <= A @ 1\n")
    assert len(compute_specificity(nkb)) == 0


@pytest.mark.parametrize("seed", range(200))
def test_specificity_is_strict_partial_order(seed):
    spec = compute_specificity(normalize_kb(gen_random_kb(seed)))
    assert is_strict_partial_order(spec.pairs)


def test_is_strict_partial_order():
    assert is_strict_partial_order([("a", "b"), ("b", "c"), ("a", "c")])
    assert not is_strict_partial_order([("a", "b"), ("b", "c")])
    assert not is_strict_partial_order([("a", "a")])


# =============================================================================
# 不动点性质
# =============================================================================

def _random_seed(nkb: NormalizedKB, rng: random.Random):
    names = sorted(set(nkb.class_names))
    return [Inst(AUX, name) for name in rng.sample(names, rng.randint(1, min(3, len(names))))]


def _check_confluence(seed: int, orders: int) -> None:
    nkb = normalize_kb(gen_random_kb(seed))
    rng = random.Random(seed)
    atoms = _random_seed(nkb, rng)
    expected = saturate(nkb, atoms)
    for order in range(orders):
        shuffled = saturate(nkb, atoms, rng=random.Random(order))
        assert shuffled == expected


@pytest.mark.parametrize("seed", range(10))
def test_confluence_under_random_agendas(seed):
    """任意处理顺序得到相同的不动点。"""
    _check_confluence(seed, orders=5)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_confluence_under_random_agendas_full(seed):
    _check_confluence(seed, orders=20)


@pytest.mark.parametrize("seed", range(100))
def test_monotonicity(seed):
    """种子增大，派生集合不减。"""
    nkb = normalize_kb(gen_random_kb(seed))
    rng = random.Random(seed)
    small = _random_seed(nkb, rng)
    large = small + _random_seed(nkb, rng)
    assert saturate(nkb, small).derived <= saturate(nkb, large).derived


@pytest.mark.parametrize("seed", range(100))
def test_subsumption_agrees_with_instance_probe(seed):
    """子类推理上下文与实例世界中的探针个体给出相同结论。"""
    nkb = normalize_kb(gen_random_kb(seed))
    names = sorted(set(nkb.class_names))
    for sub in names:
        probe = saturate(nkb, [Inst("#probe", sub)])
        for sup in names:
            expected = probe.is_inconsistent() or probe.holds(Inst("#probe", sup))
            assert strict_subsumes(nkb, sub, sup) == expected, (sub, sup)


# =============================================================================
# 可靠性：与有限模型穷举比对
# =============================================================================

SOUNDNESS_LIMITS = GeneratorLimits(
    max_classes=4, max_roles=1, max_individuals=2, max_assertions=3, max_strict=4, max_inclusions=2,
)
MAX_INTERPRETATION_BITS = 18


class _Interpretations:
    """
    论域 {0..size-1} 上全部解释的向量化表示：第 i 个解释中各类与角色的外延
    取自整数 i 的各个二进制位。个体 a_k 解释为元素 k。
    """

    def __init__(self, kb: KnowledgeBase, size: int):
        self.size = size
        self.elem = {ind: k for k, ind in enumerate(sorted(kb.signature.individuals))}
        classes, roles = sorted(kb.signature.concepts), sorted(kb.signature.roles)
        bits = len(classes) * size + len(roles) * size * size
        index = np.arange(1 << bits, dtype=np.int64)
        self.count = len(index)

        def bit(k: int) -> np.ndarray:
            return ((index >> k) & 1).astype(bool)

        self.ext = {}
        for c, name in enumerate(classes):
            self.ext[name] = np.stack([bit(c * size + x) for x in range(size)], axis=1)
        offset = len(classes) * size
        self.rel = {}
        for r, name in enumerate(roles):
            base = offset + r * size * size
            self.rel[name] = np.stack([
                np.stack([bit(base + x * size + y) for y in range(size)], axis=1)
                for x in range(size)
            ], axis=1)

    def extension(self, c: ConceptExpr) -> np.ndarray:
        if isinstance(c, Top):
            return np.ones((self.count, self.size), dtype=bool)
        if isinstance(c, Bot):
            return np.zeros((self.count, self.size), dtype=bool)
        if isinstance(c, Atomic):
            return self.ext[c.name]
        if isinstance(c, Nominal):
            single = np.zeros((self.count, self.size), dtype=bool)
            single[:, self.elem[c.individual]] = True
            return single
        if isinstance(c, Conj):
            return self.extension(c.left) & self.extension(c.right)
        filler = self.extension(c.filler)
        return (self.rel[c.role] & filler[:, None, :]).any(axis=2)

    def models(self, kb: KnowledgeBase) -> np.ndarray:
        mask = np.ones(self.count, dtype=bool)
        for axiom in kb.strict:
            mask &= (~self.extension(axiom.lhs) | self.extension(axiom.rhs)).all(axis=1)
        for assertion in kb.abox:
            if isinstance(assertion, ConceptAssertion):
                mask &= self.extension(assertion.concept)[:, self.elem[assertion.individual]]
            else:
                mask &= self.rel[assertion.role][:, self.elem[assertion.subject], self.elem[assertion.object]]
        return mask


def _domain_size(kb: KnowledgeBase) -> int:
    """个体数加一个匿名元素；位数超限时去掉匿名元素。"""
    n_ind = len(kb.signature.individuals)
    n_cls, n_role = len(kb.signature.concepts), len(kb.signature.roles)
    size = n_ind + 1
    if n_cls * size + n_role * size * size > MAX_INTERPRETATION_BITS:
        size = max(n_ind, 1)
    return size


def _check_soundness(kb: KnowledgeBase) -> None:
    interp = _Interpretations(kb, _domain_size(kb))
    models = interp.models(kb)
    result = saturate(normalize_kb(kb), [])
    if result.is_inconsistent():
        assert not models.any()
        return
    for ind, k in interp.elem.items():
        for name in result.classes_of(ind) & kb.signature.concepts:
            assert interp.ext[name][models, k].all(), (ind, name)
        for role in kb.signature.roles:
            for other, j in interp.elem.items():
                if result.holds(Triple(ind, role, other)):
                    assert interp.rel[role][models, k, j].all(), (ind, role, other)


def test_model_enumeration_examples():
    kb = parse_kb("concept A, B\nrole r\nindividual a, b\nA <= B\nexists r.B <= A\nr(a, b)\nA(b)\n")
    interp = _Interpretations(kb, 3)
    models = interp.models(kb)
    assert models.any()
    assert interp.ext["B"][models, interp.elem["a"]].all()
    assert not interp.ext["B"][models, 2].all()
    _check_soundness(kb)

    clash = parse_kb("concept A\nindividual a\nA <= Bot\nA(a)\n")
    assert not _Interpretations(clash, 2).models(clash).any()
    _check_soundness(clash)


@pytest.mark.parametrize("seed", range(80))
def test_instance_derivations_hold_in_every_small_model(seed):
    """个体上派生的每个类与边都在所有有限模型中成立。"""
    kb = gen_random_kb(seed, SOUNDNESS_LIMITS)
    if not kb.signature.individuals:
        pytest.skip("没有个体")
    _check_soundness(kb)
