"""
随机知识库生成器

同一种子生成结构相同的知识库；生成结果总能通过 validate_kb。
约 chain_fraction 比例的知识库在区分概念之间加入严格包含链，以覆盖特殊性覆盖。
不生成名词概念。
"""

import random
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, validator

from ..kb.model import (
    Atomic, Bot, ConceptAssertion, ConceptExpr, Conj, Exists, KnowledgeBase, Query,
    RoleAssertion, Signature, StrictAxiom, Top, WeightedInclusion,
)


class GeneratorLimits(BaseModel):
    """随机知识库的规模上限。"""
    max_classes: int = 5
    max_roles: int = 2
    max_inclusions: int = 6
    max_strict: int = 4
    max_individuals: int = 2
    max_assertions: int = 2
    min_weight: int = -100
    max_weight: int = 100
    chain_fraction: float = 0.2
    max_existential_heads: int = 2

    @validator("max_classes")
    def at_least_one_class(cls, v):
        if v < 1:
            raise ValueError("max_classes 至少为 1")
        return v

    @validator("max_roles", "max_inclusions", "max_strict", "max_individuals",
               "max_assertions", "max_existential_heads")
    def non_negative(cls, v):
        if v < 0:
            raise ValueError("上限不能为负数")
        return v

    @validator("max_weight")
    def weight_range(cls, v, values):
        if "min_weight" in values and v < values["min_weight"]:
            raise ValueError("max_weight 不能小于 min_weight")
        return v

    @validator("chain_fraction")
    def fraction(cls, v):
        if not 0.0 <= v <= 1.0:
            raise ValueError("chain_fraction 必须在 [0, 1] 内")
        return v


class _KbBuilder:
    def __init__(self, rng: random.Random, limits: GeneratorLimits):
        self.rng = rng
        self.limits = limits
        self.classes = [f"C{i}" for i in range(rng.randint(1, limits.max_classes))]
        self.roles = [f"r{i}" for i in range(rng.randint(0, limits.max_roles))]
        self.individuals = [f"a{i}" for i in range(rng.randint(0, limits.max_individuals))]

    def atom(self) -> Atomic:
        return Atomic(self.rng.choice(self.classes))

    def strict_axiom(self) -> StrictAxiom:
        shapes = ["sub", "sub", "conj", "bot"]
        if self.roles:
            shapes += ["exists_left", "exists_right", "exists_right"]
        shape = self.rng.choice(shapes)
        if shape == "conj":
            return StrictAxiom(Conj(self.atom(), self.atom()), self.atom())
        if shape == "exists_left":
            return StrictAxiom(Exists(self.rng.choice(self.roles), self.atom()), self.atom())
        if shape == "exists_right":
            return StrictAxiom(self.atom(), Exists(self.rng.choice(self.roles), self.atom()))
        if shape == "bot" and self.rng.random() < 0.3:
            return StrictAxiom(self.atom(), Bot())
        return StrictAxiom(self.atom(), self.atom())

    def head(self, existential_left: int) -> ConceptExpr:
        if self.roles and existential_left > 0 and self.rng.random() < 0.3:
            filler = Top() if self.rng.random() < 0.3 else self.atom()
            return Exists(self.rng.choice(self.roles), filler)
        return self.atom()

    def build(self) -> KnowledgeBase:
        rng, limits = self.rng, self.limits
        distinguished: List[str] = []
        if limits.max_inclusions > 0:
            count = rng.randint(1, min(len(self.classes), limits.max_inclusions, 3))
            distinguished = rng.sample(self.classes, count)

        strict: List[StrictAxiom] = []
        if len(distinguished) >= 2 and limits.max_strict > 0 and rng.random() < limits.chain_fraction:
            strict.append(StrictAxiom(Atomic(distinguished[1]), Atomic(distinguished[0])))
        for _ in range(rng.randint(0, limits.max_strict - len(strict))):
            strict.append(self.strict_axiom())

        defeasible: Dict[str, List[WeightedInclusion]] = {name: [] for name in distinguished}
        existential_left = limits.max_existential_heads
        total = rng.randint(len(distinguished), limits.max_inclusions) if distinguished else 0
        for i in range(total):
            # 每个区分概念至少一条包含
            subject = distinguished[i] if i < len(distinguished) else rng.choice(distinguished)
            head = self.head(existential_left)
            if isinstance(head, Exists):
                existential_left -= 1
            weight = rng.randint(limits.min_weight, limits.max_weight)
            defeasible[subject].append(WeightedInclusion(subject, head, weight))

        abox = []
        if self.individuals:
            for _ in range(rng.randint(0, limits.max_assertions)):
                if self.roles and rng.random() < 0.4:
                    abox.append(RoleAssertion(rng.choice(self.roles), rng.choice(self.individuals),
                                              rng.choice(self.individuals)))
                else:
                    abox.append(ConceptAssertion(self.atom(), rng.choice(self.individuals)))

        return KnowledgeBase(
            distinguished=tuple(distinguished),
            strict=tuple(strict),
            defeasible={name: tuple(incs) for name, incs in defeasible.items()},
            abox=tuple(abox),
            signature=Signature(frozenset(self.classes), frozenset(self.roles), frozenset(self.individuals)),
        )


def gen_random_kb(seed: int, limits: Optional[GeneratorLimits] = None) -> KnowledgeBase:
    """按种子确定性地生成一个规模受限的合法知识库。"""
    return _KbBuilder(random.Random(seed), limits or GeneratorLimits()).build()


def gen_random_query(rng: random.Random, kb: KnowledgeBase) -> Query:
    """在知识库签名上随机生成典型性查询（宾语偶尔为存在限定）。"""
    classes = sorted(kb.signature.concepts)
    roles = sorted(kb.signature.roles)
    if kb.distinguished and rng.random() < 0.7:
        subject: ConceptExpr = Atomic(rng.choice(kb.distinguished))
    else:
        subject = Atomic(rng.choice(classes))
    if roles and rng.random() < 0.15:
        obj: ConceptExpr = Exists(rng.choice(roles), Atomic(rng.choice(classes)))
    else:
        obj = Atomic(rng.choice(classes))
    return Query(subject, obj, typicality=True)


def gen_case(seed: int, index: int, limits: Optional[GeneratorLimits] = None) -> Tuple[KnowledgeBase, Query]:
    """第 index 个模糊测试用例（知识库与查询）。"""
    case_seed = seed * 1_000_003 + index
    kb = gen_random_kb(case_seed, limits)
    query = gen_random_query(random.Random(case_seed + 1), kb)
    return kb, query
