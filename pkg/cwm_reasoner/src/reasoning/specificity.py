"""区分概念之间的特殊性关系 ≻。"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Tuple

from .normalizer import NormalizedKB
from .saturation import subsumes_in, subsumption_engine

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpecificityRelation:
    """严格关系：(h, j) ∈ pairs 表示 C_h ≻ C_j（C_h 比 C_j 更特殊）。"""
    concepts: Tuple[str, ...] = ()
    pairs: FrozenSet[Tuple[str, str]] = frozenset()

    def more_specific(self, h: str, j: str) -> bool:
        return (h, j) in self.pairs

    def overriders(self, j: str) -> Tuple[str, ...]:
        """所有比 j 更特殊的区分概念。"""
        return tuple(h for h in self.concepts if (h, j) in self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)


def compute_specificity(nkb: NormalizedKB) -> SpecificityRelation:
    """C_h ≻ C_j 当且仅当 C_h ⊑ C_j 且 C_j ⋢ C_h。"""
    names = list(nkb.distinguished)
    if len(names) < 2:
        return SpecificityRelation(tuple(names))
    engine = subsumption_engine(nkb, names)
    pairs = set()
    for h in names:
        for j in names:
            if h != j and subsumes_in(engine, h, j) and not subsumes_in(engine, j, h):
                pairs.add((h, j))
    logger.debug(f"特殊性关系: {sorted(pairs)}")
    return SpecificityRelation(tuple(names), frozenset(pairs))


def is_strict_partial_order(pairs: Iterable[Tuple[str, str]]) -> bool:
    """非自反且传递（由此也非对称）。"""
    relation = set(pairs)
    if any(a == b for a, b in relation):
        return False
    for a, b in relation:
        for c, d in relation:
            if b == c and (a, d) not in relation:
                return False
    return True
