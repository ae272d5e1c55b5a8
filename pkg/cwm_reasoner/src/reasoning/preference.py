"""
偏好演算

- 元素权重 W_i(x)：满足的典型性头部权重之和，非 C_i 实例为 -∞；
- 概念偏好 x <_{C_i} y 当且仅当 W_i(x) > W_i(y)；
- 全局偏好：带特殊性覆盖的Pareto组合，x ≤_{C_j} y 解读为 ¬(y <_{C_j} x)；
- 极小元提取：numpy分块向量化或两两扫描，附带环检测。
"""

import logging
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ConfigurationError, PreferenceCycleError, WeightOverflowError
from ..kb.model import WEIGHT_MAX, WEIGHT_MIN
from .normalizer import NormalizedKB
from .specificity import SpecificityRelation

logger = logging.getLogger(__name__)

# -∞ 在 int64 数组中的编码；有限权重被限制在 ±(2^63-1) 内，不会与之冲突
NEG_INF_SENTINEL = np.iinfo(np.int64).min


@total_ordering
@dataclass(frozen=True)
class ExtendedWeight:
    """整数扩展上 -∞ 的权重；value 为 None 表示 -∞。"""
    value: Optional[int] = None

    @property
    def is_neg_infinity(self) -> bool:
        return self.value is None

    def __lt__(self, other: "ExtendedWeight") -> bool:
        if not isinstance(other, ExtendedWeight):
            return NotImplemented
        if self.value is None:
            return other.value is not None
        if other.value is None:
            return False
        return self.value < other.value

    def __str__(self) -> str:
        return "-inf" if self.value is None else str(self.value)

    def encode(self):
        """JSON编码：-∞ 写作字符串 "-inf"。"""
        return "-inf" if self.value is None else self.value


def Finite(v: int) -> ExtendedWeight:
    if not (WEIGHT_MIN <= v <= WEIGHT_MAX):
        raise WeightOverflowError(f"权重 {v} 超出64位有符号整数范围")
    return ExtendedWeight(v)


NEG_INFINITY = ExtendedWeight(None)


@dataclass(frozen=True)
class WeightVector:
    """每个区分概念恰好一项，按区分概念顺序存放。"""
    entries: Tuple[Tuple[str, ExtendedWeight], ...] = ()

    def __getitem__(self, concept: str) -> ExtendedWeight:
        for name, weight in self.entries:
            if name == concept:
                return weight
        raise KeyError(concept)

    def concepts(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def as_dict(self) -> Dict[str, ExtendedWeight]:
        return dict(self.entries)

    def encode(self) -> Dict[str, object]:
        return {name: weight.encode() for name, weight in self.entries}

    def __str__(self) -> str:
        return "{" + ", ".join(f"{n}: {w}" for n, w in self.entries) + "}"


@dataclass(frozen=True)
class CandidateType:
    """原型常量 #aux 的一个饱和、一致的原子类型及其权重向量。"""
    concepts: FrozenSet[str]
    weights: WeightVector = field(default_factory=WeightVector)
    inconsistent: bool = False

    def sort_key(self) -> Tuple[str, ...]:
        return tuple(sorted(self.concepts))


def checked_sum(values: Iterable[int]) -> int:
    total = 0
    for v in values:
        total += v
        if not (WEIGHT_MIN <= total <= WEIGHT_MAX):
            raise WeightOverflowError(f"权重求和 {total} 超出64位有符号整数范围")
    return total


def weight_from_concepts(concepts: FrozenSet[str], concept: str, nkb: NormalizedKB) -> ExtendedWeight:
    if concept not in concepts:
        return NEG_INFINITY
    entries = nkb.typicality.get(concept, ())
    return ExtendedWeight(checked_sum(w for head, w in entries if head in concepts))


def weight_of(t: CandidateType, concept: str, nkb: NormalizedKB) -> ExtendedWeight:
    """W_i(x)：x 不是 C_i 实例时为 -∞，否则为满足的头部权重之和（溢出检查）。"""
    return weight_from_concepts(t.concepts, concept, nkb)


def weight_vector(concepts: FrozenSet[str], nkb: NormalizedKB) -> WeightVector:
    return WeightVector(tuple((c, weight_from_concepts(concepts, c, nkb)) for c in nkb.distinguished))


def make_candidate(concepts: Iterable[str], nkb: NormalizedKB) -> CandidateType:
    closed = frozenset(concepts)
    return CandidateType(closed, weight_vector(closed, nkb))


def prefers_cw(wx: ExtendedWeight, wy: ExtendedWeight) -> bool:
    """x <_{C_i} y 当且仅当 W_i(x) > W_i(y)。"""
    return wx > wy


def prefers_global(x: CandidateType, y: CandidateType, spec: SpecificityRelation) -> bool:
    """
    x < y 当且仅当
    (i) 存在 C_i 使 x <_{C_i} y；
    (ii) 对每个 C_j，y 在 C_j 上不严格优于 x，或存在 C_h ≻ C_j 使 x <_{C_h} y。
    """
    wx, wy = x.weights.as_dict(), y.weights.as_dict()
    concepts = x.weights.concepts()
    better = {c for c in concepts if prefers_cw(wx[c], wy[c])}
    if not better:
        return False
    for j in concepts:
        if prefers_cw(wy[j], wx[j]) and not any(h in better for h in spec.overriders(j)):
            return False
    return True


# =============================================================================
# 极小元提取
# =============================================================================

def encode_weights(cands: Sequence[CandidateType], concepts: Sequence[str]) -> np.ndarray:
    """候选权重矩阵 (n, k)，-∞ 编码为 int64 最小值。"""
    matrix = np.full((len(cands), len(concepts)), NEG_INF_SENTINEL, dtype=np.int64)
    for row, cand in enumerate(cands):
        weights = cand.weights.as_dict()
        for col, concept in enumerate(concepts):
            value = weights[concept].value
            if value is not None:
                matrix[row, col] = value
    return matrix


def specificity_matrix(spec: SpecificityRelation, concepts: Sequence[str]) -> np.ndarray:
    """S[h, j] = 1 当且仅当 C_h ≻ C_j。"""
    pos = {c: i for i, c in enumerate(concepts)}
    matrix = np.zeros((len(concepts), len(concepts)), dtype=np.int64)
    for h, j in spec.pairs:
        if h in pos and j in pos:
            matrix[pos[h], pos[j]] = 1
    return matrix


def _dominators_numpy(cands: Sequence[CandidateType], spec: SpecificityRelation,
                      block_size: int = 256) -> List[Optional[int]]:
    n = len(cands)
    concepts = cands[0].weights.concepts()
    if not concepts:
        return [None] * n
    weights = encode_weights(cands, concepts)
    spec_m = specificity_matrix(spec, concepts)
    dominator: List[Optional[int]] = [None] * n

    for start in range(0, n, block_size):
        rows = weights[start:start + block_size]
        # better[x, y, i]：x 在 C_i 上严格优于 y
        better = rows[:, None, :] > weights[None, :, :]
        worse = rows[:, None, :] < weights[None, :, :]
        override = (better.astype(np.int64) @ spec_m) > 0
        dominates = better.any(axis=2) & (~worse | override).all(axis=2)
        xs, ys = np.nonzero(dominates)
        for x, y in zip(xs.tolist(), ys.tolist()):
            if dominator[y] is None:
                dominator[y] = start + x
    return dominator


def _dominators_pairwise(cands: Sequence[CandidateType], spec: SpecificityRelation,
                         block_size: int = 0) -> List[Optional[int]]:
    dominator: List[Optional[int]] = [None] * len(cands)
    for y, cy in enumerate(cands):
        for x, cx in enumerate(cands):
            if prefers_global(cx, cy, spec):
                dominator[y] = x
                break
    return dominator


MINIMA_ALGORITHMS: Dict[str, Callable[..., List[Optional[int]]]] = {
    "numpy_block": _dominators_numpy,
    "pairwise_scan": _dominators_pairwise,
}


def _check_cycles(dominator: List[Optional[int]], cands: Sequence[CandidateType]) -> None:
    """沿支配指针行走；回到当前路径上的结点即为环。"""
    settled = set()
    for start in range(len(dominator)):
        path: List[int] = []
        on_path = set()
        node: Optional[int] = start
        while node is not None and node not in settled:
            if node in on_path:
                cycle = path[path.index(node):]
                described = " -> ".join(str(cands[i].weights) for i in cycle)
                raise PreferenceCycleError(f"全局偏好关系出现环: {described}")
            on_path.add(node)
            path.append(node)
            node = dominator[node]
        settled.update(path)


def minimal_candidates(cands: Iterable[CandidateType], spec: SpecificityRelation,
                       algorithm: str = "numpy_block", block_size: int = 256) -> Tuple[CandidateType, ...]:
    """不被任何候选全局支配的候选，按概念元组规范排序。"""
    ordered = sorted(cands, key=CandidateType.sort_key)
    if not ordered:
        return ()
    if algorithm not in MINIMA_ALGORITHMS:
        raise ConfigurationError(f"未知的极小元算法: {algorithm}")
    dominator = MINIMA_ALGORITHMS[algorithm](ordered, spec, block_size)
    _check_cycles(dominator, ordered)
    minima = tuple(c for c, d in zip(ordered, dominator) if d is None)
    logger.debug(f"极小元提取({algorithm}): {len(ordered)} 个候选 -> {len(minima)} 个极小元")
    return minima


def concept_minimal_candidates(cands: Iterable[CandidateType], concept: str) -> Tuple[CandidateType, ...]:
    """
    区分概念 C_i 上 <_{C_i} 的极小元：W_i 取最大值的候选，按概念元组规范排序。

    T(C_i) 按 <_{C_i} 解释；全局偏好只用于非区分主语。
    """
    ordered = sorted(cands, key=CandidateType.sort_key)
    if not ordered:
        return ()
    best = max(c.weights[concept] for c in ordered)
    minima = tuple(c for c in ordered if c.weights[concept] == best)
    logger.debug(f"概念 {concept} 的极小元: {len(ordered)} 个候选 -> {len(minima)} 个极小元")
    return minima
