"""自定义异常类。"""

from typing import List, Optional, Sequence


class CwmError(Exception):
    """推理机基础异常类。"""
    pass


class ConfigurationError(CwmError):
    """配置相关异常。"""
    pass


class KbParseError(CwmError):
    """知识库/查询文本解析异常，携带全部诊断信息。"""

    def __init__(self, diagnostics: Sequence["object"]) -> None:
        self.diagnostics: List[object] = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else "未知解析错误"
        super().__init__(str(first))


class KbValidationError(CwmError):
    """知识库或查询不满足良构性约束。"""

    def __init__(self, diagnostics: Sequence["object"]) -> None:
        self.diagnostics: List[object] = list(diagnostics)
        summary = "; ".join(str(d) for d in self.diagnostics[:3])
        super().__init__(f"知识库校验失败({len(self.diagnostics)}项): {summary}")


class NormalizationError(CwmError):
    """范式化相关异常。"""
    pass


class WeightOverflowError(CwmError):
    """权重求和超出64位有符号整数范围。"""
    pass


class CandidateBudgetExceeded(CwmError):
    """候选类型空间超出预算。"""

    def __init__(self, bound: int, budget: int, message: Optional[str] = None) -> None:
        self.bound = bound
        self.budget = budget
        super().__init__(message or f"候选子集数量 {bound} 超出预算 {budget}")


class OracleCapExceeded(CwmError):
    """暴力判定器的输入规模超过上限。"""
    pass


class PreferenceCycleError(CwmError):
    """全局偏好关系出现环。"""
    pass


class ReasonerError(CwmError):
    """推理流程异常（包装底层异常）。"""
    pass
