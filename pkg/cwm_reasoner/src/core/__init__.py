"""核心抽象层模块。"""

from .base_logger import BaseLogger, handle_reasoner_errors, log_operation
from .exceptions import (
    CandidateBudgetExceeded, ConfigurationError, CwmError, KbParseError, KbValidationError,
    NormalizationError, OracleCapExceeded, PreferenceCycleError, ReasonerError, WeightOverflowError,
)
from .interfaces import BaseAlgorithmTask, BaseDecisionProcedure

__all__ = [
    # 基类
    "BaseLogger",
    "BaseAlgorithmTask",
    "BaseDecisionProcedure",
    "handle_reasoner_errors",
    "log_operation",
    # 异常类
    "CwmError",
    "ConfigurationError",
    "KbParseError",
    "KbValidationError",
    "NormalizationError",
    "WeightOverflowError",
    "CandidateBudgetExceeded",
    "OracleCapExceeded",
    "PreferenceCycleError",
    "ReasonerError",
]
