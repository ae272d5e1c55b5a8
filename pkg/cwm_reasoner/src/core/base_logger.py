"""推理组件日志基类与装饰器。"""

import time
from abc import ABC
from functools import wraps
from typing import Any, Dict

from .exceptions import CwmError, ReasonerError


class BaseLogger(ABC):
    """推理组件基类：持有项目 logger，统一输出统计信息。"""

    def __init__(self, **kwargs: Any) -> None:
        from ..utils.logging_config import get_logger
        self.logger = get_logger()

    def _log_stats(self, component_name: str, stats: Dict[str, Any]) -> None:
        summary = ", ".join(f"{k}={v}" for k, v in stats.items())
        self.logger.info(f"  {component_name} 统计: {summary}")


def handle_reasoner_errors(operation_name: str):
    """项目内异常原样抛出，其余异常包装为 ReasonerError 并保留异常链。"""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except CwmError:
                raise
            except Exception as e:
                raise ReasonerError(f"{operation_name}失败: {e}") from e
        return wrapper
    return decorator


def log_operation(operation_name: str):
    """记录操作的开始、结束与耗时；失败时以 warning 级别记录。"""
    def decorator(func):
        @wraps(func)
        def wrapper(self, *args, **kwargs):
            self.logger.info(f"开始{operation_name}")
            start = time.perf_counter()
            try:
                result = func(self, *args, **kwargs)
            except CwmError as e:
                self.logger.warning(f"{operation_name}中止: {e}")
                raise
            self.logger.info(f"{operation_name}完成，用时 {time.perf_counter() - start:.3f}s")
            return result
        return wrapper
    return decorator
