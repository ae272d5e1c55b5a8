"""判定过程的公共接口。"""

from abc import abstractmethod
from typing import Any, Callable, Dict

from .base_logger import BaseLogger
from .exceptions import ConfigurationError


class BaseAlgorithmTask(BaseLogger):
    """按名称登记可互换的算法实现，构造时选定其中之一。"""

    def __init__(self, algorithm: str, **kwargs: Any) -> None:
        super().__init__(**kwargs)
        self.algorithm = algorithm
        self._algorithms: Dict[str, Callable[..., Any]] = {}
        self._register_algorithms()

    def _register_algorithms(self) -> None:
        """子类在此登记算法。"""

    def _register_algorithm(self, name: str, func: Callable[..., Any]) -> None:
        self._algorithms[name] = func

    def _execute_algorithm(self, name: str, *args, **kwargs) -> Any:
        try:
            func = self._algorithms[name]
        except KeyError:
            raise ConfigurationError(
                f"未知算法 '{name}'，可选: {sorted(self._algorithms)}"
            ) from None
        return func(*args, **kwargs)


class BaseDecisionProcedure(BaseAlgorithmTask):
    """蕴涵判定过程（主引擎与暴力判定器共用）。"""

    @abstractmethod
    def decide(self, kb: Any, query: Any) -> Any:
        """判定查询是否被知识库 cw^m-蕴涵，返回 EntailmentVerdict。"""
