"""工具模块。"""

from .logging_config import get_logger, setup_logging
from .path_utils import ensure_dir, find_upwards, resolve_under

__all__ = [
    "setup_logging",
    "get_logger",
    "ensure_dir",
    "find_upwards",
    "resolve_under",
]
