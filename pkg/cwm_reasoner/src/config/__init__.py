"""配置管理模块。"""

from .loader import ConfigLoader, load_yaml
from .manager import ConfigManager
from .validators import ConfigValidator, ReasonerConfigValidator

__all__ = [
    "ConfigLoader",
    "ConfigManager",
    "load_yaml",
    "ConfigValidator",
    "ReasonerConfigValidator",
]
