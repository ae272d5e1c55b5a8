"""配置管理器。"""

import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional

from ..core.exceptions import ConfigurationError
from ..utils.logging_config import get_logger
from ..utils.path_utils import find_upwards, resolve_under
from .loader import ConfigLoader
from .validators import ReasonerConfigValidator

STARTUP_CONFIG_REL = os.path.join("config", "startup_config.yaml")

DEFAULT_CONFIG: Dict[str, Any] = {
    "version": "v1",
    "startup": {"log_level": "warning"},
    "reasoner": {
        "candidate_budget": 1 << 20,
        "threads": 0,
        "enumeration": "gray_incremental",
        "minima": "numpy_block",
        "block_size": 256,
    },
    "oracle": {"max_class_names": 12},
    "fuzz": {
        "n": 100,
        "seed": 42,
        "reproducer_dir": "reports/fuzz",
        "limits": {},
    },
}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    result = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(result.get(key), dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value
    return result


class ConfigManager:
    """配置管理器：定位并加载启动配置，缺省时使用内置默认值。"""

    def __init__(self, startup_config_path: Optional[str] = None):
        """
        初始化配置管理器。

        Args:
            startup_config_path: 启动配置文件路径（可为包含 config/ 的目录）
        """
        self.logger = get_logger()
        self.config_path = self._locate(startup_config_path)
        self.base_dir = self.config_path.parent.parent if self.config_path else Path(os.getcwd())

        loaded: Dict[str, Any] = {}
        if self.config_path is not None:
            loaded = ConfigLoader(self.base_dir).load_startup_config(self.config_path)
        else:
            self.logger.debug("未找到启动配置文件，使用内置默认值")
        self.startup_config = _deep_merge(DEFAULT_CONFIG, loaded)
        ReasonerConfigValidator().validate(self.startup_config)

        startup = self.startup_config["startup"]
        reasoner = self.startup_config["reasoner"]
        oracle = self.startup_config["oracle"]
        fuzz = self.startup_config["fuzz"]

        self.log_level = str(startup.get("log_level", "warning")).lower()
        self.candidate_budget = int(reasoner["candidate_budget"])
        self.threads = int(reasoner["threads"])
        self.enumeration = reasoner["enumeration"]
        self.minima = reasoner["minima"]
        self.block_size = int(reasoner["block_size"])
        self.oracle_max_class_names = int(oracle["max_class_names"])
        self.fuzz_n = int(fuzz["n"])
        self.fuzz_seed = int(fuzz["seed"])
        self.generator_limits: Dict[str, Any] = dict(fuzz.get("limits") or {})
        self.reproducer_dir = resolve_under(self.base_dir, fuzz["reproducer_dir"])

    @staticmethod
    def _locate(explicit: Optional[str]) -> Optional[Path]:
        """显式路径 → CWM_CONFIG → CWM_CONFIG_DIR → 向上查找 config/startup_config.yaml。"""
        if explicit:
            path = Path(explicit)
            if path.is_dir():
                path = path / STARTUP_CONFIG_REL
            if not path.exists():
                raise ConfigurationError(f"无法加载启动配置 {explicit}: 文件不存在")
            return path

        env_file = os.getenv("CWM_CONFIG")
        if env_file and Path(env_file).exists():
            return Path(env_file)

        env_dir = os.getenv("CWM_CONFIG_DIR")
        if env_dir:
            candidate = Path(env_dir) / "startup_config.yaml"
            if candidate.exists():
                return candidate

        return find_upwards(STARTUP_CONFIG_REL)

    def engine_options(self) -> Dict[str, Any]:
        """EntailmentEngine 的构造参数。"""
        return {
            "algorithm": self.enumeration,
            "minima": self.minima,
            "candidate_budget": self.candidate_budget,
            "threads": self.threads,
            "block_size": self.block_size,
        }
