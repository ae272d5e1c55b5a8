"""配置加载器。"""

from pathlib import Path
from typing import Any, Dict, Union

import yaml

from ..core.exceptions import ConfigurationError


def load_yaml(file_path: Union[str, Path]) -> Dict[str, Any]:
    """加载 YAML 文件（空文件视为空配置）。"""
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigurationError(f"无法加载 YAML 文件 {file_path}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"YAML 文件 {file_path} 的顶层必须是映射")
    return data


class ConfigLoader:
    """配置加载器类。"""

    def __init__(self, base_dir: Union[str, Path] = ".") -> None:
        self.base_dir = Path(base_dir)

    def load_startup_config(self, config_file: Union[str, Path]) -> Dict[str, Any]:
        """加载推理机启动配置。"""
        path = Path(config_file)
        if not path.is_absolute():
            path = self.base_dir / path
        if not path.exists():
            raise ConfigurationError(f"文件不存在: {path}")
        return load_yaml(path)
