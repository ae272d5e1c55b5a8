"""配置验证器。"""

from typing import Any, Dict

from ..core.exceptions import ConfigurationError

ENUMERATION_ALGORITHMS = ("gray_incremental", "naive")
MINIMA_ALGORITHMS = ("numpy_block", "pairwise_scan")
LOG_LEVELS = ("debug", "info", "warning", "error", "critical")


class ConfigValidator:
    """配置验证器基类。"""

    def validate(self, config: Dict[str, Any]) -> bool:
        """验证配置。"""
        return True


def _section(config: Dict[str, Any], name: str) -> Dict[str, Any]:
    section = config.get(name, {})
    if section is None:
        return {}
    if not isinstance(section, dict):
        raise ConfigurationError(f"配置节 {name} 必须是字典")
    return section


def _positive_int(section: Dict[str, Any], key: str, where: str, minimum: int = 1) -> None:
    if key not in section:
        return
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigurationError(f"{where}.{key} 必须是不小于 {minimum} 的整数，实际为 {value!r}")


class ReasonerConfigValidator(ConfigValidator):
    """推理机启动配置验证器。"""

    def validate(self, config: Dict[str, Any]) -> bool:
        if "version" not in config:
            raise ConfigurationError("启动配置缺少必需字段: version")

        startup = _section(config, "startup")
        level = str(startup.get("log_level", "warning")).lower()
        if level not in LOG_LEVELS:
            raise ConfigurationError(f"startup.log_level 必须是 {LOG_LEVELS} 之一，实际为 {level!r}")

        reasoner = _section(config, "reasoner")
        _positive_int(reasoner, "candidate_budget", "reasoner")
        _positive_int(reasoner, "threads", "reasoner", minimum=0)
        _positive_int(reasoner, "block_size", "reasoner")
        if reasoner.get("enumeration", ENUMERATION_ALGORITHMS[0]) not in ENUMERATION_ALGORITHMS:
            raise ConfigurationError(f"reasoner.enumeration 必须是 {ENUMERATION_ALGORITHMS} 之一")
        if reasoner.get("minima", MINIMA_ALGORITHMS[0]) not in MINIMA_ALGORITHMS:
            raise ConfigurationError(f"reasoner.minima 必须是 {MINIMA_ALGORITHMS} 之一")

        oracle = _section(config, "oracle")
        _positive_int(oracle, "max_class_names", "oracle")

        fuzz = _section(config, "fuzz")
        _positive_int(fuzz, "n", "fuzz", minimum=0)
        _positive_int(fuzz, "seed", "fuzz", minimum=0)
        limits = fuzz.get("limits", {}) or {}
        if not isinstance(limits, dict):
            raise ConfigurationError("fuzz.limits 必须是字典")
        return True
