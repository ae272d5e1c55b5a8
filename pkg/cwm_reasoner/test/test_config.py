#!/usr/bin/env python3
"""启动配置加载与校验测试。"""

import sys
from pathlib import Path

import pytest
import yaml

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.config.loader import load_yaml
from src.config.manager import DEFAULT_CONFIG, ConfigManager
from src.config.validators import ReasonerConfigValidator
from src.core.exceptions import ConfigurationError

STARTUP_CONFIG = Path(__file__).resolve().parents[2] / "config" / "startup_config.yaml"


def _write_config(tmp_path: Path, data: dict) -> Path:
    config_dir = tmp_path / "config"
    config_dir.mkdir(parents=True, exist_ok=True)
    path = config_dir / "startup_config.yaml"
    path.write_text(yaml.safe_dump(data, allow_unicode=True), encoding="utf-8")
    return path


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv("CWM_CONFIG", raising=False)
    monkeypatch.delenv("CWM_CONFIG_DIR", raising=False)


def test_repository_startup_config():
    """仓库自带的启动配置与内置默认值一致。"""
    manager = ConfigManager(str(STARTUP_CONFIG))
    assert manager.config_path == STARTUP_CONFIG
    assert manager.enumeration == "gray_incremental"
    assert manager.minima == "numpy_block"
    assert manager.candidate_budget == 1 << 20
    assert manager.oracle_max_class_names == 12
    assert manager.generator_limits["max_classes"] == 5
    assert manager.reproducer_dir == STARTUP_CONFIG.parent.parent / "reports" / "fuzz"


def test_engine_options(tmp_path):
    path = _write_config(tmp_path, {
        "version": "v1",
        "reasoner": {"enumeration": "naive", "minima": "pairwise_scan", "threads": 2, "block_size": 8},
    })
    options = ConfigManager(str(path)).engine_options()
    assert options == {
        "algorithm": "naive",
        "minima": "pairwise_scan",
        "candidate_budget": 1 << 20,
        "threads": 2,
        "block_size": 8,
    }


def test_directory_argument(tmp_path):
    """显式路径为目录时查找其中的 config/startup_config.yaml。"""
    _write_config(tmp_path, {"version": "v1", "oracle": {"max_class_names": 9}})
    assert ConfigManager(str(tmp_path)).oracle_max_class_names == 9


def test_missing_explicit_config(tmp_path):
    with pytest.raises(ConfigurationError):
        ConfigManager(str(tmp_path / "nowhere.yaml"))


@pytest.mark.parametrize("override", [
    {"reasoner": {"enumeration": "bogus"}},
    {"reasoner": {"minima": "quadtree"}},
    {"reasoner": {"candidate_budget": 0}},
    {"reasoner": {"threads": -1}},
    {"reasoner": {"block_size": True}},
    {"startup": {"log_level": "loud"}},
    {"fuzz": {"limits": [1, 2]}},
    {"oracle": "twelve"},
])
def test_invalid_values_are_rejected(tmp_path, override):
    path = _write_config(tmp_path, {"version": "v1", **override})
    with pytest.raises(ConfigurationError):
        ConfigManager(str(path))


def test_validator_requires_version():
    with pytest.raises(ConfigurationError):
        ReasonerConfigValidator().validate({"reasoner": {}})
    assert ReasonerConfigValidator().validate(DEFAULT_CONFIG)


def test_env_config_file(tmp_path, monkeypatch):
    path = _write_config(tmp_path, {"version": "v1", "reasoner": {"block_size": 17}})
    monkeypatch.setenv("CWM_CONFIG", str(path))
    assert ConfigManager().block_size == 17


def test_env_config_dir(tmp_path, monkeypatch):
    path = _write_config(tmp_path, {"version": "v1", "fuzz": {"n": 3, "seed": 5}})
    monkeypatch.setenv("CWM_CONFIG_DIR", str(path.parent))
    manager = ConfigManager()
    assert (manager.fuzz_n, manager.fuzz_seed) == (3, 5)


def test_explicit_path_wins_over_env(tmp_path, monkeypatch):
    env_path = _write_config(tmp_path / "env", {"version": "v1", "reasoner": {"block_size": 11}})
    explicit = _write_config(tmp_path / "explicit", {"version": "v1", "reasoner": {"block_size": 22}})
    monkeypatch.setenv("CWM_CONFIG", str(env_path))
    assert ConfigManager(str(explicit)).block_size == 22


def test_partial_config_merges_defaults(tmp_path):
    path = _write_config(tmp_path, {"version": "v1", "fuzz": {"limits": {"max_classes": 3}}})
    manager = ConfigManager(str(path))
    assert manager.generator_limits == {"max_classes": 3}
    assert manager.fuzz_n == DEFAULT_CONFIG["fuzz"]["n"]
    assert manager.log_level == "warning"


def test_load_yaml(tmp_path):
    empty = tmp_path / "empty.yaml"
    empty.write_text("", encoding="utf-8")
    assert load_yaml(empty) == {}

    listing = tmp_path / "list.yaml"
    listing.write_text("- a\n- b\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_yaml(listing)

    broken = tmp_path / "broken.yaml"
    broken.write_text("a: [1, 2\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_yaml(broken)
