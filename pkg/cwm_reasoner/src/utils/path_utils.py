"""路径工具函数。"""

import os
from pathlib import Path
from typing import Iterable, Optional, Union


def find_upwards(relative: Union[str, Path], starts: Optional[Iterable[Path]] = None) -> Optional[Path]:
    """从若干起点逐级向上查找相对路径，返回第一个存在的文件。"""
    if starts is None:
        starts = [Path(__file__).resolve().parent, Path(os.getcwd()).resolve()]
    for start in starts:
        for parent in [start, *start.parents]:
            candidate = parent / relative
            if candidate.exists():
                return candidate
    return None


def resolve_under(base_dir: Union[str, Path], file_path: Union[str, Path]) -> Path:
    """相对路径以 base_dir 为基准，绝对路径原样返回。"""
    path = Path(file_path)
    return path if path.is_absolute() else Path(base_dir) / path


def ensure_dir(dir_path: Union[str, Path]) -> Path:
    """确保目录存在。"""
    path = Path(dir_path)
    path.mkdir(parents=True, exist_ok=True)
    return path
