"""日志配置：彩色控制台输出到标准错误，标准输出只留给推理结果。"""

import logging
import sys

import colorlog

LOGGER_NAME = "cwm"

LOG_COLORS = {
    'DEBUG': 'cyan',
    'INFO': 'green',
    'WARNING': 'yellow',
    'ERROR': 'red',
    'CRITICAL': 'red,bg_white',
}


def setup_logging(log_level: str = "warning") -> logging.Logger:
    """
    按级别名配置根 logger 与项目 logger。

    Args:
        log_level: debug / info / warning / error / critical，未知名称按 warning 处理

    Returns:
        项目 logger（名为 "cwm"）
    """
    level = getattr(logging, log_level.upper(), logging.WARNING)

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(colorlog.ColoredFormatter(
        fmt='%(log_color)s%(asctime)s | %(levelname)-8s | %(name)s - %(message)s',
        datefmt='%H:%M:%S',
        log_colors=LOG_COLORS,
    ))

    # 重复调用时替换处理器，避免重复输出
    root = logging.getLogger()
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel(level)

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    return logger


def get_logger() -> logging.Logger:
    return logging.getLogger(LOGGER_NAME)
