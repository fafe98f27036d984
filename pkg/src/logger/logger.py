import sys
from pathlib import Path
from loguru import logger
from src.config.settings import settings


def setup_logger(level: str | None = None):
    """配置日志记录器

    控制台输出走 stderr，stdout 留给命令行的 JSON 结果。
    """
    level = level or settings.log.LOG_LEVEL

    # 移除默认的处理器
    logger.remove()

    # 添加控制台处理器
    logger.add(
        sink=sys.stderr,
        level=level,
        format=settings.log.LOG_FORMAT,
        colorize=True,
        backtrace=True,
        diagnose=False,
    )

    # 添加文件处理器
    if settings.log.LOG_FILE:
        Path(settings.log.LOG_FILE).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            sink=settings.log.LOG_FILE,
            level=level,
            format=settings.log.LOG_FORMAT,
            rotation=settings.log.LOG_ROTATION,
            retention=settings.log.LOG_RETENTION,
            compression="zip",
            backtrace=True,
            diagnose=False,
            enqueue=True,
        )

    return logger


# 创建全局日志实例
logger = setup_logger()

# 导出日志实例
__all__ = ["logger", "setup_logger"]
