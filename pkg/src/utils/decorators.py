from functools import wraps
import asyncio
import inspect
import time
from typing import Any, Awaitable, Callable, TypeVar, ParamSpec
from src.logger.logger import logger

P = ParamSpec("P")
R = TypeVar("R")


def log_function_call(level: str = "DEBUG") -> Callable[[Callable[P, R]], Callable[P, R]]:
    """函数调用日志装饰器，同时支持普通函数和协程函数

    Args:
        level: 日志级别

    Returns:
        装饰后的函数
    """
    def decorator(func: Callable[P, R]) -> Callable[P, R]:
        if inspect.iscoroutinefunction(func):
            @wraps(func)
            async def async_wrapper(*args: P.args, **kwargs: P.kwargs) -> Any:
                start_time = time.perf_counter()
                logger.log(level, "开始执行函数: {}", func.__name__)
                try:
                    result = await func(*args, **kwargs)
                except Exception as e:
                    logger.log(
                        "ERROR",
                        "函数 {} 执行异常, 耗时: {:.3f}秒, 异常信息: {}",
                        func.__name__,
                        time.perf_counter() - start_time,
                        str(e)
                    )
                    raise
                logger.log(level, "函数 {} 执行完成, 耗时: {:.3f}秒", func.__name__, time.perf_counter() - start_time)
                return result
            return async_wrapper  # type: ignore[return-value]

        @wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            start_time = time.perf_counter()
            logger.log(level, "开始执行函数: {}", func.__name__)
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                logger.log(
                    "ERROR",
                    "函数 {} 执行异常, 耗时: {:.3f}秒, 异常信息: {}",
                    func.__name__,
                    time.perf_counter() - start_time,
                    str(e)
                )
                raise
            logger.log(level, "函数 {} 执行完成, 耗时: {:.3f}秒", func.__name__, time.perf_counter() - start_time)
            return result
        return wrapper
    return decorator


def async_retry(
    max_retries: int = 3,
    delay: float = 1.0,
    backoff: float = 2.0,
    exceptions: tuple = (Exception,),
    sleep: Callable[[float], Awaitable[Any]] = asyncio.sleep,
) -> Callable[[Callable[P, Awaitable[R]]], Callable[P, Awaitable[R]]]:
    """协程重试装饰器（指数退避）

    首次调用之外最多再重试 max_retries 次。

    Args:
        max_retries: 最大重试次数
        delay: 初始延迟时间(秒)
        backoff: 延迟时间的增长倍数
        exceptions: 需要重试的异常类型
        sleep: 等待函数，测试中可替换

    Returns:
        装饰后的协程函数
    """
    def decorator(func: Callable[P, Awaitable[R]]) -> Callable[P, Awaitable[R]]:
        @wraps(func)
        async def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            retry_count = 0
            current_delay = delay

            while True:
                try:
                    return await func(*args, **kwargs)
                except exceptions as e:
                    if retry_count >= max_retries:
                        logger.error(
                            "函数 {} 重试 {} 次后仍然失败: {}",
                            func.__name__,
                            max_retries,
                            str(e)
                        )
                        raise

                    retry_count += 1
                    logger.warning(
                        "函数 {} 执行失败，{}/{} 次重试，等待 {} 秒: {}",
                        func.__name__,
                        retry_count,
                        max_retries,
                        current_delay,
                        str(e)
                    )

                    await sleep(current_delay)
                    current_delay *= backoff
        return wrapper
    return decorator
