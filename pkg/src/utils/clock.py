"""时钟抽象：正式运行用系统时钟，测试和模拟运行用固定时钟保证清单可复现"""
import time
from datetime import datetime, timezone
from typing import Protocol


class Clock(Protocol):
    def now(self) -> datetime: ...

    def monotonic(self) -> float: ...


class SystemClock:
    def now(self) -> datetime:
        return datetime.now(timezone.utc)

    def monotonic(self) -> float:
        return time.perf_counter()


class FrozenClock:
    """时间永远停在 instant，耗时恒为 0"""

    def __init__(self, instant: datetime = datetime(2025, 1, 1, tzinfo=timezone.utc)):
        self.instant = instant

    def now(self) -> datetime:
        return self.instant

    def monotonic(self) -> float:
        return 0.0


__all__ = ["Clock", "SystemClock", "FrozenClock"]
