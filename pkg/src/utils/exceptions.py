"""异常定义

所有库函数只抛出这里定义的类型化异常，命令行层负责映射为退出码。
"""
from typing import Any, Optional, Sequence


class TikzCheckError(Exception):
    """基础异常"""


class ConfigError(TikzCheckError):
    """配置错误"""


class IRParseError(TikzCheckError):
    """IR JSON 语法错误，带行列号"""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class IRSchemaError(TikzCheckError):
    """IR 结构错误，指出第一个未知或缺失的字段"""

    def __init__(self, message: str, field: str):
        super().__init__(message)
        self.field = field


class IRValidationError(TikzCheckError):
    """IR 不变量校验失败"""

    def __init__(self, violations: Sequence[Any]):
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(f"IR 校验失败，共 {len(self.violations)} 项: {summary}")


class GeometryError(TikzCheckError):
    """几何计算前置条件不满足"""


class TikzParseError(TikzCheckError):
    """TikZ 语法错误，span 为 (字节偏移, 长度)"""

    def __init__(self, message: str, span: tuple[int, int]):
        super().__init__(f"{message} at byte {span[0]}")
        self.span = span


class LLMError(TikzCheckError):
    """大模型调用相关错误"""


class TransportError(LLMError):
    """可重试的传输错误（超时、429、5xx）"""

    def __init__(self, message: str, status_code: Optional[int] = None):
        super().__init__(message)
        self.status_code = status_code


class InputError(LLMError):
    """调用前即可发现的输入错误，不产生任何网络请求"""


class TranslationError(LLMError):
    """回译重试耗尽，usage 记录已经发生的调用开销"""

    def __init__(self, message: str, last_output: str, attempts: int, usage: Any = None):
        super().__init__(f"{message} (attempts={attempts})")
        self.last_output = last_output
        self.attempts = attempts
        self.usage = usage


class JudgeError(LLMError):
    """评审输出无法解析"""

    def __init__(self, message: str, last_output: str = "", attempts: int = 0, usage: Any = None):
        super().__init__(message)
        self.last_output = last_output
        self.attempts = attempts
        self.usage = usage


class JudgeUsageError(InputError):
    """评审条件缺少必需输入，在任何网络请求之前抛出"""


class BudgetExceededError(LLMError):
    """运行预算耗尽"""


class DatasetError(TikzCheckError):
    """数据集格式错误，带行号"""

    def __init__(self, message: str, lines: Sequence[int] = ()):
        super().__init__(message)
        self.lines = list(lines)


class KappaUndefinedError(TikzCheckError):
    """κ 在给定输入上无定义"""


__all__ = [
    "TikzCheckError",
    "ConfigError",
    "IRParseError",
    "IRSchemaError",
    "IRValidationError",
    "GeometryError",
    "TikzParseError",
    "LLMError",
    "TransportError",
    "InputError",
    "TranslationError",
    "JudgeError",
    "JudgeUsageError",
    "BudgetExceededError",
    "DatasetError",
    "KappaUndefinedError",
]
