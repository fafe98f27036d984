"""标签文本处理：LaTeX 清洗、标签分类、数值解析"""
import re
from enum import Enum
from typing import Optional

LATEX_SYMBOLS = {
    r"\\circ": "°",
    r"\\degree": "°",
    r"\\alpha": "α",
    r"\\beta": "β",
    r"\\gamma": "γ",
    r"\\delta": "δ",
    r"\\pi": "π",
    r"\\theta": "θ",
    r"\\phi": "φ",
    r"\\lambda": "λ",
    r"\\mu": "μ",
    r"\\sigma": "σ",
    r"\\infty": "∞",
    r"\\pm": "±",
    r"\\cdot": "·",
    r"\\times": "×",
    r"\\approx": "≈",
    r"\\angle": "∠",
}

SIZING_COMMANDS = (
    r"\\tiny", r"\\scriptsize", r"\\footnotesize", r"\\small", r"\\normalsize",
    r"\\large", r"\\Large", r"\\LARGE", r"\\huge", r"\\Huge",
)

# 数字 + 可选分数 + 可选单位
_NUMERIC = re.compile(
    r"^(?P<num>[-+]?(?:\d+(?:\.\d*)?|\.\d+))"
    r"(?:\s*/\s*(?P<den>\d+(?:\.\d+)?))?"
    r"\s*(?P<unit>(?:sq\.?\s*)?[a-zA-Zµ]{1,6}(?:\s*(?:\^?[23]|[²³]))?)?$"
)
_FIRST_NUMBER = re.compile(r"[-+]?\d+(?:\.\d+)?")


class LabelKind(str, Enum):
    ANGLE = "angle"
    NUMERIC = "numeric"
    TEXT = "text"


def clean_latex_text(text: str) -> str:
    """把节点里的 LaTeX 片段转成可读文本，例如 "$60^\\circ$" -> "60°" """
    cleaned = re.sub(r"\\[dt]?frac\s*\{([^{}]+)\}\s*\{([^{}]+)\}", r"\1/\2", text)
    for cmd in SIZING_COMMANDS:
        cleaned = re.sub(cmd + r"(?![a-zA-Z])\s*", "", cleaned)
    cleaned = re.sub(r"\^\s*\{\s*\\circ\s*\}", "°", cleaned)
    cleaned = re.sub(r"\^\s*\\circ", "°", cleaned)
    for latex_cmd, unicode_char in LATEX_SYMBOLS.items():
        cleaned = re.sub(latex_cmd + r"(?![a-zA-Z])", unicode_char, cleaned)
    cleaned = re.sub(r"\\(?:text|mathrm|textbf|mathbf|emph)\s*\{([^{}]*)\}", r"\1", cleaned)
    cleaned = re.sub(r"\$([^$]*)\$", r"\1", cleaned)
    cleaned = re.sub(r"\^\{([^}]*)\}", r"^\1", cleaned)
    cleaned = re.sub(r"_\{([^}]*)\}", r"_\1", cleaned)
    cleaned = cleaned.replace("\\,", " ").replace("~", " ").replace("{", "").replace("}", "")
    return re.sub(r"\s+", " ", cleaned).strip()


def label_kind(text: str) -> LabelKind:
    """角度标签优先，其次数值标签，其余为文字标签"""
    cleaned = clean_latex_text(text)
    if "°" in cleaned:
        return LabelKind.ANGLE
    if parse_numeric_value(cleaned) is not None:
        return LabelKind.NUMERIC
    return LabelKind.TEXT


def parse_numeric_value(cleaned: str) -> Optional[float]:
    """解析 "6 cm"、"4.5"、"1/2" 这类数值标签，不匹配时返回 None"""
    match = _NUMERIC.match(cleaned.strip())
    if not match:
        return None
    value = float(match.group("num"))
    if match.group("den") is not None:
        denominator = float(match.group("den"))
        if denominator == 0:
            return None
        value /= denominator
    return value


def parse_angle_value(cleaned: str) -> Optional[float]:
    """取角度标签中的第一个数字"""
    match = _FIRST_NUMBER.search(cleaned)
    return float(match.group(0)) if match else None


def display_length(text: str) -> int:
    """估算标签框时使用的字符数"""
    return len(clean_latex_text(text))
