"""TikZ 子集的词法分析：命令、坐标、选项块、文字块、路径操作、标点"""
import re
from enum import Enum
from typing import NamedTuple

from src.utils.exceptions import TikzParseError


class TokenKind(str, Enum):
    COMMAND = "command"
    COORDINATE = "coordinate"
    OPTION_BLOCK = "option_block"
    TEXT_BLOCK = "text_block"
    PATH_OP = "path_op"
    PUNCTUATION = "punctuation"


class TikzToken(NamedTuple):
    """span 为 (字节偏移, 字节长度)；text 是去掉定界符、注释并压缩空白后的内容"""
    kind: TokenKind
    lexeme: str
    span: tuple[int, int]
    text: str


# 按顺序尝试，块类记号由 _scan_balanced 单独处理
TOKEN_SPECS: list[tuple[TokenKind, re.Pattern[str]]] = [
    (TokenKind.COMMAND, re.compile(r"\\(?:[A-Za-z@]+|.)", re.DOTALL)),
    (TokenKind.PATH_OP, re.compile(r"--|\+\+|\+|-\||\|-")),
    (TokenKind.PATH_OP, re.compile(r"[A-Za-z0-9.]+")),
    (TokenKind.PUNCTUATION, re.compile(r"[^\s%]")),
]

OPENERS = {"(": ")", "[": "]", "{": "}"}
CLOSERS = {")", "]", "}"}
BLOCK_KINDS = {"(": TokenKind.COORDINATE, "[": TokenKind.OPTION_BLOCK, "{": TokenKind.TEXT_BLOCK}
WHITESPACE = re.compile(r"\s+")
SPACE_OR_COMMENT = re.compile(r"(?:\s+|%[^\n]*)+")


class _ByteOffsets:
    """字符下标到 UTF-8 字节偏移的换算"""

    def __init__(self, source: str):
        self._offsets = [0]
        total = 0
        for ch in source:
            total += len(ch.encode("utf-8"))
            self._offsets.append(total)

    def span(self, start: int, end: int) -> tuple[int, int]:
        return self._offsets[start], self._offsets[end] - self._offsets[start]


def normalize_block(inner: str) -> str:
    """去掉 % 注释（保留 \\%），压缩空白"""
    kept: list[str] = []
    i = 0
    while i < len(inner):
        ch = inner[i]
        if ch == "\\" and i + 1 < len(inner):
            kept.append(inner[i:i + 2])
            i += 2
            continue
        if ch == "%":
            newline = inner.find("\n", i)
            i = len(inner) if newline < 0 else newline + 1
            kept.append(" ")
            continue
        kept.append(ch)
        i += 1
    return WHITESPACE.sub(" ", "".join(kept)).strip()


def _scan_balanced(source: str, start: int, offsets: _ByteOffsets) -> int:
    """从开括号处扫描到与之匹配的闭括号，返回闭括号之后的下标

    圆括号块只跟踪圆括号，方括号块同时跟踪花括号，花括号块只跟踪花括号。
    """
    opener = source[start]
    closer = OPENERS[opener]
    depth = 0
    brace_depth = 0
    i = start
    while i < len(source):
        ch = source[i]
        if ch == "\\":
            i += 2
            continue
        if ch == "%":
            newline = source.find("\n", i)
            i = len(source) if newline < 0 else newline + 1
            continue
        if opener == "[" and ch == "{":
            brace_depth += 1
        elif opener == "[" and ch == "}":
            brace_depth -= 1
        elif ch == opener and brace_depth == 0:
            depth += 1
        elif ch == closer and brace_depth == 0:
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    raise TikzParseError(f"unbalanced '{opener}'", offsets.span(start, len(source)))


def tokenize(source: str) -> list[TikzToken]:
    """把源码切成记号，空白与注释不产生记号

    Raises:
        TikzParseError: 括号不配对
    """
    offsets = _ByteOffsets(source)
    tokens: list[TikzToken] = []
    pos = 0
    while True:
        gap = SPACE_OR_COMMENT.match(source, pos)
        if gap:
            pos = gap.end()
        if pos >= len(source):
            return tokens

        ch = source[pos]
        if ch in OPENERS:
            end = _scan_balanced(source, pos, offsets)
            lexeme = source[pos:end]
            tokens.append(TikzToken(BLOCK_KINDS[ch], lexeme, offsets.span(pos, end), normalize_block(lexeme[1:-1])))
            pos = end
            continue
        if ch in CLOSERS:
            raise TikzParseError(f"unexpected '{ch}'", offsets.span(pos, pos + 1))

        for kind, pattern in TOKEN_SPECS:
            match = pattern.match(source, pos)
            if match:
                lexeme = match.group(0)
                tokens.append(TikzToken(kind, lexeme, offsets.span(pos, match.end()), lexeme))
                pos = match.end()
                break


__all__ = ["TokenKind", "TikzToken", "tokenize", "normalize_block"]
