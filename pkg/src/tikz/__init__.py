from .lexer import TikzToken, TokenKind, tokenize
from .parser import ParseOutcome, SkippedConstruct, SubsetReport, parse_tikz, subset_report

__all__ = [
    "TikzToken",
    "TokenKind",
    "tokenize",
    "ParseOutcome",
    "SkippedConstruct",
    "SubsetReport",
    "parse_tikz",
    "subset_report",
]
