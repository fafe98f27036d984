"""TikZ 子集到 IR 的确定性翻译

只识别常见几何构造。子集之外的语句整体跳过并记录原因，不影响已输出的几何；
括号不配对或坐标格式错误属于硬错误，抛出 TikzParseError。
"""
import math
import re
from functools import partial
from typing import Any, Callable, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from src.geometry.kernel import bbox_of, bbox_union, unit_vector
from src.ir.model import (
    CM_TO_PT,
    EM_PT,
    QUANTUM_DIGITS,
    Anchor,
    Arc,
    BBox,
    Circle,
    Face3D,
    LineSegment,
    Point,
    Point3D,
    Polygon,
    Rect,
    RightAngleSymbol,
    TextNode,
    TikzIR,
    estimate_text_bbox,
)
from src.ir.validation import validate_ir
from src.logger.logger import logger
from src.utils.exceptions import TikzParseError

from .lexer import TikzToken, TokenKind, tokenize

Pt = Union[Point, Point3D]

PICTURE_ENV = "tikzpicture"

# TikZ 默认 z 向量为 (-3.85mm, -3.85mm)
Z_SLANT = 0.385

UNIT_PT = {
    "pt": 1.0,
    "cm": CM_TO_PT,
    "mm": CM_TO_PT / 10,
    "in": 72.27,
    "bp": 72.27 / 72,
    "em": EM_PT,
}

DEFAULT_ANGLE_RADIUS_PT = 5 * UNIT_PT["mm"]

# standalone 把页面裁到图形包围盒外加 border；包围盒含半个默认线宽 0.4pt
STANDALONE_CLASS = "standalone"
DEFAULT_BORDER_PT = 0.5 * UNIT_PT["bp"]
HALF_LINE_WIDTH_PT = 0.2
DEFAULT_ANGLE_ECCENTRICITY = 0.6

ID_PREFIX = {
    "clip_regions": "clip",
    "nodes": "node",
    "segments": "seg",
    "shapes": "poly",
    "rectangles": "rect",
    "circles": "circle",
    "arcs": "arc",
    "right_angle_symbols": "ras",
    "faces3d": "face",
}

PATH_COMMANDS = {
    "\\draw": "draw",
    "\\filldraw": "draw",
    "\\fill": "draw",
    "\\shade": "draw",
    "\\shadedraw": "draw",
    "\\path": "path",
    "\\clip": "clip",
    "\\useasboundingbox": "bbox",
}

# \node 等价于 \path node，其余同理
SHORTHAND_COMMANDS = {"\\node": "node", "\\coordinate": "coordinate", "\\pic": "pic"}

GEOMETRIC_KEYS = frozenset({
    "scale", "xscale", "yscale", "shift", "xshift", "yshift", "rotate", "rotate around",
    "x", "y", "z", "cm", "xslant", "yslant", "transform canvas", "turn",
})

LINE_OPS = ("--", "-|", "|-")

DIRECTION_ANCHORS = {
    "above": Anchor.SOUTH,
    "below": Anchor.NORTH,
    "left": Anchor.EAST,
    "right": Anchor.WEST,
    "above left": Anchor.SE,
    "above right": Anchor.SW,
    "below left": Anchor.NE,
    "below right": Anchor.NW,
}

DIRECTION_VECTORS = {
    "above": (0.0, 1.0),
    "below": (0.0, -1.0),
    "left": (-1.0, 0.0),
    "right": (1.0, 0.0),
    "above left": (-1.0, 1.0),
    "above right": (1.0, 1.0),
    "below left": (-1.0, -1.0),
    "below right": (1.0, -1.0),
}

# label 贴在父节点边框上的位置
BORDER_FRACTIONS = {
    "above": (0.5, 1.0),
    "below": (0.5, 0.0),
    "left": (0.0, 0.5),
    "right": (1.0, 0.5),
    "above left": (0.0, 1.0),
    "above right": (1.0, 1.0),
    "below left": (0.0, 0.0),
    "below right": (1.0, 0.0),
}

COMPASS_DIRECTIONS = {
    "north": "above",
    "south": "below",
    "east": "right",
    "west": "left",
    "north east": "above right",
    "north west": "above left",
    "south east": "below right",
    "south west": "below left",
}

# 从 0° 起每 45° 一个方向
ANGLE_DIRECTIONS = ("right", "above right", "above", "above left", "left", "below left", "below", "below right")

TIKZ_ANCHORS = {
    "center": Anchor.CENTER,
    "base": Anchor.CENTER,
    "mid": Anchor.CENTER,
    "text": Anchor.CENTER,
    "north": Anchor.NORTH,
    "south": Anchor.SOUTH,
    "east": Anchor.EAST,
    "west": Anchor.WEST,
    "north east": Anchor.NE,
    "north west": Anchor.NW,
    "south east": Anchor.SE,
    "south west": Anchor.SW,
}

POS_KEYS = {
    "at start": 0.0,
    "very near start": 0.125,
    "near start": 0.25,
    "midway": 0.5,
    "near end": 0.75,
    "very near end": 0.875,
    "at end": 1.0,
}

_NUMBER = re.compile(r"^[-+]?(?:\d+(?:\.\d*)?|\.\d+)$")
_LENGTH = re.compile(r"^([-+]?(?:\d+(?:\.\d*)?|\.\d+))\s*(pt|cm|mm|in|bp|em)?$")
_PIC_ANGLE = re.compile(r"^(right angle|angle)\s*=\s*(.+?)\s*--\s*(.+?)\s*--\s*(.+?)$")
_QUOTED = re.compile(r'^"(.*?)"')
_LABEL_STYLE = re.compile(r"^\[[^\]]*\]\s*")
_LABEL = re.compile(
    r"^(above left|above right|below left|below right|above|below|left|right|"
    r"north east|north west|south east|south west|north|south|east|west|"
    r"[-+]?\d+(?:\.\d+)?)\s*:(.*)$",
    re.DOTALL,
)


class SkippedConstruct(BaseModel):
    """子集之外的构造"""

    model_config = ConfigDict(frozen=True)

    span: tuple[int, int] = Field(description="(字节偏移, 字节长度)")
    reason: str
    partial: bool = Field(default=False, description="语句其余部分照常解析，只丢弃了这一部分")


class ParseOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    ir: TikzIR
    skipped: tuple[SkippedConstruct, ...] = ()
    statements: int = Field(default=0, description="图形环境内的顶层语句数")
    skipped_statements: int = 0

    def skips_to_dict(self) -> list[dict[str, Any]]:
        return [s.model_dump() for s in self.skipped]


class SubsetReport(BaseModel):
    """子集覆盖率，用于语料分拣"""

    model_config = ConfigDict(frozen=True)

    statements: int
    parsed: int
    skipped: int
    coverage: float
    reasons: tuple[str, ...] = ()
    error: Optional[str] = None


class _Unsupported(Exception):
    """语句超出子集，整条跳过"""


# ---------------------------------------------------------------- helpers

def _q(value: float) -> float:
    # + 0.0 把 -0.0 规整成 0.0
    return round(value, QUANTUM_DIGITS) + 0.0


def _point(x: float, y: float) -> Point:
    return Point(x=_q(x), y=_q(y))


def _point3(x: float, y: float, z: float) -> Point3D:
    return Point3D(x=_q(x), y=_q(y), z=_q(z))


def _flat(p: Pt) -> Point:
    """三维点按默认 z 向量投影"""
    if isinstance(p, Point3D):
        return _point(p.x - Z_SLANT * p.z, p.y - Z_SLANT * p.z)
    return p


def _add(base: Pt, offset: Pt) -> Pt:
    if isinstance(base, Point3D) or isinstance(offset, Point3D):
        if not (isinstance(base, Point3D) and isinstance(offset, Point3D)):
            raise _Unsupported("mixed 2D/3D relative coordinate")
        return _point3(base.x + offset.x, base.y + offset.y, base.z + offset.z)
    return _point(base.x + offset.x, base.y + offset.y)


def _along(legs: list[tuple[Point, Point]], t: float) -> Point:
    """沿一段或两段折线取参数 t 处的点，每段占相同参数区间"""
    share = 1.0 / len(legs)
    index = min(int(t / share), len(legs) - 1) if t > 0 else 0
    a, b = legs[index]
    local = (t - index * share) / share
    return _point(a.x + local * (b.x - a.x), a.y + local * (b.y - a.y))


def _strip_braces(value: str) -> str:
    value = value.strip()
    if value.startswith("{") and value.endswith("}"):
        depth = 0
        for i, ch in enumerate(value):
            depth += {"{": 1, "}": -1}.get(ch, 0)
            if depth == 0 and i < len(value) - 1:
                return value
        return value[1:-1].strip()
    return value


def _split_top_level(text: str, sep: str, limit: int = -1) -> list[str]:
    parts: list[str] = []
    depth = 0
    quoted = False
    start = 0
    for i, ch in enumerate(text):
        if ch == '"':
            quoted = not quoted
        elif not quoted and ch in "{[(":
            depth += 1
        elif not quoted and ch in "}])":
            depth -= 1
        elif ch == sep and depth == 0 and not quoted and (limit < 0 or len(parts) < limit):
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def split_options(text: str) -> list[tuple[str, Optional[str]]]:
    """拆分选项块为 (键, 值)；带引号的 pic 标签以键 '"' 返回原文"""
    options: list[tuple[str, Optional[str]]] = []
    for item in _split_top_level(text, ","):
        item = item.strip()
        if not item:
            continue
        if item.startswith('"'):
            options.append(('"', item))
            continue
        parts = _split_top_level(item, "=", limit=1)
        key = re.sub(r"\s+", " ", parts[0]).strip()
        value = _strip_braces(parts[1]) if len(parts) > 1 else None
        options.append((key, value))
    return options


def _span_of(tokens: list[TikzToken]) -> tuple[int, int]:
    start = tokens[0].span[0]
    end = tokens[-1].span[0] + tokens[-1].span[1]
    return start, end - start


def split_statements(tokens: list[TikzToken]) -> list[list[TikzToken]]:
    """按顶层分号切分语句；\\begin/\\end 单独成句，\\foreach 在第二个花括号块处结束"""
    statements: list[list[TikzToken]] = []
    current: list[TikzToken] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if (not current and tok.kind == TokenKind.COMMAND and tok.lexeme in ("\\begin", "\\end")
                and i + 1 < len(tokens) and tokens[i + 1].kind == TokenKind.TEXT_BLOCK):
            statement = tokens[i:i + 2]
            i += 2
            if tok.lexeme == "\\begin" and i < len(tokens) and tokens[i].kind == TokenKind.OPTION_BLOCK:
                statement.append(tokens[i])
                i += 1
            statements.append(statement)
            continue
        current.append(tok)
        i += 1
        if tok.kind == TokenKind.PUNCTUATION and tok.lexeme == ";":
            statements.append(current)
            current = []
        elif (current[0].lexeme == "\\foreach"
              and sum(t.kind == TokenKind.TEXT_BLOCK for t in current) == 2):
            statements.append(current)
            current = []
    if current:
        statements.append(current)
    return [s for s in statements if not (len(s) == 1 and s[0].lexeme == ";")]


class _Cursor:
    def __init__(self, tokens: list[TikzToken]):
        self._tokens = tokens
        self._index = 0

    def peek(self) -> Optional[TikzToken]:
        return self._tokens[self._index] if self._index < len(self._tokens) else None

    def next(self) -> Optional[TikzToken]:
        tok = self.peek()
        if tok is not None:
            self._index += 1
        return tok


class _NodeSpec:
    def __init__(self, text: str = ""):
        self.text = text
        self.name: Optional[str] = None
        self.anchor = Anchor.CENTER
        self.offset = (0.0, 0.0)
        self.pos: Optional[float] = None
        self.labels: list[str] = []


class _Pending:
    """一条语句产生的实体，提交前不影响全局状态"""

    def __init__(self) -> None:
        self.items: list[tuple[str, Callable[..., Any]]] = []
        self.names: dict[str, Pt] = {}
        self.canvas_boxes: list[tuple[Point, Point]] = []
        self.partials: list[str] = []

    def add(self, field: str, factory: Callable[..., Any]) -> None:
        self.items.append((field, factory))


class _PathState:
    def __init__(self, mode: str):
        self.mode = mode
        self.bbox = mode == "bbox"
        self.current: Optional[Pt] = None
        self.ref: Optional[Pt] = None
        self.chain: list[Pt] = []
        self.subpath_start: Optional[Pt] = None
        # 子路径被弧打断后 cycle 不再构成多边形
        self.closable = True
        self.pending_op: Optional[str] = None
        self.legs: list[tuple[Point, Point]] = []
        self.waiting: list[tuple[_NodeSpec, float]] = []


def _face(id: str, vertices: tuple[Point3D, ...]) -> Face3D:
    projected = Polygon(id=f"{id}-proj", vertices=tuple(_flat(v) for v in vertices), closed=True)
    return Face3D(id=id, vertices=vertices, projected=projected)


# ---------------------------------------------------------------- parser

class TikzParser:
    """单次使用的解析器，parse() 返回 ParseOutcome"""

    def __init__(self, source: str):
        self.source = source
        self.scale = 1.0
        self.unit_scale = CM_TO_PT
        self.names: dict[str, Pt] = {}
        self.counters = {field: 0 for field in ID_PREFIX}
        self.entities: dict[str, list[Any]] = {field: [] for field in ID_PREFIX}
        self.canvas: Optional[Rect] = None
        self.border: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
        self.skipped: list[SkippedConstruct] = []
        self.statements = 0
        self.skipped_statements = 0
        self._scopes: list[bool] = []

    def parse(self) -> ParseOutcome:
        tokens = tokenize(self.source)
        self._document_class(tokens)
        for statement in split_statements(self._picture_body(tokens)):
            self._statement(statement)

        entities = {field: tuple(items) for field, items in self.entities.items()}
        ir = TikzIR(canvas=self._page_canvas(entities), unit_scale=self.unit_scale, **entities)
        logger.info(
            f"TikZ 解析完成: 语句 {self.statements} 条, 跳过 {self.skipped_statements} 条, "
            f"实体 {sum(len(v) for v in self.entities.values())} 个"
        )
        return ParseOutcome(
            ir=ir,
            skipped=tuple(self.skipped),
            statements=self.statements,
            skipped_statements=self.skipped_statements,
        )

    # ------------------------------------------------------------ page

    def _document_class(self, tokens: list[TikzToken]) -> None:
        """\\documentclass{standalone} 的 border 选项决定页边距；没有文档类时按零边距裁剪"""
        for i, tok in enumerate(tokens):
            if tok.kind != TokenKind.COMMAND or tok.lexeme != "\\documentclass":
                continue
            options = ""
            j = i + 1
            if j < len(tokens) and tokens[j].kind == TokenKind.OPTION_BLOCK:
                options = tokens[j].text
                j += 1
            if j >= len(tokens) or tokens[j].kind != TokenKind.TEXT_BLOCK:
                return
            name = tokens[j].text
            if name != STANDALONE_CLASS:
                self._skip(tok.span, f"page geometry of document class '{name}' not modeled", partial=True)
                return
            self.border = (DEFAULT_BORDER_PT,) * 4
            for key, value in split_options(options):
                if key == "border" and value:
                    self.border = self._border(value, tok.span)
            return

    def _border(self, value: str, span: tuple[int, int]) -> tuple[float, float, float, float]:
        """border 取一个值、水平/垂直两个值，或左、下、右、上四个值；无单位按 bp"""
        try:
            lengths = [self._length(part, unitless=UNIT_PT["bp"], scaled=False) for part in value.split()]
        except _Unsupported as exc:
            self._skip(span, str(exc), partial=True)
            return (DEFAULT_BORDER_PT,) * 4
        if len(lengths) == 1:
            return (lengths[0],) * 4
        if len(lengths) == 2:
            horizontal, vertical = lengths
            return horizontal, vertical, horizontal, vertical
        if len(lengths) == 4:
            left, bottom, right, top = lengths
            return left, bottom, right, top
        self._skip(span, f"border '{value}' unsupported", partial=True)
        return (DEFAULT_BORDER_PT,) * 4

    def _page_canvas(self, entities: dict[str, tuple[Any, ...]]) -> Optional[Rect]:
        """页面范围：\\useasboundingbox 的矩形，否则为所画内容的包围盒，再加 border

        负 border 超过页面尺寸时该方向收缩为零宽。什么都没画时返回 None。
        """
        if self.canvas is not None:
            box = bbox_of(self.canvas)
        else:
            drawn = [bbox_of(entity) for items in entities.values() for entity in items]
            if not drawn:
                return None
            content = bbox_union(drawn)
            box = BBox.from_bounds(
                content.min.x - HALF_LINE_WIDTH_PT,
                content.min.y - HALF_LINE_WIDTH_PT,
                content.max.x + HALF_LINE_WIDTH_PT,
                content.max.y + HALF_LINE_WIDTH_PT,
            )
        left, bottom, right, top = self.border
        min_x, max_x = box.min.x - left, box.max.x + right
        min_y, max_y = box.min.y - bottom, box.max.y + top
        if min_x > max_x:
            min_x = max_x = (min_x + max_x) / 2
        if min_y > max_y:
            min_y = max_y = (min_y + max_y) / 2
        return Rect(id="canvas", min_corner=_point(min_x, min_y), max_corner=_point(max_x, max_y))

    # ------------------------------------------------------------ structure

    def _picture_body(self, tokens: list[TikzToken]) -> list[TikzToken]:
        """取第一个 tikzpicture 环境的内容；没有环境时整段源码都是内容"""
        begin = self._find_env(tokens, "\\begin", 0)
        if begin is None:
            return tokens
        start = begin + 2
        if start < len(tokens) and tokens[start].kind == TokenKind.OPTION_BLOCK:
            self._picture_options(tokens[start])
            start += 1
        end = self._find_env(tokens, "\\end", start)
        if end is None:
            raise TikzParseError("unterminated tikzpicture environment", tokens[begin].span)
        extra = self._find_env(tokens, "\\begin", end + 2)
        while extra is not None:
            self._skip(tokens[extra].span, "additional tikzpicture ignored", partial=True)
            extra = self._find_env(tokens, "\\begin", extra + 2)
        return tokens[start:end]

    @staticmethod
    def _find_env(tokens: list[TikzToken], command: str, start: int) -> Optional[int]:
        for i in range(start, len(tokens) - 1):
            if (tokens[i].kind == TokenKind.COMMAND and tokens[i].lexeme == command
                    and tokens[i + 1].kind == TokenKind.TEXT_BLOCK and tokens[i + 1].text == PICTURE_ENV):
                return i
        return None

    def _picture_options(self, tok: TikzToken) -> None:
        base = CM_TO_PT
        axis_lengths: dict[str, float] = {}
        for key, value in split_options(tok.text):
            try:
                if key == "scale":
                    self.scale = self._number(value or "")
                elif key in ("x", "y"):
                    axis_lengths[key] = self._length(value or "", unitless=CM_TO_PT, scaled=False)
                elif key in GEOMETRIC_KEYS:
                    raise _Unsupported(f"picture option '{key}' unsupported")
            except _Unsupported as exc:
                self._skip(tok.span, str(exc), partial=True)
        if axis_lengths:
            if len(set(axis_lengths.values())) == 1:
                base = next(iter(axis_lengths.values()))
            else:
                self._skip(tok.span, "unequal x/y unit vectors unsupported", partial=True)
        self.unit_scale = _q(base * self.scale)

    def _statement(self, tokens: list[TikzToken]) -> None:
        head = tokens[0]
        span = _span_of(tokens)
        if head.lexeme in ("\\begin", "\\end") and len(tokens) > 1 and tokens[1].kind == TokenKind.TEXT_BLOCK:
            if tokens[1].text == "scope":
                self._scope(head.lexeme, tokens[2:])
                return
            self.statements += 1
            self._skip_statement(span, f"environment '{tokens[1].text}' unsupported")
            return

        self.statements += 1
        if any(self._scopes):
            self._skip_statement(span, "transformed scope unsupported")
            return

        pending = _Pending()
        try:
            if head.lexeme == "\\foreach":
                raise _Unsupported("foreach unsupported")
            if head.kind == TokenKind.COMMAND and head.lexeme in PATH_COMMANDS:
                self._path(tokens[1:], PATH_COMMANDS[head.lexeme], pending)
            elif head.kind == TokenKind.COMMAND and head.lexeme in SHORTHAND_COMMANDS:
                word = SHORTHAND_COMMANDS[head.lexeme]
                self._path([TikzToken(TokenKind.PATH_OP, word, head.span, word), *tokens[1:]], "path", pending)
            elif head.kind == TokenKind.COMMAND:
                raise _Unsupported(f"unsupported command {head.lexeme}")
            else:
                raise _Unsupported(f"unexpected '{head.lexeme}'")
            self._commit(pending)
        except _Unsupported as exc:
            self._skip_statement(span, str(exc))
        except ValueError as exc:
            self._skip_statement(span, f"invalid geometry ({type(exc).__name__})")
        else:
            for reason in pending.partials:
                self._skip(span, reason, partial=True)

    def _scope(self, command: str, rest: list[TikzToken]) -> None:
        if command == "\\end":
            if self._scopes:
                self._scopes.pop()
            return
        transformed = bool(rest) and any(key in GEOMETRIC_KEYS for key, _ in split_options(rest[0].text))
        self._scopes.append(transformed)

    def _skip(self, span: tuple[int, int], reason: str, partial: bool = False) -> None:
        logger.debug(f"跳过 TikZ 构造 @{span[0]}: {reason}")
        self.skipped.append(SkippedConstruct(span=span, reason=reason, partial=partial))

    def _skip_statement(self, span: tuple[int, int], reason: str) -> None:
        self.skipped_statements += 1
        self._skip(span, reason)

    def _commit(self, pending: _Pending) -> None:
        """分配 id 并校验本条语句的实体，全部合法才写入"""
        counters = dict(self.counters)
        built: dict[str, list[Any]] = {field: [] for field in ID_PREFIX}
        for field, factory in pending.items:
            entity_id = f"{ID_PREFIX[field]}-{counters[field]}"
            counters[field] += 1
            built[field].append(factory(id=entity_id))

        canvas = self.canvas
        if pending.canvas_boxes:
            corners = [p for box in pending.canvas_boxes for p in box]
            if canvas is not None:
                corners += [canvas.min_corner, canvas.max_corner]
            canvas = Rect(
                id="canvas",
                min_corner=_point(min(p.x for p in corners), min(p.y for p in corners)),
                max_corner=_point(max(p.x for p in corners), max(p.y for p in corners)),
            )

        candidate = TikzIR(
            canvas=canvas if pending.canvas_boxes else None,
            unit_scale=self.unit_scale,
            **{field: tuple(items) for field, items in built.items()},
        )
        violations = validate_ir(candidate)
        if violations:
            raise _Unsupported(f"invalid geometry: {violations[0].code}")

        self.counters = counters
        for field, items in built.items():
            self.entities[field].extend(items)
        self.names.update(pending.names)
        self.canvas = canvas

    # ------------------------------------------------------------ values

    @staticmethod
    def _number(text: str) -> float:
        text = text.strip()
        if not _NUMBER.match(text):
            raise _Unsupported(f"expression '{text}' unsupported")
        return float(text)

    def _length(self, text: str, unitless: Optional[float] = None, scaled: bool = True) -> float:
        """长度转 pt；无单位时乘 unitless（默认坐标单位）"""
        match = _LENGTH.match(text.strip())
        if not match:
            raise _Unsupported(f"expression '{text.strip()}' unsupported")
        value = float(match.group(1))
        unit = match.group(2)
        if unit is None:
            return value * (self.unit_scale if unitless is None else unitless)
        return value * UNIT_PT[unit] * (self.scale if scaled else 1.0)

    def _lookup(self, name: str, pending: _Pending) -> Pt:
        key = name[: -len(".center")] if name.endswith(".center") else name
        point = pending.names.get(key)
        if point is None:
            point = self.names.get(key)
        if point is None:
            if "." in key:
                raise _Unsupported(f"node anchor reference '{name}' unsupported")
            raise _Unsupported(f"undefined coordinate '{name}'")
        return point

    def _resolve(self, tok: TikzToken, pending: _Pending) -> Pt:
        text = tok.text
        if not text:
            raise TikzParseError("empty coordinate", tok.span)
        if text.startswith("$") or "!" in text:
            raise _Unsupported("calc coordinates unsupported")
        if text.startswith("["):
            raise _Unsupported("coordinate options unsupported")
        if "," in text:
            parts = [p.strip() for p in text.split(",")]
            if len(parts) > 3 or not all(parts):
                raise TikzParseError(f"malformed coordinate '({text})'", tok.span)
            values = [self._length(p) for p in parts]
            return _point(*values) if len(values) == 2 else _point3(*values)
        if ":" in text:
            parts = [p.strip() for p in text.split(":")]
            if len(parts) != 2 or not all(parts):
                raise TikzParseError(f"malformed polar coordinate '({text})'", tok.span)
            if " and " in parts[1]:
                raise _Unsupported("elliptical polar coordinate unsupported")
            radius = self._length(parts[1])
            ux, uy = unit_vector(self._number(parts[0]))
            return _point(radius * ux, radius * uy)
        return self._lookup(text, pending)

    # ------------------------------------------------------------ paths

    def _path(self, tokens: list[TikzToken], mode: str, pending: _Pending) -> None:
        cursor = _Cursor(tokens)
        state = _PathState(mode)
        while (tok := cursor.next()) is not None:
            if tok.kind == TokenKind.PUNCTUATION and tok.lexeme == ";":
                break
            if tok.kind == TokenKind.OPTION_BLOCK:
                self._path_options(tok.text, state)
            elif tok.kind == TokenKind.COORDINATE:
                self._move(state, self._resolve(tok, pending), pending, update_ref=True)
            elif tok.kind == TokenKind.PATH_OP:
                self._path_op(tok, cursor, state, pending)
            elif tok.kind == TokenKind.COMMAND:
                raise _Unsupported(f"macro {tok.lexeme} in path unsupported")
            elif tok.kind == TokenKind.TEXT_BLOCK:
                raise _Unsupported("stray text block in path")
            else:
                raise _Unsupported(f"path operation '{tok.lexeme}' unsupported")
        if state.pending_op is not None:
            raise _Unsupported(f"path ends after '{state.pending_op}'")
        self._flush(state, pending)

    def _path_options(self, text: str, state: _PathState) -> None:
        for key, _ in split_options(text):
            if key in GEOMETRIC_KEYS:
                raise _Unsupported(f"option '{key}' unsupported")
            if key == "use as bounding box":
                state.bbox = True

    def _path_op(self, tok: TikzToken, cursor: _Cursor, state: _PathState, pending: _Pending) -> None:
        word = tok.lexeme
        if word in ("++", "+"):
            target = cursor.next()
            if target is None or target.kind != TokenKind.COORDINATE:
                raise _Unsupported(f"'{word}' without coordinate")
            offset = self._resolve(target, pending)
            base = state.ref
            if base is None:
                base = _point3(0, 0, 0) if isinstance(offset, Point3D) else _point(0, 0)
            self._move(state, _add(base, offset), pending, update_ref=word == "++")
        elif word in LINE_OPS:
            if state.pending_op is not None:
                raise _Unsupported(f"'{word}' after '{state.pending_op}'")
            state.pending_op = word
        elif word == "to":
            nxt = cursor.peek()
            if nxt is not None and nxt.kind == TokenKind.OPTION_BLOCK:
                raise _Unsupported("'to' with options unsupported")
            state.pending_op = "--"
        elif word == "cycle":
            self._cycle(state, pending)
        elif word == "rectangle":
            state.pending_op = "rectangle"
        elif word == "circle":
            self._circle(cursor, state, pending)
        elif word == "arc":
            self._arc(cursor, state, pending)
        elif word == "node":
            self._node(cursor, state, pending)
        elif word == "coordinate":
            self._coordinate(cursor, state, pending)
        elif word == "pic":
            self._pic(cursor, state, pending)
        else:
            raise _Unsupported(f"path operation '{word}' unsupported")

    def _move(self, state: _PathState, point: Pt, pending: _Pending, update_ref: bool) -> None:
        op, state.pending_op = state.pending_op, None
        start = state.current
        if op is None:
            self._flush(state, pending)
            state.chain = [point]
            state.subpath_start = point
            state.closable = True
            state.legs = []
        elif op == "rectangle":
            if start is None:
                raise _Unsupported("rectangle without start point")
            self._flush(state, pending)
            self._emit_rect(state, start, point, pending)
            state.chain = [point]
            state.subpath_start = point
            state.closable = True
            state.legs = [(_flat(start), _flat(point))]
        else:
            if start is None:
                raise _Unsupported(f"'{op}' without start point")
            if type(start) is not type(point):
                raise _Unsupported("mixed 2D/3D path")
            stops = [point]
            if op != "--":
                if isinstance(point, Point3D):
                    raise _Unsupported(f"'{op}' with 3D coordinates unsupported")
                corner = _point(point.x, start.y) if op == "-|" else _point(start.x, point.y)
                if corner != start and corner != point:
                    stops = [corner, point]
            state.chain.extend(stops)
            previous = [start, *stops[:-1]]
            state.legs = [(_flat(a), _flat(b)) for a, b in zip(previous, stops)]

        state.current = point
        if update_ref or state.ref is None:
            state.ref = point

        waiting, state.waiting = state.waiting, []
        for spec, t in waiting:
            base = _along(state.legs, t) if state.legs else _flat(point)
            self._emit_node(spec, base, pending)

    def _flush(self, state: _PathState, pending: _Pending) -> None:
        """把当前折线作为开放路径输出"""
        chain = state.chain
        state.chain = chain[-1:]
        if len(chain) < 2:
            return
        if state.mode in ("clip", "bbox") or state.bbox:
            region = "clip" if state.mode == "clip" else "bbox"
            raise _Unsupported(f"non-rectangular {region} path unsupported")
        if state.mode != "draw":
            return
        for a, b in zip(chain, chain[1:]):
            pending.add("segments", partial(LineSegment, a=_flat(a), b=_flat(b)))

    def _cycle(self, state: _PathState, pending: _Pending) -> None:
        if state.pending_op != "--":
            raise _Unsupported("'cycle' must follow '--'")
        state.pending_op = None
        start, current = state.subpath_start, state.current
        if start is None or current is None:
            raise _Unsupported("'cycle' without start point")

        vertices = list(state.chain)
        if len(vertices) > 1 and vertices[-1] == start:
            vertices.pop()
        if state.closable and len(vertices) >= 3:
            if state.mode in ("clip", "bbox"):
                raise _Unsupported(f"non-rectangular {state.mode} path unsupported")
            if state.mode == "draw":
                if isinstance(vertices[0], Point3D):
                    pending.add("faces3d", partial(_face, vertices=tuple(vertices)))
                else:
                    pending.add("shapes", partial(Polygon, vertices=tuple(vertices), closed=True))
            state.chain = []
        else:
            if state.chain[-1] != start:
                state.chain.append(start)
            self._flush(state, pending)

        state.legs = [(_flat(current), _flat(start))]
        state.current = state.ref = start
        state.chain = [start]
        state.closable = True

    def _emit_rect(self, state: _PathState, p: Pt, q: Pt, pending: _Pending) -> None:
        if isinstance(p, Point3D) or isinstance(q, Point3D):
            raise _Unsupported("3D rectangle unsupported")
        lo = _point(min(p.x, q.x), min(p.y, q.y))
        hi = _point(max(p.x, q.x), max(p.y, q.y))
        if state.bbox:
            pending.canvas_boxes.append((lo, hi))
        if state.mode == "draw":
            pending.add("rectangles", partial(Rect, min_corner=lo, max_corner=hi))
        elif state.mode == "clip":
            pending.add("clip_regions", partial(Rect, min_corner=lo, max_corner=hi))

    def _radius_option(self, text: str) -> float:
        options = dict(split_options(text))
        if options.get("radius"):
            return self._length(options["radius"])
        x_radius, y_radius = options.get("x radius"), options.get("y radius")
        if x_radius and y_radius:
            rx, ry = self._length(x_radius), self._length(y_radius)
            if not math.isclose(rx, ry):
                raise _Unsupported("ellipse unsupported")
            return rx
        raise _Unsupported("missing radius")

    def _circle(self, cursor: _Cursor, state: _PathState, pending: _Pending) -> None:
        tok = cursor.next()
        if tok is None:
            raise _Unsupported("circle without radius")
        if tok.kind == TokenKind.COORDINATE:
            if " and " in tok.text:
                raise _Unsupported("ellipse unsupported")
            radius = self._length(tok.text)
        elif tok.kind == TokenKind.OPTION_BLOCK:
            radius = self._radius_option(tok.text)
        else:
            raise _Unsupported("circle without radius")

        center = state.current if state.current is not None else _point(0, 0)
        if isinstance(center, Point3D):
            raise _Unsupported("3D circle unsupported")
        if state.mode in ("clip", "bbox"):
            raise _Unsupported(f"non-rectangular {state.mode} path unsupported")
        if state.mode == "draw":
            pending.add("circles", partial(Circle, center=center, radius=_q(radius)))

    def _arc(self, cursor: _Cursor, state: _PathState, pending: _Pending) -> None:
        if state.pending_op is not None:
            raise _Unsupported(f"'arc' after '{state.pending_op}'")
        tok = cursor.next()
        if tok is not None and tok.kind == TokenKind.COORDINATE:
            parts = [p.strip() for p in tok.text.split(":")]
            if len(parts) != 3 or not all(parts):
                raise TikzParseError(f"malformed arc specification '({tok.text})'", tok.span)
            if " and " in parts[2]:
                raise _Unsupported("elliptical arc unsupported")
            start, end, radius = self._number(parts[0]), self._number(parts[1]), self._length(parts[2])
        elif tok is not None and tok.kind == TokenKind.OPTION_BLOCK:
            options = dict(split_options(tok.text))
            radius = self._radius_option(tok.text)
            angles = {k: self._number(options[k]) for k in ("start angle", "end angle", "delta angle")
                      if options.get(k)}
            if "start angle" in angles and "end angle" in angles:
                start, end = angles["start angle"], angles["end angle"]
            elif "start angle" in angles and "delta angle" in angles:
                start, end = angles["start angle"], angles["start angle"] + angles["delta angle"]
            elif "end angle" in angles and "delta angle" in angles:
                start, end = angles["end angle"] - angles["delta angle"], angles["end angle"]
            else:
                raise _Unsupported("arc needs two of start/end/delta angle")
        else:
            raise _Unsupported("arc without specification")

        origin = state.current if state.current is not None else _point(0, 0)
        if isinstance(origin, Point3D):
            raise _Unsupported("3D arc unsupported")
        if math.isclose(start, end):
            raise _Unsupported("zero-sweep arc")
        ux, uy = unit_vector(start)
        center = _point(origin.x - radius * ux, origin.y - radius * uy)
        if abs(end - start) >= 360:
            low, high = start, start + 360.0
        else:
            # 顺时针的弧交换起止角
            low, high = (start, end) if end > start else (end, start)
        if state.mode in ("clip", "bbox"):
            raise _Unsupported(f"non-rectangular {state.mode} path unsupported")
        if state.mode == "draw":
            pending.add("arcs", partial(Arc, center=center, radius=_q(radius), start_angle=_q(low), end_angle=_q(high)))

        ex, ey = unit_vector(end)
        end_point = _point(center.x + radius * ex, center.y + radius * ey)
        self._flush(state, pending)
        state.current = state.ref = end_point
        state.chain = [end_point]
        state.closable = False
        state.legs = []

    # ------------------------------------------------------------ nodes

    def _node_options(self, text: str, spec: _NodeSpec, pending: _Pending, drawn_border: bool = True) -> None:
        for key, value in split_options(text):
            if key in GEOMETRIC_KEYS:
                raise _Unsupported(f"option '{key}' unsupported")
            if key in DIRECTION_ANCHORS:
                if value and value.startswith("of "):
                    raise _Unsupported("positioning library unsupported")
                spec.anchor = DIRECTION_ANCHORS[key]
                distance = self._length(value, unitless=1.0, scaled=False) if value else 0.0
                vx, vy = DIRECTION_VECTORS[key]
                spec.offset = (vx * distance, vy * distance)
            elif key == "anchor":
                if value not in TIKZ_ANCHORS:
                    raise _Unsupported(f"anchor '{value}' unsupported")
                spec.anchor = TIKZ_ANCHORS[value]
            elif key == "pos":
                spec.pos = self._number(value or "")
            elif key in POS_KEYS:
                spec.pos = POS_KEYS[key]
            elif key == "label":
                spec.labels.append(value or "")
            elif key == "pin":
                raise _Unsupported("pin unsupported")
            elif key == "name":
                spec.name = value
            elif key == "draw" and value != "none" and drawn_border:
                pending.partials.append("node border not emitted")

    def _node(self, cursor: _Cursor, state: _PathState, pending: _Pending) -> None:
        spec = _NodeSpec()
        at: Optional[Pt] = None
        text: Optional[str] = None
        while (tok := cursor.peek()) is not None:
            if tok.kind == TokenKind.OPTION_BLOCK:
                self._node_options(tok.text, spec, pending)
            elif tok.kind == TokenKind.COORDINATE and spec.name is None and at is None:
                spec.name = tok.text
            elif tok.kind == TokenKind.PATH_OP and tok.lexeme == "at":
                cursor.next()
                target = cursor.next()
                if target is None or target.kind != TokenKind.COORDINATE:
                    raise _Unsupported("'at' without coordinate")
                at = self._resolve(target, pending)
                continue
            elif tok.kind == TokenKind.TEXT_BLOCK:
                text = tok.text
                cursor.next()
                break
            else:
                break
            cursor.next()
        if text is None:
            raise _Unsupported("node without text")
        spec.text = text

        if at is not None:
            self._emit_node(spec, _flat(at), pending)
        elif state.pending_op in LINE_OPS:
            state.waiting.append((spec, spec.pos if spec.pos is not None else 0.5))
        elif spec.pos is not None and state.legs:
            self._emit_node(spec, _along(state.legs, spec.pos), pending)
        else:
            self._emit_node(spec, _flat(state.current) if state.current is not None else _point(0, 0), pending)

    def _coordinate(self, cursor: _Cursor, state: _PathState, pending: _Pending) -> None:
        spec = _NodeSpec()
        at: Optional[Pt] = None
        while (tok := cursor.peek()) is not None:
            if tok.kind == TokenKind.OPTION_BLOCK:
                self._node_options(tok.text, spec, pending, drawn_border=False)
            elif tok.kind == TokenKind.COORDINATE and spec.name is None and at is None:
                spec.name = tok.text
            elif tok.kind == TokenKind.PATH_OP and tok.lexeme == "at":
                cursor.next()
                target = cursor.next()
                if target is None or target.kind != TokenKind.COORDINATE:
                    raise _Unsupported("'at' without coordinate")
                at = self._resolve(target, pending)
                continue
            else:
                break
            cursor.next()

        point = at if at is not None else (state.current if state.current is not None else _point(0, 0))
        if spec.name:
            pending.names[spec.name] = point
        flat = _flat(point)
        for label in spec.labels:
            self._emit_label(label, BBox(min=flat, max=flat), pending)

    def _emit_node(self, spec: _NodeSpec, base: Point, pending: _Pending) -> None:
        position = _point(base.x + spec.offset[0], base.y + spec.offset[1])
        if spec.text:
            box = estimate_text_bbox(position, spec.text, spec.anchor)
            pending.add("nodes", partial(TextNode, position=position, text=spec.text, anchor=spec.anchor, bbox=box))
            center = _point(box.center.x, box.center.y)
        else:
            box = BBox(min=position, max=position)
            center = position
        if spec.name:
            pending.names[spec.name] = center
        for label in spec.labels:
            self._emit_label(label, box, pending)

    def _emit_label(self, value: str, parent: BBox, pending: _Pending) -> None:
        """label=方向:文字，贴在父节点边框外侧"""
        value = _LABEL_STYLE.sub("", _strip_braces(value))
        match = _LABEL.match(value)
        direction, text = ("above", value) if match is None else (match.group(1), match.group(2))
        text = _strip_braces(text)
        if _NUMBER.match(direction):
            direction = ANGLE_DIRECTIONS[round(float(direction) / 45.0) % 8]
        direction = COMPASS_DIRECTIONS.get(direction, direction)
        if not text:
            return
        fx, fy = BORDER_FRACTIONS[direction]
        position = _point(parent.min.x + fx * parent.width, parent.min.y + fy * parent.height)
        anchor = DIRECTION_ANCHORS[direction]
        box = estimate_text_bbox(position, text, anchor)
        pending.add("nodes", partial(TextNode, position=position, text=text, anchor=anchor, bbox=box))

    def _pic(self, cursor: _Cursor, state: _PathState, pending: _Pending) -> None:
        options: list[tuple[str, Optional[str]]] = []
        while (tok := cursor.peek()) is not None and tok.kind in (TokenKind.OPTION_BLOCK, TokenKind.COORDINATE):
            if tok.kind == TokenKind.OPTION_BLOCK:
                options.extend(split_options(tok.text))
            cursor.next()
        body = cursor.next()
        if body is None or body.kind != TokenKind.TEXT_BLOCK:
            raise _Unsupported("pic without body")
        match = _PIC_ANGLE.match(body.text)
        if match is None:
            raise _Unsupported(f"pic '{body.text}' unsupported")

        a, b, c = (self._lookup(name.strip(), pending) for name in match.group(2, 3, 4))
        if any(isinstance(p, Point3D) for p in (a, b, c)):
            raise _Unsupported("3D angle pic unsupported")

        radius = DEFAULT_ANGLE_RADIUS_PT
        eccentricity = DEFAULT_ANGLE_ECCENTRICITY
        label: Optional[str] = None
        draw = state.mode == "draw"
        for key, value in options:
            if key == '"':
                quoted = _QUOTED.match(value or "")
                label = quoted.group(1) if quoted else None
            elif key == "pic text":
                label = value
            elif key == "angle radius":
                radius = self._length(value or "", unitless=1.0, scaled=False)
            elif key == "angle eccentricity":
                eccentricity = self._number(value or "")
            elif key == "draw" and value != "none":
                draw = True
            elif key in GEOMETRIC_KEYS:
                raise _Unsupported(f"option '{key}' unsupported")

        if a == b or c == b:
            raise _Unsupported("degenerate angle")
        to_a = math.degrees(math.atan2(a.y - b.y, a.x - b.x)) % 360.0
        to_c = math.degrees(math.atan2(c.y - b.y, c.x - b.x)) % 360.0
        sweep = (to_c - to_a) % 360.0
        if sweep <= 0:
            raise _Unsupported("degenerate angle")

        if match.group(1) == "right angle":
            if draw:
                # 逆时针从 BA 转到 BC 时以 BA 为第一条边，否则以 BC 为第一条边
                orientation = to_a if sweep <= 180.0 else to_c
                pending.add("right_angle_symbols", partial(
                    RightAngleSymbol, corner=b, arm_length=_q(radius), orientation=_q(orientation),
                ))
        elif draw:
            pending.add("arcs", partial(
                Arc, center=b, radius=_q(radius), start_angle=_q(to_a), end_angle=_q(to_a + sweep),
            ))

        if label:
            ux, uy = unit_vector(to_a + sweep / 2.0)
            position = _point(b.x + eccentricity * radius * ux, b.y + eccentricity * radius * uy)
            box = estimate_text_bbox(position, label, Anchor.CENTER)
            pending.add("nodes", partial(TextNode, position=position, text=label, anchor=Anchor.CENTER, bbox=box))


def parse_tikz(source: str) -> ParseOutcome:
    """把 TikZ 源码翻译为 IR

    Raises:
        TikzParseError: 括号不配对、坐标格式错误或图形环境未闭合
    """
    return TikzParser(source).parse()


def subset_report(source: str) -> SubsetReport:
    """顶层语句中被解析与被跳过的比例；空源码按约定为 100%"""
    try:
        outcome = parse_tikz(source)
    except TikzParseError as exc:
        return SubsetReport(statements=0, parsed=0, skipped=0, coverage=0.0, error=str(exc))
    parsed = outcome.statements - outcome.skipped_statements
    coverage = parsed / outcome.statements if outcome.statements else 1.0
    reasons = tuple(s.reason for s in outcome.skipped if not s.partial)
    return SubsetReport(
        statements=outcome.statements,
        parsed=parsed,
        skipped=outcome.skipped_statements,
        coverage=coverage,
        reasons=reasons,
    )


__all__ = [
    "ParseOutcome",
    "SkippedConstruct",
    "SubsetReport",
    "TikzParser",
    "parse_tikz",
    "split_options",
    "split_statements",
    "subset_report",
]
