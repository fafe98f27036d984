"""中间表示（IR）数据模型

所有坐标单位为 pt，实例构造后不可变。
"""
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .text import LabelKind, display_length, label_kind

CM_TO_PT = 28.4527
EM_PT = 10.0
QUANTUM_DIGITS = 6


class IRModel(BaseModel):
    """IR 基类：冻结、禁止未知字段"""

    model_config = ConfigDict(frozen=True, extra="forbid")


class Point(IRModel):
    x: float
    y: float


class Point3D(IRModel):
    x: float
    y: float
    z: float


class BBox(IRModel):
    """轴对齐矩形框"""

    min: Point
    max: Point

    @property
    def width(self) -> float:
        return self.max.x - self.min.x

    @property
    def height(self) -> float:
        return self.max.y - self.min.y

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> Point:
        return Point(x=(self.min.x + self.max.x) / 2, y=(self.min.y + self.max.y) / 2)

    @classmethod
    def from_bounds(cls, min_x: float, min_y: float, max_x: float, max_y: float) -> "BBox":
        return cls(min=Point(x=min_x, y=min_y), max=Point(x=max_x, y=max_y))


class Anchor(str, Enum):
    CENTER = "center"
    NORTH = "north"
    SOUTH = "south"
    EAST = "east"
    WEST = "west"
    NE = "ne"
    NW = "nw"
    SE = "se"
    SW = "sw"


# 锚点在文字框中的相对位置 (fx, fy)，0 为左/下边，1 为右/上边
ANCHOR_FRACTIONS: dict[Anchor, tuple[float, float]] = {
    Anchor.CENTER: (0.5, 0.5),
    Anchor.NORTH: (0.5, 1.0),
    Anchor.SOUTH: (0.5, 0.0),
    Anchor.EAST: (1.0, 0.5),
    Anchor.WEST: (0.0, 0.5),
    Anchor.NE: (1.0, 1.0),
    Anchor.NW: (0.0, 1.0),
    Anchor.SE: (1.0, 0.0),
    Anchor.SW: (0.0, 0.0),
}


def estimate_text_bbox(position: Point, text: str, anchor: Anchor) -> BBox:
    """按等宽字体估算文字框：每字符 0.5em，高 1em，1em = 10pt"""
    width = 0.5 * EM_PT * display_length(text)
    height = EM_PT
    fx, fy = ANCHOR_FRACTIONS[anchor]
    min_x = position.x - fx * width
    min_y = position.y - fy * height
    # + 0.0 把 -0.0 规整成 0.0
    return BBox.from_bounds(
        round(min_x, QUANTUM_DIGITS) + 0.0,
        round(min_y, QUANTUM_DIGITS) + 0.0,
        round(min_x + width, QUANTUM_DIGITS) + 0.0,
        round(min_y + height, QUANTUM_DIGITS) + 0.0,
    )


class TextNode(IRModel):
    id: str
    position: Point
    text: str
    anchor: Anchor = Anchor.CENTER
    bbox: BBox

    @model_validator(mode="before")
    @classmethod
    def _fill_bbox(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("bbox") is None and "position" in data:
            try:
                position = data["position"]
                if not isinstance(position, Point):
                    position = Point.model_validate(position)
                anchor = Anchor(data.get("anchor", Anchor.CENTER))
            except ValueError:
                # 交给字段校验报告具体错误
                return data
            data = {**data, "bbox": estimate_text_bbox(position, str(data.get("text", "")), anchor)}
        return data

    @property
    def kind(self) -> LabelKind:
        return label_kind(self.text)


class LineSegment(IRModel):
    id: str
    a: Point
    b: Point


class Polygon(IRModel):
    id: str
    vertices: tuple[Point, ...]
    closed: bool = True

    def edges(self) -> list[tuple[Point, Point]]:
        """按顺序返回边，闭合多边形包含最后一条回边"""
        pts = self.vertices
        pairs = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
        if self.closed and len(pts) >= 2:
            pairs.append((pts[-1], pts[0]))
        return pairs


class Rect(IRModel):
    id: str
    min_corner: Point
    max_corner: Point

    def corners(self) -> tuple[Point, Point, Point, Point]:
        lo, hi = self.min_corner, self.max_corner
        return (lo, Point(x=hi.x, y=lo.y), hi, Point(x=lo.x, y=hi.y))


class Circle(IRModel):
    id: str
    center: Point
    radius: float


class Arc(IRModel):
    id: str
    center: Point
    radius: float
    start_angle: float
    end_angle: float


class RightAngleSymbol(IRModel):
    id: str
    corner: Point
    arm_length: float
    orientation: float = 0.0


class Face3D(IRModel):
    id: str
    vertices: tuple[Point3D, ...]
    projected: Polygon
    projection: str = Field(default="tikz-default", description="投影规则")


class TikzIR(IRModel):
    canvas: Optional[Rect] = None
    clip_regions: tuple[Rect, ...] = ()
    unit_scale: float = CM_TO_PT
    nodes: tuple[TextNode, ...] = ()
    segments: tuple[LineSegment, ...] = ()
    shapes: tuple[Polygon, ...] = ()
    rectangles: tuple[Rect, ...] = ()
    circles: tuple[Circle, ...] = ()
    arcs: tuple[Arc, ...] = ()
    right_angle_symbols: tuple[RightAngleSymbol, ...] = ()
    faces3d: tuple[Face3D, ...] = ()

    def labels(self) -> list[TextNode]:
        """非空文字节点"""
        return [n for n in self.nodes if display_length(n.text) > 0]

    def entities(self) -> list[IRModel]:
        """画布之外的所有几何实体，按字段顺序"""
        return [
            *self.shapes, *self.rectangles, *self.circles, *self.segments,
            *self.arcs, *self.right_angle_symbols, *self.faces3d,
        ]


__all__ = [
    "CM_TO_PT",
    "EM_PT",
    "IRModel",
    "Point",
    "Point3D",
    "BBox",
    "Anchor",
    "ANCHOR_FRACTIONS",
    "estimate_text_bbox",
    "TextNode",
    "LineSegment",
    "Polygon",
    "Rect",
    "Circle",
    "Arc",
    "RightAngleSymbol",
    "Face3D",
    "TikzIR",
]
