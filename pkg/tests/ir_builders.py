"""测试用的 IR 构造函数，坐标单位均为 pt"""
from typing import Any, Iterable

from src.ir.model import (
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
)
from src.ir.serialization import ir_from_dict, ir_to_dict


def pt(x: float, y: float) -> Point:
    return Point(x=x, y=y)


def segment(id: str, a: tuple[float, float], b: tuple[float, float]) -> LineSegment:
    return LineSegment(id=id, a=pt(*a), b=pt(*b))


def polygon(id: str, *vertices: tuple[float, float], closed: bool = True) -> Polygon:
    return Polygon(id=id, vertices=tuple(pt(*v) for v in vertices), closed=closed)


def rect(id: str, lo: tuple[float, float], hi: tuple[float, float]) -> Rect:
    return Rect(id=id, min_corner=pt(*lo), max_corner=pt(*hi))


def canvas(lo: tuple[float, float], hi: tuple[float, float]) -> Rect:
    return rect("canvas", lo, hi)


def circle(id: str, center: tuple[float, float], radius: float) -> Circle:
    return Circle(id=id, center=pt(*center), radius=radius)


def arc(id: str, center: tuple[float, float], radius: float, start: float, end: float) -> Arc:
    return Arc(id=id, center=pt(*center), radius=radius, start_angle=start, end_angle=end)


def right_angle(id: str, corner: tuple[float, float], arm: float = 5.0, orientation: float = 0.0) -> RightAngleSymbol:
    return RightAngleSymbol(id=id, corner=pt(*corner), arm_length=arm, orientation=orientation)


def label(id: str, text: str, at: tuple[float, float]) -> TextNode:
    """文字框按字符数估算"""
    return TextNode(id=id, text=text, position=pt(*at))


def box_label(id: str, text: str, lo: tuple[float, float], hi: tuple[float, float]) -> TextNode:
    """显式给出文字框，锚点取框中心"""
    center = ((lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2)
    return TextNode(id=id, text=text, position=pt(*center), bbox=BBox(min=pt(*lo), max=pt(*hi)))


def face(id: str, *vertices: tuple[float, float, float]) -> Face3D:
    """投影取 xy 平面"""
    projected = Polygon(id=f"{id}-proj", vertices=tuple(pt(x, y) for x, y, _ in vertices), closed=True)
    return Face3D(id=id, vertices=tuple(Point3D(x=x, y=y, z=z) for x, y, z in vertices), projected=projected)


def make_ir(*entities: Any, canvas: Rect | None = None, clips: Iterable[Rect] = ()) -> TikzIR:
    """按实体类型分派到对应字段，保持传入顺序"""
    fields: dict[type, str] = {
        TextNode: "nodes",
        LineSegment: "segments",
        Polygon: "shapes",
        Rect: "rectangles",
        Circle: "circles",
        Arc: "arcs",
        RightAngleSymbol: "right_angle_symbols",
        Face3D: "faces3d",
    }
    groups: dict[str, list[Any]] = {name: [] for name in fields.values()}
    for entity in entities:
        groups[fields[type(entity)]].append(entity)
    return TikzIR(canvas=canvas, clip_regions=tuple(clips), **{k: tuple(v) for k, v in groups.items()})


def _shift(value: Any, dx: float, dy: float) -> Any:
    if isinstance(value, dict):
        moved = {k: _shift(v, dx, dy) for k, v in value.items()}
        if "x" in value and "y" in value:
            moved["x"] = value["x"] + dx
            moved["y"] = value["y"] + dy
        return moved
    if isinstance(value, list):
        return [_shift(v, dx, dy) for v in value]
    return value


def shifted(ir: TikzIR, dx: float, dy: float, keep_canvas: bool = False) -> TikzIR:
    """整体平移；keep_canvas 时画布与裁剪区域保持原位"""
    data = ir_to_dict(ir)
    moved = _shift(data, dx, dy)
    if keep_canvas:
        moved["canvas"] = data["canvas"]
        moved["clip_regions"] = data["clip_regions"]
    return ir_from_dict(moved)


def scaled(ir: TikzIR, s: float) -> TikzIR:
    """所有坐标、半径、臂长同乘 s"""

    def walk(value: Any, key: str = "") -> Any:
        if isinstance(value, dict):
            return {k: walk(v, k) for k, v in value.items()}
        if isinstance(value, list):
            return [walk(v, key) for v in value]
        if isinstance(value, float | int) and not isinstance(value, bool) and key in _SCALED_KEYS:
            return value * s
        return value

    return ir_from_dict(walk(ir_to_dict(ir)))


_SCALED_KEYS = {"x", "y", "z", "radius", "arm_length"}
