"""计算几何内核

纯函数，无状态；所有长度单位为 pt，等值比较容差 1e-7 pt。
"""
import math
from functools import singledispatch
from typing import Iterable, Sequence, Union

import numpy as np
from shapely.geometry import LinearRing, LineString
from shapely.geometry import Point as ShapelyPoint
from shapely.geometry import Polygon as ShapelyPolygon
from shapely.geometry import box as shapely_box

from src.ir.model import (
    Arc,
    BBox,
    Circle,
    Face3D,
    LineSegment,
    Point,
    Polygon,
    Rect,
    RightAngleSymbol,
    TextNode,
)
from src.utils.exceptions import GeometryError

EPS = 1e-7
ARC_STEP_DEG = 1.0

Curve = Union[LineSegment, Arc, Circle]

# 90° 整数倍的精确单位向量，避免 cos(90°) 之类的舍入残差
_AXIS_UNITS = {0: (1.0, 0.0), 90: (0.0, 1.0), 180: (-1.0, 0.0), 270: (0.0, -1.0)}


def unit_vector(degrees: float) -> tuple[float, float]:
    normalized = degrees % 360.0
    if normalized in _AXIS_UNITS:
        return _AXIS_UNITS[int(normalized)]
    radians = math.radians(degrees)
    return math.cos(radians), math.sin(radians)


def point_distance(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def _point_to_segment(p: Point, a: Point, b: Point) -> float:
    dx, dy = b.x - a.x, b.y - a.y
    length_sq = dx * dx + dy * dy
    if length_sq == 0:
        return point_distance(p, a)
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / length_sq
    t = max(0.0, min(1.0, t))
    return math.hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy))


def point_segment_distance(p: Point, s: Union[LineSegment, tuple[Point, Point]]) -> float:
    """点到闭线段的欧氏距离"""
    a, b = (s.a, s.b) if isinstance(s, LineSegment) else s
    return _point_to_segment(p, a, b)


def segment_length(s: Union[LineSegment, tuple[Point, Point]]) -> float:
    a, b = (s.a, s.b) if isinstance(s, LineSegment) else s
    return point_distance(a, b)


def _coords(points: Iterable[Point]) -> list[tuple[float, float]]:
    return [(p.x, p.y) for p in points]


def polygon_contains(poly: Polygon, p: Point) -> bool:
    """点在闭合多边形内部或边界上（含边界，容差 1e-7）"""
    if not poly.closed or len(poly.vertices) < 3:
        raise GeometryError(f"多边形 {poly.id} 未闭合或顶点不足，无法判断包含关系")
    shape = ShapelyPolygon(_coords(poly.vertices))
    return shape.distance(ShapelyPoint(p.x, p.y)) <= EPS


def polygon_perimeter(poly: Polygon) -> float:
    """边长之和，闭合时包含回边"""
    coords = _coords(poly.vertices)
    if poly.closed:
        return LinearRing(coords).length
    return LineString(coords).length


def polygon_area(poly: Polygon) -> float:
    return ShapelyPolygon(_coords(poly.vertices)).area


def bbox_perimeter(b: BBox) -> float:
    return 2.0 * (b.width + b.height)


# ---------------------------------------------------------------- arcs

def arc_sweep(a: Arc) -> float:
    """扫过的角度，归一化到 (0, 360]"""
    sweep = (a.end_angle - a.start_angle) % 360.0
    return 360.0 if sweep <= 1e-9 else sweep


def arc_covers_angle(a: Arc, degrees: float) -> bool:
    return (degrees - a.start_angle) % 360.0 <= arc_sweep(a) + 1e-9


def arc_point_at(a: Arc, degrees: float) -> Point:
    ux, uy = unit_vector(degrees)
    return Point(x=a.center.x + a.radius * ux, y=a.center.y + a.radius * uy)


def arc_endpoints(a: Arc) -> tuple[Point, Point]:
    return arc_point_at(a, a.start_angle), arc_point_at(a, a.start_angle + arc_sweep(a))


def arc_point_distance(p: Point, a: Arc) -> float:
    """点到弧线本身的距离：角度落在弧内时取径向距离，否则取最近端点"""
    dx, dy = p.x - a.center.x, p.y - a.center.y
    d = math.hypot(dx, dy)
    if d == 0:
        return a.radius
    if arc_covers_angle(a, math.degrees(math.atan2(dy, dx))):
        return abs(d - a.radius)
    start, end = arc_endpoints(a)
    return min(point_distance(p, start), point_distance(p, end))


def arc_length(a: Arc) -> float:
    return a.radius * math.radians(arc_sweep(a))


def arc_polyline(a: Arc, step_deg: float = ARC_STEP_DEG) -> list[Point]:
    """把弧离散成折线，步长不超过 step_deg"""
    sweep = arc_sweep(a)
    steps = max(2, math.ceil(sweep / step_deg))
    return [arc_point_at(a, a.start_angle + sweep * i / steps) for i in range(steps + 1)]


# ---------------------------------------------------------------- bboxes

def _bbox_of_points(points: Sequence[Point]) -> BBox:
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    return BBox.from_bounds(min(xs), min(ys), max(xs), max(ys))


@singledispatch
def bbox_of(entity) -> BBox:
    """实体的紧致轴对齐包围盒"""
    raise GeometryError(f"不支持的实体类型: {type(entity).__name__}")


@bbox_of.register
def _(entity: BBox) -> BBox:
    return entity


@bbox_of.register
def _(entity: Point) -> BBox:
    return BBox(min=entity, max=entity)


@bbox_of.register
def _(entity: LineSegment) -> BBox:
    return _bbox_of_points([entity.a, entity.b])


@bbox_of.register
def _(entity: Polygon) -> BBox:
    return _bbox_of_points(entity.vertices)


@bbox_of.register
def _(entity: Rect) -> BBox:
    return BBox(min=entity.min_corner, max=entity.max_corner)


@bbox_of.register
def _(entity: Circle) -> BBox:
    c, r = entity.center, entity.radius
    return BBox.from_bounds(c.x - r, c.y - r, c.x + r, c.y + r)


@bbox_of.register
def _(entity: Arc) -> BBox:
    points = list(arc_endpoints(entity))
    for axis in (0, 90, 180, 270):
        if arc_covers_angle(entity, axis):
            points.append(arc_point_at(entity, axis))
    return _bbox_of_points(points)


@bbox_of.register
def _(entity: TextNode) -> BBox:
    return entity.bbox


@bbox_of.register
def _(entity: RightAngleSymbol) -> BBox:
    return _bbox_of_points(right_angle_square(entity))


@bbox_of.register
def _(entity: Face3D) -> BBox:
    return bbox_of(entity.projected)


def right_angle_square(symbol: RightAngleSymbol) -> list[Point]:
    """直角符号小方块的四个角点"""
    c, arm = symbol.corner, symbol.arm_length
    ux, uy = unit_vector(symbol.orientation)
    vx, vy = unit_vector(symbol.orientation + 90.0)
    return [
        c,
        Point(x=c.x + arm * ux, y=c.y + arm * uy),
        Point(x=c.x + arm * (ux + vx), y=c.y + arm * (uy + vy)),
        Point(x=c.x + arm * vx, y=c.y + arm * vy),
    ]


def bbox_union(boxes: Iterable[BBox]) -> BBox:
    """包围盒并集"""
    boxes = list(boxes)
    if not boxes:
        raise GeometryError("空列表无法求包围盒并集")
    return BBox.from_bounds(
        min(b.min.x for b in boxes),
        min(b.min.y for b in boxes),
        max(b.max.x for b in boxes),
        max(b.max.y for b in boxes),
    )


def bbox_intersection(a: BBox, b: BBox) -> BBox | None:
    """相交部分，不相交时返回 None（仅接触视为相交，面积为 0）"""
    min_x, min_y = max(a.min.x, b.min.x), max(a.min.y, b.min.y)
    max_x, max_y = min(a.max.x, b.max.x), min(a.max.y, b.max.y)
    if min_x > max_x or min_y > max_y:
        return None
    return BBox.from_bounds(min_x, min_y, max_x, max_y)


def bbox_intersection_area(a: BBox, b: BBox) -> float:
    width = min(a.max.x, b.max.x) - max(a.min.x, b.min.x)
    height = min(a.max.y, b.max.y) - max(a.min.y, b.min.y)
    if width <= 0 or height <= 0:
        return 0.0
    return width * height


def bbox_expand(b: BBox, margin: float) -> BBox:
    return BBox.from_bounds(b.min.x - margin, b.min.y - margin, b.max.x + margin, b.max.y + margin)


def bbox_contains(outer: BBox, inner: BBox, tol: float = EPS) -> bool:
    return (
        inner.min.x >= outer.min.x - tol
        and inner.min.y >= outer.min.y - tol
        and inner.max.x <= outer.max.x + tol
        and inner.max.y <= outer.max.y + tol
    )


# ---------------------------------------------------------------- clipping

def curve_to_linestring(curve: Curve) -> LineString:
    """线段、弧、圆周转成 shapely 折线"""
    if isinstance(curve, LineSegment):
        return LineString(_coords([curve.a, curve.b]))
    if isinstance(curve, Arc):
        return LineString(_coords(arc_polyline(curve)))
    if isinstance(curve, Circle):
        full = Arc(id=curve.id, center=curve.center, radius=curve.radius, start_angle=0.0, end_angle=360.0)
        return LineString(_coords(arc_polyline(full)))
    raise GeometryError(f"不支持的曲线类型: {type(curve).__name__}")


def curve_bbox_clip_length(curve: Curve, b: BBox) -> float:
    """曲线落在包围盒内（含边界）的长度；退化包围盒返回 0"""
    if b.width <= 0 or b.height <= 0:
        return 0.0
    clipped = curve_to_linestring(curve).intersection(shapely_box(b.min.x, b.min.y, b.max.x, b.max.y))
    return float(clipped.length)


def segment_bbox_clip_length(s: LineSegment, b: BBox) -> float:
    """线段落在包围盒内的长度"""
    return curve_bbox_clip_length(s, b)


# ---------------------------------------------------------------- 3D faces

def _face_array(f: Face3D) -> np.ndarray:
    return np.array([[v.x, v.y, v.z] for v in f.vertices], dtype=float)


def face_mean_z(f: Face3D) -> float:
    return float(_face_array(f)[:, 2].mean())


def face_normal(f: Face3D) -> tuple[float, float, float]:
    """Newell 法求面法向量并归一化，顶点共线时报错"""
    pts = _face_array(f)
    nxt = np.roll(pts, -1, axis=0)
    normal = np.array([
        np.sum((pts[:, 1] - nxt[:, 1]) * (pts[:, 2] + nxt[:, 2])),
        np.sum((pts[:, 2] - nxt[:, 2]) * (pts[:, 0] + nxt[:, 0])),
        np.sum((pts[:, 0] - nxt[:, 0]) * (pts[:, 1] + nxt[:, 1])),
    ])
    norm = float(np.linalg.norm(normal))
    if len(pts) < 3 or norm < 1e-9:
        raise GeometryError(f"面 {f.id} 顶点共线，法向量无定义")
    unit = normal / norm
    return float(unit[0]), float(unit[1]), float(unit[2])


__all__ = [
    "EPS",
    "unit_vector",
    "point_distance",
    "point_segment_distance",
    "segment_length",
    "polygon_contains",
    "polygon_perimeter",
    "polygon_area",
    "bbox_perimeter",
    "arc_sweep",
    "arc_covers_angle",
    "arc_point_at",
    "arc_endpoints",
    "arc_point_distance",
    "arc_length",
    "arc_polyline",
    "bbox_of",
    "right_angle_square",
    "bbox_union",
    "bbox_intersection",
    "bbox_intersection_area",
    "bbox_expand",
    "bbox_contains",
    "curve_to_linestring",
    "curve_bbox_clip_length",
    "segment_bbox_clip_length",
    "face_mean_z",
    "face_normal",
]
