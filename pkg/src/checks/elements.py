"""检查共用的实体收集与标签分类"""
from typing import NamedTuple

from src.ir.model import LineSegment, Point, Polygon, Rect, TextNode, TikzIR
from src.ir.text import LabelKind


class Edge(NamedTuple):
    """可与标签关联的直边：独立线段或多边形/矩形/投影面的一条边"""
    id: str
    owner: str
    a: Point
    b: Point
    is_segment: bool

    def as_segment(self) -> LineSegment:
        return LineSegment(id=self.id, a=self.a, b=self.b)


def classify_label(node: TextNode) -> LabelKind:
    """角度 / 数值 / 文字"""
    return node.kind


def label_point(node: TextNode) -> Point:
    """标签的参考点：文字框中心"""
    return node.bbox.center


def rect_as_polygon(rect: Rect) -> Polygon:
    return Polygon(id=rect.id, vertices=rect.corners(), closed=True)


def closed_polygons(ir: TikzIR) -> list[Polygon]:
    """闭合多边形、矩形与三维面的投影，按 IR 字段顺序"""
    polygons = [p for p in ir.shapes if p.closed]
    polygons.extend(rect_as_polygon(r) for r in ir.rectangles)
    polygons.extend(f.projected for f in ir.faces3d)
    return polygons


def _polygon_edges(poly: Polygon, owner: str) -> list[Edge]:
    return [
        Edge(id=f"{owner}#e{i}", owner=owner, a=a, b=b, is_segment=False)
        for i, (a, b) in enumerate(poly.edges())
    ]


def collect_edges(ir: TikzIR) -> list[Edge]:
    """所有直边：线段在前，其后是多边形、矩形、投影面的边"""
    edges = [Edge(id=s.id, owner=s.id, a=s.a, b=s.b, is_segment=True) for s in ir.segments]
    for poly in ir.shapes:
        edges.extend(_polygon_edges(poly, poly.id))
    for rect in ir.rectangles:
        edges.extend(_polygon_edges(rect_as_polygon(rect), rect.id))
    for face in ir.faces3d:
        edges.extend(_polygon_edges(face.projected, face.id))
    return edges


def fmt(value: float) -> str:
    """finding 里的数字格式"""
    return f"{value:.2f}"
