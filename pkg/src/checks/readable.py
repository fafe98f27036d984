"""元素尺寸是否可读"""
from typing import NamedTuple

from src.geometry.kernel import EPS, arc_length, bbox_of, bbox_union, polygon_perimeter, segment_length
from src.ir.model import BBox, TikzIR

from .elements import fmt
from .models import CheckConfig, CheckResult, Criterion, Finding


class Sized(NamedTuple):
    size: float
    entity_id: str
    kind: str
    bbox: BBox


def _min_dim(box: BBox) -> float:
    return min(box.width, box.height)


def _collect(ir: TikzIR) -> list[Sized]:
    # 直角符号本身就很小，不参与可读性比较
    items: list[Sized] = []
    for poly in ir.shapes:
        box = bbox_of(poly)
        size = _min_dim(box) if poly.closed else polygon_perimeter(poly)
        items.append(Sized(size, poly.id, "polygon" if poly.closed else "polyline", box))
    for rect in ir.rectangles:
        box = bbox_of(rect)
        items.append(Sized(_min_dim(box), rect.id, "rectangle", box))
    for circle in ir.circles:
        box = bbox_of(circle)
        items.append(Sized(_min_dim(box), circle.id, "circle", box))
    for seg in ir.segments:
        items.append(Sized(segment_length(seg), seg.id, "segment", bbox_of(seg)))
    for arc in ir.arcs:
        items.append(Sized(arc_length(arc), arc.id, "arc", bbox_of(arc)))
    for face in ir.faces3d:
        box = bbox_of(face)
        items.append(Sized(_min_dim(box), face.id, "face", box))
    for node in ir.labels():
        items.append(Sized(_min_dim(node.bbox), node.id, "label", node.bbox))
    return items


def check_readable(ir: TikzIR, cfg: CheckConfig) -> CheckResult:
    """τ = 整体包围盒短边 × readable_rel；线状元素比长度，其余比包围盒短边"""
    items = _collect(ir)
    if not items:
        return CheckResult.from_findings(Criterion.READABLE, [], ["no elements"])

    diagram = bbox_union(item.bbox for item in items)
    threshold = _min_dim(diagram) * cfg.readable_rel
    undersized = sorted((item for item in items if item.size < threshold - EPS), key=lambda i: (i.size, i.entity_id))
    findings = [
        Finding(
            entity_ids=(item.entity_id,),
            message=f"{item.kind} size {fmt(item.size)}pt below readability threshold {fmt(threshold)}pt",
        )
        for item in undersized
    ]
    return CheckResult.from_findings(Criterion.READABLE, findings)
