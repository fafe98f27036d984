"""IR 不变量校验，违规作为数据返回"""
import math
from collections import Counter
from typing import Iterable, Iterator, Optional

from pydantic import BaseModel, ConfigDict

from .model import (
    Face3D,
    Point,
    Polygon,
    Rect,
    TextNode,
    TikzIR,
)

DEGENERATE_TOL = 1e-9
CONTAIN_TOL = 1e-7


class Violation(BaseModel):
    """一条不变量违规"""

    model_config = ConfigDict(frozen=True)

    entity_id: Optional[str]
    code: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.entity_id or '-'}: {self.message}"


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


def _same_point(p: Point, q: Point) -> bool:
    return abs(p.x - q.x) <= DEGENERATE_TOL and abs(p.y - q.y) <= DEGENERATE_TOL


def _all_ids(ir: TikzIR) -> Iterator[str]:
    if ir.canvas is not None:
        yield ir.canvas.id
    for group in (ir.clip_regions, ir.nodes, ir.segments, ir.shapes, ir.rectangles,
                  ir.circles, ir.arcs, ir.right_angle_symbols):
        for entity in group:
            yield entity.id
    for face in ir.faces3d:
        yield face.id
        yield face.projected.id


def _check_rect(rect: Rect) -> Iterable[Violation]:
    lo, hi = rect.min_corner, rect.max_corner
    if not _finite(lo.x, lo.y, hi.x, hi.y):
        yield Violation(entity_id=rect.id, code="non_finite", message="rectangle corner is not finite")
    elif lo.x > hi.x or lo.y > hi.y:
        yield Violation(entity_id=rect.id, code="rect_inverted", message="min_corner exceeds max_corner")


def _check_polygon(poly: Polygon, code_prefix: str = "polygon") -> Iterable[Violation]:
    if not all(_finite(v.x, v.y) for v in poly.vertices):
        yield Violation(entity_id=poly.id, code="non_finite", message="vertex is not finite")
        return
    if len(poly.vertices) < 3:
        yield Violation(
            entity_id=poly.id,
            code=f"{code_prefix}_too_few_vertices",
            message=f"{len(poly.vertices)} vertices, at least 3 required",
        )
        return
    for p, q in poly.edges():
        if _same_point(p, q):
            yield Violation(
                entity_id=poly.id,
                code=f"{code_prefix}_repeated_vertex",
                message=f"consecutive vertices coincide at ({p.x}, {p.y})",
            )
            break


def _check_node(node: TextNode) -> Iterable[Violation]:
    box = node.bbox
    if not _finite(node.position.x, node.position.y, box.min.x, box.min.y, box.max.x, box.max.y):
        yield Violation(entity_id=node.id, code="non_finite", message="position or bbox is not finite")
        return
    if box.min.x > box.max.x or box.min.y > box.max.y:
        yield Violation(entity_id=node.id, code="bbox_inverted", message="bbox min exceeds max")
        return
    # 锚点位置必须在文字框内（含边界）
    p = node.position
    if not (box.min.x - CONTAIN_TOL <= p.x <= box.max.x + CONTAIN_TOL
            and box.min.y - CONTAIN_TOL <= p.y <= box.max.y + CONTAIN_TOL):
        yield Violation(
            entity_id=node.id,
            code="bbox_excludes_anchor",
            message=f"bbox does not contain the {node.anchor.value} anchor at ({p.x}, {p.y})",
        )


def _check_face(face: Face3D) -> Iterable[Violation]:
    if not all(_finite(v.x, v.y, v.z) for v in face.vertices):
        yield Violation(entity_id=face.id, code="non_finite", message="vertex is not finite")
        return
    if len(face.vertices) < 3:
        yield Violation(
            entity_id=face.id,
            code="face_too_few_vertices",
            message=f"{len(face.vertices)} vertices, at least 3 required",
        )
    if len(face.projected.vertices) != len(face.vertices):
        yield Violation(
            entity_id=face.id,
            code="face_projection_mismatch",
            message="projected polygon and face have different vertex counts",
        )
    if not face.projected.closed:
        yield Violation(entity_id=face.id, code="face_projection_open", message="projected polygon must be closed")
    yield from _check_polygon(face.projected)


def validate_ir(ir: TikzIR) -> list[Violation]:
    """返回全部不变量违规，合法 IR 返回空列表"""
    violations: list[Violation] = []

    if not (math.isfinite(ir.unit_scale) and ir.unit_scale > 0):
        violations.append(Violation(entity_id=None, code="unit_scale", message="unit_scale must be finite and > 0"))

    counts = Counter(_all_ids(ir))
    for entity_id, count in counts.items():
        if count > 1:
            violations.append(
                Violation(entity_id=entity_id, code="duplicate_id", message=f"id used by {count} entities")
            )

    if ir.canvas is not None:
        violations.extend(_check_rect(ir.canvas))
    for rect in (*ir.clip_regions, *ir.rectangles):
        violations.extend(_check_rect(rect))

    for node in ir.nodes:
        violations.extend(_check_node(node))

    for seg in ir.segments:
        if not _finite(seg.a.x, seg.a.y, seg.b.x, seg.b.y):
            violations.append(Violation(entity_id=seg.id, code="non_finite", message="endpoint is not finite"))
        elif _same_point(seg.a, seg.b):
            violations.append(Violation(entity_id=seg.id, code="degenerate_segment", message="endpoints coincide"))

    for poly in ir.shapes:
        violations.extend(_check_polygon(poly))

    for circle in ir.circles:
        if not _finite(circle.center.x, circle.center.y, circle.radius):
            violations.append(Violation(entity_id=circle.id, code="non_finite", message="center or radius is not finite"))
        elif circle.radius <= 0:
            violations.append(Violation(entity_id=circle.id, code="circle_radius", message="radius must be > 0"))

    for arc in ir.arcs:
        if not _finite(arc.center.x, arc.center.y, arc.radius, arc.start_angle, arc.end_angle):
            violations.append(Violation(entity_id=arc.id, code="non_finite", message="arc field is not finite"))
        elif arc.radius <= 0:
            violations.append(Violation(entity_id=arc.id, code="arc_radius", message="radius must be > 0"))

    for symbol in ir.right_angle_symbols:
        if not _finite(symbol.corner.x, symbol.corner.y, symbol.arm_length, symbol.orientation):
            violations.append(Violation(entity_id=symbol.id, code="non_finite", message="symbol field is not finite"))
        elif symbol.arm_length <= 0:
            violations.append(Violation(entity_id=symbol.id, code="right_angle_arm", message="arm_length must be > 0"))

    for face in ir.faces3d:
        violations.extend(_check_face(face))

    return violations


__all__ = ["Violation", "validate_ir", "DEGENERATE_TOL"]
