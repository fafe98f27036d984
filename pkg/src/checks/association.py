"""标签是否关联到正确的图形元素"""
from typing import NamedTuple

from src.geometry.kernel import (
    arc_point_distance,
    bbox_of,
    point_distance,
    point_segment_distance,
    polygon_contains,
    segment_length,
)
from src.ir.model import Point, TextNode, TikzIR
from src.ir.text import LabelKind
from src.logger.logger import logger

from .elements import classify_label, closed_polygons, collect_edges, fmt, label_point
from .models import CheckConfig, CheckResult, Criterion, Finding


class Candidate(NamedTuple):
    distance: float
    priority: int
    index: int
    entity_id: str
    size: float


def _edge_candidates(ir: TikzIR, point: Point, priority: int, start: int) -> list[Candidate]:
    return [
        Candidate(point_segment_distance(point, (e.a, e.b)), priority, start + i, e.id, segment_length((e.a, e.b)))
        for i, e in enumerate(collect_edges(ir))
    ]


def _arc_candidates(ir: TikzIR, point: Point, priority: int, start: int) -> list[Candidate]:
    return [
        Candidate(arc_point_distance(point, a), priority, start + i, a.id, a.radius)
        for i, a in enumerate(ir.arcs)
    ]


def _circle_candidates(ir: TikzIR, point: Point, priority: int, start: int) -> list[Candidate]:
    return [
        Candidate(abs(point_distance(point, c.center) - c.radius), priority, start + i, c.id, c.radius)
        for i, c in enumerate(ir.circles)
    ]


def _region_candidates(ir: TikzIR, point: Point) -> list[Candidate]:
    found: list[Candidate] = []
    for i, poly in enumerate(closed_polygons(ir)):
        if polygon_contains(poly, point):
            box = bbox_of(poly)
            found.append(Candidate(0.0, 0, i, poly.id, min(box.width, box.height)))
    offset = len(found)
    for i, circle in enumerate(ir.circles):
        if point_distance(point, circle.center) <= circle.radius:
            found.append(Candidate(0.0, 0, offset + i, circle.id, 2 * circle.radius))
    return found


def candidates_for(node: TextNode, ir: TikzIR) -> list[Candidate]:
    """按标签类别生成候选元素，按 (距离, 优先级, 下标) 排序"""
    point = label_point(node)
    kind = classify_label(node)
    if kind == LabelKind.ANGLE:
        found = _arc_candidates(ir, point, 0, 0)
    elif kind == LabelKind.NUMERIC:
        found = _edge_candidates(ir, point, 0, 0)
    else:
        found = _region_candidates(ir, point)
        found += _edge_candidates(ir, point, 1, len(found))
        found += _arc_candidates(ir, point, 2, len(found))
        found += _circle_candidates(ir, point, 2, len(found))
    return sorted(found, key=lambda c: (c.distance, c.priority, c.index))


def check_label_association(ir: TikzIR, cfg: CheckConfig) -> CheckResult:
    """每个标签选最近候选；距离超过自适应容差即失败，并列只记入 notes"""
    labels = ir.labels()
    if not labels:
        return CheckResult.not_applicable(Criterion.ASSOCIATION, "no labels")

    findings: list[Finding] = []
    notes: list[str] = []
    for node in labels:
        ranked = candidates_for(node, ir)
        if not ranked:
            findings.append(Finding(
                entity_ids=(node.id,),
                message=f"label not associated: no {classify_label(node).value} candidates",
            ))
            continue
        best = ranked[0]
        tolerance = max(cfg.adaptive_tol_base * best.size, cfg.label_assoc_max_pt)
        if best.distance > tolerance:
            findings.append(Finding(
                entity_ids=(node.id, best.entity_id),
                message=f"label not associated ({fmt(best.distance)}pt > {fmt(tolerance)}pt)",
            ))
            continue
        rivals = [c for c in ranked[1:] if c.entity_id != best.entity_id]
        if rivals and rivals[0].distance - best.distance <= cfg.tie_margin_pt:
            notes.append(f"label {node.id} ties between {best.entity_id} and {rivals[0].entity_id}")

    logger.debug(f"关联检查: 标签 {len(labels)} 个, 问题 {len(findings)} 个, 并列 {len(notes)} 个")
    return CheckResult.from_findings(Criterion.ASSOCIATION, findings, notes)
