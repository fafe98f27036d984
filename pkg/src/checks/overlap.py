"""元素之间是否存在有问题的重叠"""
from itertools import combinations
from typing import Union

from src.geometry.kernel import (
    EPS,
    bbox_intersection_area,
    bbox_of,
    bbox_perimeter,
    curve_bbox_clip_length,
    face_mean_z,
    face_normal,
)
from src.ir.model import Arc, Circle, LineSegment, TextNode, TikzIR
from src.ir.text import clean_latex_text
from src.logger.logger import logger
from src.utils.exceptions import GeometryError

from .elements import collect_edges, fmt
from .models import CheckConfig, CheckResult, Criterion, Finding

Curve = Union[LineSegment, Arc, Circle]


def _curves(ir: TikzIR) -> list[Curve]:
    curves: list[Curve] = [e.as_segment() for e in collect_edges(ir)]
    curves.extend(ir.arcs)
    curves.extend(ir.circles)
    return curves


def _text_text(labels: list[TextNode], cfg: CheckConfig) -> list[Finding]:
    findings = []
    for first, second in combinations(labels, 2):
        if clean_latex_text(first.text) == clean_latex_text(second.text):
            continue
        smaller = min(first.bbox.area, second.bbox.area)
        if smaller <= 0:
            continue
        shared = bbox_intersection_area(first.bbox, second.bbox)
        if shared > cfg.text_overlap_frac * smaller:
            findings.append(Finding(
                entity_ids=(first.id, second.id),
                message=f"labels overlap by {fmt(shared / smaller * 100)}% of the smaller box",
            ))
    return findings


def _obscured(labels: list[TextNode], curves: list[Curve], cfg: CheckConfig) -> list[Finding]:
    findings = []
    for node in labels:
        limit = cfg.text_obscure_frac * bbox_perimeter(node.bbox)
        for curve in curves:
            inside = curve_bbox_clip_length(curve, node.bbox)
            if inside > limit:
                findings.append(Finding(
                    entity_ids=(node.id, curve.id),
                    message=f"{curve.id} runs {fmt(inside)}pt through label (limit {fmt(limit)}pt)",
                ))
    return findings


def _depth_order(ir: TikzIR) -> list[Finding]:
    """后画的面更远且朝向观察者（+z）时，说明远面盖住了近面"""
    findings = []
    for i, j in combinations(range(len(ir.faces3d)), 2):
        near, late = ir.faces3d[i], ir.faces3d[j]
        if bbox_intersection_area(bbox_of(near.projected), bbox_of(late.projected)) <= 0:
            continue
        if face_mean_z(late) >= face_mean_z(near) - EPS:
            continue
        try:
            facing = face_normal(late)[2] > EPS
        except GeometryError:
            continue
        if facing:
            findings.append(Finding(
                entity_ids=(late.id, near.id),
                message=f"depth ordering inconsistent: {late.id} is behind {near.id} but drawn over it",
            ))
    return findings


def check_overlap(ir: TikzIR, cfg: CheckConfig) -> CheckResult:
    labels = ir.labels()
    findings = _text_text(labels, cfg) + _obscured(labels, _curves(ir), cfg) + _depth_order(ir)
    logger.debug(f"重叠检查: 标签 {len(labels)} 个, 三维面 {len(ir.faces3d)} 个, 问题 {len(findings)} 个")
    return CheckResult.from_findings(Criterion.OVERLAP, findings)
