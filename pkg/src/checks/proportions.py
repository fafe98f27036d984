"""标注长度/面积与图形比例是否一致"""
import math
from itertools import combinations
from typing import NamedTuple, Optional

from src.geometry.kernel import point_segment_distance, polygon_area, polygon_contains, segment_length
from src.ir.model import TextNode, TikzIR
from src.ir.text import LabelKind, clean_latex_text, parse_numeric_value
from src.logger.logger import logger

from .elements import Edge, classify_label, closed_polygons, collect_edges, fmt, label_point
from .models import CheckConfig, CheckResult, Criterion, Finding


class Measured(NamedTuple):
    label: TextNode
    value: float
    target_id: str
    measure: float


def _nearest_edge(node: TextNode, edges: list[Edge]) -> tuple[Optional[Edge], float]:
    best, best_d = None, math.inf
    point = label_point(node)
    for edge in edges:
        d = point_segment_distance(point, (edge.a, edge.b))
        if d < best_d:
            best, best_d = edge, d
    return best, best_d


def _pairwise(items: list[Measured], what: str, cfg: CheckConfig) -> list[Finding]:
    findings = []
    for first, second in combinations(items, 2):
        lhs = first.measure * second.value
        rhs = second.measure * first.value
        if abs(lhs - rhs) > cfg.eps_proportion * max(abs(lhs), abs(rhs)):
            findings.append(Finding(
                entity_ids=(first.label.id, first.target_id, second.label.id, second.target_id),
                message=(
                    f"{what} labels '{first.label.text}' and '{second.label.text}' disagree with drawn "
                    f"{what}s {fmt(first.measure)} and {fmt(second.measure)}"
                ),
            ))
    return findings


def check_proportions(ir: TikzIR, cfg: CheckConfig) -> CheckResult:
    """数值标签两两比较：|m_i·v_j − m_j·v_i| 不超过 ε·max"""
    numeric = [n for n in ir.labels() if classify_label(n) == LabelKind.NUMERIC]
    if not numeric:
        return CheckResult.not_applicable(Criterion.PROPORTIONS, "no numeric labels")

    edges = collect_edges(ir)
    polygons = closed_polygons(ir)
    lengths: list[Measured] = []
    areas: list[Measured] = []
    notes: list[str] = []

    for node in numeric:
        value = parse_numeric_value(clean_latex_text(node.text))
        edge, distance = _nearest_edge(node, edges)
        if edge is not None and distance <= cfg.label_assoc_max_pt:
            lengths.append(Measured(node, value, edge.id, segment_length((edge.a, edge.b))))
            continue
        containing = [p for p in polygons if polygon_contains(p, label_point(node))]
        if containing:
            # 嵌套时取面积最小的多边形
            target = min(containing, key=polygon_area)
            areas.append(Measured(node, value, target.id, polygon_area(target)))
        elif edge is not None:
            lengths.append(Measured(node, value, edge.id, segment_length((edge.a, edge.b))))
        else:
            notes.append(f"label '{node.text}' has no segment or polygon to measure")

    logger.debug(f"比例检查: 长度标签 {len(lengths)} 个, 面积标签 {len(areas)} 个")
    findings = _pairwise(lengths, "length", cfg) + _pairwise(areas, "area", cfg)
    return CheckResult.from_findings(Criterion.PROPORTIONS, findings, notes)
