"""角度标签与所画弧、直角符号的一致性"""
import math

from src.geometry.kernel import EPS, arc_point_distance, arc_sweep, point_segment_distance
from src.ir.model import RightAngleSymbol, TikzIR
from src.ir.text import LabelKind, clean_latex_text, parse_angle_value
from src.logger.logger import logger

from .elements import Edge, classify_label, collect_edges, fmt, label_point
from .models import CheckConfig, CheckResult, Criterion, Finding


def _direction(edge: Edge) -> tuple[float, float]:
    return edge.b.x - edge.a.x, edge.b.y - edge.a.y


def _angle_between(first: Edge, second: Edge) -> float:
    """两条边所在直线的夹角，0..90 度"""
    (ux, uy), (vx, vy) = _direction(first), _direction(second)
    cos_angle = abs(ux * vx + uy * vy) / (math.hypot(ux, uy) * math.hypot(vx, vy))
    return math.degrees(math.acos(min(1.0, cos_angle)))


def _right_angle_findings(symbol: RightAngleSymbol, edges: list[Edge], cfg: CheckConfig) -> list[Finding]:
    """只比较经过直角符号顶点的边；任意一对接近 90 度即通过"""
    incident = [e for e in edges if point_segment_distance(symbol.corner, (e.a, e.b)) <= EPS]
    if len(incident) < 2:
        return [Finding(entity_ids=(symbol.id,), message="dangling right-angle symbol")]

    pairs = [(incident[i], incident[j]) for i in range(len(incident)) for j in range(i + 1, len(incident))]
    first, second = min(pairs, key=lambda pair: abs(90.0 - _angle_between(*pair)))
    between = _angle_between(first, second)
    if abs(90.0 - between) > cfg.angle_eps_deg:
        return [Finding(
            entity_ids=(symbol.id, first.id, second.id),
            message=f"right-angle symbol on non-right corner ({fmt(between)}°)",
        )]
    return []


def check_angle_labels(ir: TikzIR, cfg: CheckConfig) -> CheckResult:
    """每个角度标签匹配最近的弧，比较标注度数与弧的扫角"""
    angle_labels = [n for n in ir.labels() if classify_label(n) == LabelKind.ANGLE]
    if not ir.arcs and not angle_labels and not ir.right_angle_symbols:
        return CheckResult.not_applicable(Criterion.ANGLES, "no arcs, angle labels or right-angle symbols")

    findings: list[Finding] = []
    for node in angle_labels:
        if not ir.arcs:
            findings.append(Finding(entity_ids=(node.id,), message="angle label has no arc"))
            continue
        point = label_point(node)
        distance, arc = min(((arc_point_distance(point, a), a) for a in ir.arcs), key=lambda item: item[0])
        tolerance = max(cfg.adaptive_tol_base * arc.radius, cfg.label_assoc_max_pt)
        if distance > tolerance:
            findings.append(Finding(
                entity_ids=(node.id, arc.id),
                message=f"label too far from arc ({fmt(distance)}pt > {fmt(tolerance)}pt)",
            ))
            continue
        degrees = parse_angle_value(clean_latex_text(node.text))
        if degrees is None:
            findings.append(Finding(entity_ids=(node.id,), message="unparseable angle label"))
            continue
        sweep = arc_sweep(arc)
        if abs(sweep - degrees) > cfg.angle_eps_deg:
            findings.append(Finding(
                entity_ids=(node.id, arc.id),
                message=f"angle label {fmt(degrees)}° does not match arc sweep {fmt(sweep)}°",
            ))

    edges = collect_edges(ir)
    for symbol in ir.right_angle_symbols:
        findings.extend(_right_angle_findings(symbol, edges, cfg))

    logger.debug(f"角度检查: 标签 {len(angle_labels)} 个, 弧 {len(ir.arcs)} 个, 问题 {len(findings)} 个")
    return CheckResult.from_findings(Criterion.ANGLES, findings)
