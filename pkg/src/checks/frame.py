"""图形是否完整落在画布内"""
from typing import Optional

from src.geometry.kernel import bbox_contains, bbox_expand, bbox_intersection, bbox_of
from src.ir.model import BBox, TikzIR
from src.logger.logger import logger

from .elements import fmt
from .models import CheckConfig, CheckResult, Criterion, Finding


def working_canvas(ir: TikzIR) -> tuple[Optional[BBox], bool]:
    """画布与所有裁剪区域的交集

    Returns:
        (交集, 是否存在约束)。存在约束但交集为空或面积为 0 时返回 (None, True)。
    """
    regions = ([ir.canvas] if ir.canvas is not None else []) + list(ir.clip_regions)
    if not regions:
        return None, False
    current: Optional[BBox] = bbox_of(regions[0])
    for region in regions[1:]:
        current = bbox_intersection(current, bbox_of(region)) if current is not None else None
    if current is None or current.width <= 0 or current.height <= 0:
        return None, True
    return current, True


def _overshoot(bounds: BBox, box: BBox) -> float:
    return max(
        bounds.min.x - box.min.x,
        bounds.min.y - box.min.y,
        box.max.x - bounds.max.x,
        box.max.y - bounds.max.y,
    )


def check_in_frame(ir: TikzIR, cfg: CheckConfig) -> CheckResult:
    """所有实体与非空标签框都必须在向外缓冲后的画布内；没有页面范围也没有裁剪区域时失败"""
    canvas, constrained = working_canvas(ir)
    if not constrained:
        return CheckResult.from_findings(
            Criterion.IN_FRAME, [Finding(message="no page bounds or clip regions")]
        )
    if canvas is None:
        region_ids = tuple(r.id for r in ([ir.canvas] if ir.canvas else []) + list(ir.clip_regions))
        return CheckResult.from_findings(
            Criterion.IN_FRAME, [Finding(entity_ids=region_ids, message="working canvas is empty")]
        )

    bounds = bbox_expand(canvas, cfg.canvas_buffer_pt)
    findings: list[Finding] = []
    for entity in (*ir.entities(), *ir.labels()):
        box = bbox_of(entity)
        if not bbox_contains(bounds, box):
            findings.append(Finding(
                entity_ids=(entity.id,),
                message=f"{type(entity).__name__} extends {fmt(_overshoot(bounds, box))}pt beyond the canvas",
            ))

    if findings:
        logger.debug(f"画布检查失败，首个越界实体: {findings[0].entity_ids[0]}，共 {len(findings)} 个")
    return CheckResult.from_findings(Criterion.IN_FRAME, findings)
