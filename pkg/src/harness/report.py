"""由运行清单生成对比报表：模型对比、逐准则 κ、混淆矩阵

所有 κ 都由报表中出现的混淆计数现算，pooled κ 与 macro κ 分开标注。
"""
from typing import Any, Sequence

from src.checks.models import JUDGE_CRITERIA, RUBRIC_CRITERIA
from src.metrics.agreement import AgreementTable, ConfusionMatrix, format_kappa

from .manifest import RunManifest


def _align(rows: list[list[str]]) -> str:
    """首列左对齐，其余右对齐"""
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for index, row in enumerate(rows):
        cells = [row[0].ljust(widths[0])] + [cell.rjust(widths[i]) for i, cell in enumerate(row[1:], start=1)]
        lines.append("  ".join(cells).rstrip())
        if index == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _count(count: int, percent: float) -> str:
    return f"{count} ({percent:.1f}%)"


def comparison_table(manifests: Sequence[RunManifest]) -> str:
    rows = [["Pipeline", "Pooled κ", "Macro κ", "Time (s)", "Cost ($)", "Scored", "Errored"]]
    for manifest in manifests:
        table = manifest.agreement()
        rows.append([
            manifest.label + (" [partial]" if manifest.partial else ""),
            format_kappa(table.pooled_kappa if table else None),
            format_kappa(table.macro_kappa if table else None),
            f"{manifest.avg_seconds:.2f}",
            f"{manifest.usage.cost_usd:.2f}",
            str(len(manifest.scored)),
            str(len(manifest.errored)),
        ])
    return _align(rows)


def criterion_kappa_table(manifests: Sequence[RunManifest]) -> str:
    """行为准则、列为清单"""
    tables = [m.agreement() for m in manifests]
    rows = [["Criterion", *(m.label for m in manifests)]]
    for criterion in RUBRIC_CRITERIA:
        rows.append([
            criterion.display_name,
            *(format_kappa(t.row(criterion).kappa) if t else "n/a" for t in tables),
        ])
    return _align(rows)


def confusion_table(table: AgreementTable) -> str:
    """逐准则行的百分比以图数量为分母，总计行以适用位置数为分母"""
    rows = [["Criterion", "TP", "TN", "FP", "FN", "κ"]]
    for row in table.rows:
        m = row.matrix
        rows.append([
            row.criterion.display_name,
            *(_count(v, table.row_percent(v)) for v in (m.tp, m.tn, m.fp, m.fn)),
            format_kappa(row.kappa),
        ])
    p: ConfusionMatrix = table.pooled
    rows.append([
        f"Total (N={p.n})",
        *(_count(v, table.total_percent(v)) for v in (p.tp, p.tn, p.fp, p.fn)),
        format_kappa(table.pooled_kappa),
    ])
    return _align(rows)


def _summary(manifest: RunManifest) -> dict[str, Any]:
    table = manifest.agreement()
    data: dict[str, Any] = {
        "label": manifest.label,
        "pipeline": manifest.pipeline.value,
        "condition": manifest.condition,
        "partial": manifest.partial,
        "items": len(manifest.items),
        "scored": len(manifest.scored),
        "errored": len(manifest.errored),
        "avg_seconds": manifest.avg_seconds,
        "cost_usd": manifest.usage.cost_usd,
        "pooled_kappa": table.pooled_kappa if table else None,
        "macro_kappa": table.macro_kappa if table else None,
        "agreement": table.to_dict() if table else None,
    }
    if manifest.supports(JUDGE_CRITERIA):
        data["judge_rows_agreement"] = manifest.agreement(JUDGE_CRITERIA).to_dict()
    return data


def render_report(manifests: Sequence[RunManifest]) -> tuple[str, dict[str, Any]]:
    """返回 (文本报表, JSON 报表)"""
    sections = [
        "Model comparison",
        comparison_table(manifests),
        "",
        "Per-criterion κ",
        criterion_kappa_table(manifests),
    ]
    for manifest in manifests:
        table = manifest.agreement()
        sections += ["", f"Confusion breakdown: {manifest.label}"]
        sections.append(confusion_table(table) if table else "no scored items")
        if manifest.supports(JUDGE_CRITERIA):
            sections += ["", f"Confusion breakdown, all judge rows: {manifest.label}"]
            sections.append(confusion_table(manifest.agreement(JUDGE_CRITERIA)))

    return "\n".join(sections) + "\n", {"manifests": [_summary(m) for m in manifests]}


__all__ = ["render_report", "comparison_table", "criterion_kappa_table", "confusion_table"]
