"""二分类一致性统计：把判定与人工标注对齐为混淆矩阵，再计算 Cohen's κ

“阳性”表示检查失败：TP = 双方都判失败，TN = 双方都判通过。
人工标注为 NA 的位置不计入；模型给出 NA 视为“没有指出失败”。
"""
from enum import Enum
from typing import Mapping, NamedTuple, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.checks.models import RUBRIC_CRITERIA, Criterion, Rating, RubricReport, Verdict
from src.utils.common import round_half_even
from src.utils.exceptions import DatasetError, KappaUndefinedError

HumanLabel = Mapping[Criterion, Rating]


class Cell(str, Enum):
    TP = "tp"
    TN = "tn"
    FP = "fp"
    FN = "fn"


def binarize(model: Verdict, human: Rating) -> Optional[Cell]:
    """human=NA 时该位置不适用，返回 None"""
    if human is Rating.NA:
        return None
    model_fails = model is Verdict.FAIL
    human_fails = human is Rating.NO
    if model_fails:
        return Cell.TP if human_fails else Cell.FP
    return Cell.FN if human_fails else Cell.TN


class ConfusionMatrix(BaseModel):
    model_config = ConfigDict(frozen=True)

    tp: int = Field(0, ge=0)
    tn: int = Field(0, ge=0)
    fp: int = Field(0, ge=0)
    fn: int = Field(0, ge=0)

    @property
    def n(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(tp=self.tp + other.tp, tn=self.tn + other.tn, fp=self.fp + other.fp, fn=self.fn + other.fn)

    def with_cell(self, cell: Cell) -> "ConfusionMatrix":
        return self.model_copy(update={cell.value: getattr(self, cell.value) + 1})

    def as_array(self) -> np.ndarray:
        """行为模型（失败, 通过），列为人工（失败, 通过）"""
        return np.array([[self.tp, self.fp], [self.fn, self.tn]], dtype=np.int64)

    def swapped(self) -> "ConfusionMatrix":
        """交换“阳性”类别的定义"""
        return ConfusionMatrix(tp=self.tn, tn=self.tp, fp=self.fn, fn=self.fp)


def cohen_kappa(m: ConfusionMatrix) -> float:
    """κ = (p_o - p_e) / (1 - p_e)，按整数计数精确计算

    两方都把全部位置归为同一类时 p_e = p_o = 1，按完全一致返回 1。

    Raises:
        KappaUndefinedError: n = 0
    """
    if m.n == 0:
        raise KappaUndefinedError("没有可用的标注位置，κ 无定义")
    data = m.as_array()
    total = int(data.sum())
    agreed = int(np.trace(data))
    # n² · p_e，行和（模型）与列和（人工）逐类相乘
    chance = int(np.dot(data.sum(axis=1), data.sum(axis=0)))
    if chance == total * total:
        return 1.0
    return (total * agreed - chance) / (total * total - chance)


def format_kappa(value: Optional[float]) -> str:
    """保留三位小数，银行家舍入"""
    return "n/a" if value is None else round_half_even(value, 3)


class AgreementItem(NamedTuple):
    item_id: str
    model: Mapping[Criterion, Verdict]
    human: HumanLabel

    @classmethod
    def from_report(cls, item_id: str, report: RubricReport, human: HumanLabel) -> "AgreementItem":
        return cls(item_id, report.verdicts(), human)


class CriterionRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    criterion: Criterion
    matrix: ConfusionMatrix
    kappa: Optional[float] = Field(None, description="无定义时为 None")

    @property
    def applicable(self) -> int:
        return self.matrix.n


def _safe_kappa(m: ConfusionMatrix) -> Optional[float]:
    try:
        return cohen_kappa(m)
    except KappaUndefinedError:
        return None


class AgreementTable(BaseModel):
    """逐准则混淆矩阵与 κ，外加按适用位置汇总的总计"""

    model_config = ConfigDict(frozen=True)

    diagrams: int = Field(..., ge=0, description="参与统计的图数量 N")
    rows: tuple[CriterionRow, ...]
    pooled: ConfusionMatrix

    @model_validator(mode="after")
    def _pooled_is_sum(self) -> "AgreementTable":
        total = ConfusionMatrix()
        for row in self.rows:
            total = total + row.matrix
        if total != self.pooled:
            raise ValueError("汇总计数必须等于各准则计数之和")
        return self

    @property
    def pooled_kappa(self) -> Optional[float]:
        return _safe_kappa(self.pooled)

    @property
    def macro_kappa(self) -> Optional[float]:
        """各准则 κ 的算术平均，跳过无定义的行"""
        values = [row.kappa for row in self.rows if row.kappa is not None]
        return float(np.mean(values)) if values else None

    def row(self, criterion: Criterion) -> CriterionRow:
        for row in self.rows:
            if row.criterion == criterion:
                return row
        raise KeyError(criterion.value)

    def row_percent(self, count: int) -> float:
        """单准则行的百分比以图数量为分母"""
        return 100.0 * count / self.diagrams if self.diagrams else 0.0

    def total_percent(self, count: int) -> float:
        """总计行的百分比以适用位置数为分母"""
        return 100.0 * count / self.pooled.n if self.pooled.n else 0.0

    def to_dict(self) -> dict:
        def matrix(m: ConfusionMatrix) -> dict:
            return {"tp": m.tp, "tn": m.tn, "fp": m.fp, "fn": m.fn, "n": m.n}

        return {
            "diagrams": self.diagrams,
            "criteria": {
                row.criterion.value: {**matrix(row.matrix), "kappa": row.kappa} for row in self.rows
            },
            "pooled": {**matrix(self.pooled), "kappa": self.pooled_kappa},
            "macro_kappa": self.macro_kappa,
        }


def table_from_matrices(matrices: Mapping[Criterion, ConfusionMatrix], diagrams: int) -> AgreementTable:
    """直接由各准则计数构造表格，用于复现已发表的混淆矩阵"""
    rows = tuple(CriterionRow(criterion=c, matrix=m, kappa=_safe_kappa(m)) for c, m in matrices.items())
    pooled = ConfusionMatrix()
    for row in rows:
        pooled = pooled + row.matrix
    return AgreementTable(diagrams=diagrams, rows=rows, pooled=pooled)


def agreement_table(
    items: Sequence[AgreementItem],
    criteria: Sequence[Criterion] = RUBRIC_CRITERIA,
) -> AgreementTable:
    """逐位置二值化并累计

    Raises:
        DatasetError: items 为空，或某条目缺少所选准则的人工标注/模型判定
    """
    if not items:
        raise DatasetError("一致性统计需要至少一个条目")

    matrices = {criterion: ConfusionMatrix() for criterion in criteria}
    for item in items:
        for criterion in criteria:
            if criterion not in item.human:
                raise DatasetError(f"条目 {item.item_id} 缺少人工标注: {criterion.value}")
            if criterion not in item.model:
                raise DatasetError(f"条目 {item.item_id} 缺少模型判定: {criterion.value}")
            cell = binarize(item.model[criterion], item.human[criterion])
            if cell is not None:
                matrices[criterion] = matrices[criterion].with_cell(cell)
    return table_from_matrices(matrices, diagrams=len(items))


__all__ = [
    "HumanLabel",
    "Cell",
    "binarize",
    "ConfusionMatrix",
    "cohen_kappa",
    "format_kappa",
    "AgreementItem",
    "CriterionRow",
    "AgreementTable",
    "table_from_matrices",
    "agreement_table",
]
