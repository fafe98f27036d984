"""评分准则、判定结果与检查配置"""
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Criterion(str, Enum):
    """评分准则，取值与评审提示词中的 JSON 键一致"""
    SHAPE_CLOSED = "shape_outlines_are_closed"
    ANGLES = "angle_labels_matches_arcs"
    PROPORTIONS = "labeled_lengths_areas_match_proportions"
    CORE_PROPERTIES = "core_mathematical_properties_of_shapes_correct"
    IN_FRAME = "diagram_fully_in_canvas"
    READABLE = "diagram_elements_are_readable_size"
    ASSOCIATION = "labels_associated_with_elements"
    OVERLAP = "diagram_elements_dont_problematically_overlap"

    @property
    def allows_na(self) -> bool:
        return self in NA_CRITERIA

    @property
    def display_name(self) -> str:
        return CRITERION_TITLES[self]


# 规则检查覆盖的六项，报告顺序固定
RUBRIC_CRITERIA: tuple[Criterion, ...] = (
    Criterion.ANGLES,
    Criterion.PROPORTIONS,
    Criterion.IN_FRAME,
    Criterion.READABLE,
    Criterion.ASSOCIATION,
    Criterion.OVERLAP,
)

# 评审提示词里的全部八项，按提示词顺序
JUDGE_CRITERIA: tuple[Criterion, ...] = (
    Criterion.SHAPE_CLOSED,
    Criterion.ANGLES,
    Criterion.PROPORTIONS,
    Criterion.CORE_PROPERTIES,
    Criterion.IN_FRAME,
    Criterion.READABLE,
    Criterion.ASSOCIATION,
    Criterion.OVERLAP,
)

NA_CRITERIA = frozenset({Criterion.ANGLES, Criterion.PROPORTIONS, Criterion.ASSOCIATION})

CRITERION_TITLES = {
    Criterion.SHAPE_CLOSED: "Shape is closed",
    Criterion.ANGLES: "Labeled angles match drawn angles",
    Criterion.PROPORTIONS: "Labeled lengths/areas match proportions",
    Criterion.CORE_PROPERTIES: "Core mathematical properties",
    Criterion.IN_FRAME: "Diagram fully in frame",
    Criterion.READABLE: "Elements scaled to be readable",
    Criterion.ASSOCIATION: "Labels associated with elements",
    Criterion.OVERLAP: "Elements don't problematically overlap",
}


class Verdict(str, Enum):
    PASS = "Pass"
    FAIL = "Fail"
    NA = "NA"


class Rating(str, Enum):
    """人工标注或评审模型给出的取值，兼容提示词里的 "N/A" 写法"""
    YES = "Yes"
    NO = "No"
    NA = "NA"

    @classmethod
    def _missing_(cls, value: object) -> Optional["Rating"]:
        if isinstance(value, str):
            key = value.strip().replace("/", "").upper()
            for member in cls:
                if member.value.upper() == key:
                    return member
        return None

    @property
    def prompt_value(self) -> str:
        return "N/A" if self is Rating.NA else self.value


class Finding(BaseModel):
    """一条失败原因，引用相关实体 id"""

    model_config = ConfigDict(frozen=True)

    entity_ids: tuple[str, ...] = ()
    message: str


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    criterion: Criterion
    verdict: Verdict
    findings: tuple[Finding, ...] = ()
    notes: tuple[str, ...] = Field(default=(), description="不影响判定的说明，例如关联并列")

    @model_validator(mode="after")
    def _verdict_matches_findings(self) -> "CheckResult":
        if self.verdict == Verdict.FAIL and not self.findings:
            raise ValueError(f"{self.criterion.value}: Fail 必须至少带一条 finding")
        if self.verdict != Verdict.FAIL and self.findings:
            raise ValueError(f"{self.criterion.value}: 只有 Fail 可以带 finding")
        if self.verdict == Verdict.NA and not self.criterion.allows_na:
            raise ValueError(f"{self.criterion.value}: 该准则不允许 NA")
        return self

    @classmethod
    def from_findings(
        cls, criterion: Criterion, findings: list[Finding], notes: Optional[list[str]] = None
    ) -> "CheckResult":
        verdict = Verdict.FAIL if findings else Verdict.PASS
        return cls(criterion=criterion, verdict=verdict, findings=tuple(findings), notes=tuple(notes or ()))

    @classmethod
    def not_applicable(cls, criterion: Criterion, note: Optional[str] = None) -> "CheckResult":
        return cls(criterion=criterion, verdict=Verdict.NA, notes=(note,) if note else ())

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "findings": [{"entity_ids": list(f.entity_ids), "message": f.message} for f in self.findings],
            "notes": list(self.notes),
        }


class RubricReport(BaseModel):
    """六项准则的检查结果"""

    model_config = ConfigDict(frozen=True)

    results: tuple[CheckResult, ...]

    @model_validator(mode="after")
    def _six_criteria(self) -> "RubricReport":
        criteria = tuple(r.criterion for r in self.results)
        if criteria != RUBRIC_CRITERIA:
            raise ValueError(f"报告准则必须按固定顺序包含六项，实际为: {[c.value for c in criteria]}")
        return self

    @property
    def overall_valid(self) -> bool:
        return all(r.verdict in (Verdict.PASS, Verdict.NA) for r in self.results)

    def get(self, criterion: Criterion) -> CheckResult:
        for result in self.results:
            if result.criterion == criterion:
                return result
        raise KeyError(criterion.value)

    def verdicts(self) -> dict[Criterion, Verdict]:
        return {r.criterion: r.verdict for r in self.results}

    def to_dict(self) -> dict[str, Any]:
        """报告 JSON：准则按固定顺序，最后是 overall_valid"""
        data: dict[str, Any] = {r.criterion.value: r.to_dict() for r in self.results}
        data["overall_valid"] = self.overall_valid
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RubricReport":
        results = []
        for criterion in RUBRIC_CRITERIA:
            entry = data[criterion.value]
            results.append(CheckResult(
                criterion=criterion,
                verdict=Verdict(entry["verdict"]),
                findings=tuple(Finding(entity_ids=tuple(f["entity_ids"]), message=f["message"])
                               for f in entry.get("findings", [])),
                notes=tuple(entry.get("notes", [])),
            ))
        return cls(results=tuple(results))


class CheckConfig(BaseModel):
    """规则检查的全部数值阈值"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    eps_proportion: float = Field(0.10, gt=0, le=1, description="比例一致性相对容差")
    label_assoc_max_pt: float = Field(12.0, gt=0, description="标签与线段关联的最大距离(pt)")
    canvas_buffer_pt: float = Field(2.0, gt=0, description="画布向外缓冲(pt)")
    readable_rel: float = Field(0.02, gt=0, le=1, description="可读性相对阈值")
    text_overlap_frac: float = Field(0.05, gt=0, le=1, description="文字框重叠面积比例阈值")
    text_obscure_frac: float = Field(0.4, gt=0, le=1, description="线条穿过文字框长度占周长比例阈值")
    angle_eps_deg: float = Field(2.0, gt=0, description="角度容差(度)")
    adaptive_tol_base: float = Field(0.5, gt=0, le=1, description="自适应容差占实体尺寸的比例")
    tie_margin_pt: float = Field(1.0, gt=0, description="关联并列判定间距(pt)")


__all__ = [
    "Criterion",
    "RUBRIC_CRITERIA",
    "JUDGE_CRITERIA",
    "NA_CRITERIA",
    "Verdict",
    "Rating",
    "Finding",
    "CheckResult",
    "RubricReport",
    "CheckConfig",
]
