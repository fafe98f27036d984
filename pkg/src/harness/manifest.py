"""运行清单：一次评测的配置快照、逐条目结果与汇总用量

清单写入后不再修改；相同输入与相同模拟夹具重新运行得到逐字节相同的清单。
"""
import json
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.ai_core.models import JudgeResponse, UsageRecord
from src.checks.models import JUDGE_CRITERIA, RUBRIC_CRITERIA, Criterion, Rating, RubricReport, Verdict
from src.metrics.agreement import AgreementItem, AgreementTable, agreement_table
from src.utils.common import canonical_json, write_text
from src.utils.exceptions import ConfigError, DatasetError

MANIFEST_VERSION = 1


class PipelineKind(str, Enum):
    DETERMINISTIC = "deterministic"
    BACKTRANSLATE = "backtranslate"
    JUDGE = "judge"


class ItemStatus(str, Enum):
    SCORED = "scored"
    ERRORED = "errored"


_RATING_VERDICTS = {Rating.YES: Verdict.PASS, Rating.NO: Verdict.FAIL, Rating.NA: Verdict.NA}


class ItemResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    status: ItemStatus
    human: dict[Criterion, Rating]
    report: Optional[RubricReport] = None
    judge: Optional[JudgeResponse] = None
    error_type: Optional[str] = None
    error: Optional[str] = None
    skipped_constructs: int = Field(0, ge=0, description="确定性前端跳过的构造数")
    usage: UsageRecord = Field(default_factory=UsageRecord)

    def model_verdicts(self) -> dict[Criterion, Verdict]:
        """评审流水线给出八项，其余只有六项"""
        if self.judge is not None:
            return {c: _RATING_VERDICTS[self.judge[c].value] for c in JUDGE_CRITERIA}
        return self.report.verdicts() if self.report is not None else {}

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "id": self.id,
            "status": self.status.value,
            "human": {c.value: self.human[c].prompt_value for c in JUDGE_CRITERIA if c in self.human},
            "usage": self.usage.model_dump(),
        }
        if self.report is not None:
            data["report"] = self.report.to_dict()
        if self.judge is not None:
            data["judge"] = self.judge.to_dict()
        if self.error is not None:
            data["error"] = {"type": self.error_type, "message": self.error}
        if self.skipped_constructs:
            data["skipped_constructs"] = self.skipped_constructs
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ItemResult":
        error = data.get("error") or {}
        return cls(
            id=data["id"],
            status=ItemStatus(data["status"]),
            human={Criterion(k): Rating(v) for k, v in data["human"].items()},
            report=RubricReport.from_dict(data["report"]) if "report" in data else None,
            judge=JudgeResponse(entries=data["judge"]) if "judge" in data else None,
            error_type=error.get("type"),
            error=error.get("message"),
            skipped_constructs=data.get("skipped_constructs", 0),
            usage=UsageRecord.model_validate(data.get("usage", {})),
        )


class RunManifest(BaseModel):
    model_config = ConfigDict(frozen=True)

    pipeline: PipelineKind
    condition: Optional[str] = None
    model: Optional[dict[str, Any]] = Field(None, description="模型配置快照，不含密钥")
    check: dict[str, Any]
    prices: dict[str, dict[str, float]] = Field(default_factory=dict)
    dataset: dict[str, Any]
    started_at: str
    finished_at: str
    partial: bool = False
    abort_reason: Optional[str] = None
    items: tuple[ItemResult, ...]
    usage: UsageRecord = Field(default_factory=UsageRecord)

    @property
    def label(self) -> str:
        """报表中区分不同清单的名称"""
        if self.pipeline == PipelineKind.DETERMINISTIC:
            return "deterministic"
        name = (self.model or {}).get("model_name", "?")
        suffix = f"/{self.condition}" if self.condition else ""
        return f"{self.pipeline.value}:{name}{suffix}"

    @property
    def scored(self) -> list[ItemResult]:
        return [item for item in self.items if item.status == ItemStatus.SCORED]

    @property
    def errored(self) -> list[ItemResult]:
        return [item for item in self.items if item.status == ItemStatus.ERRORED]

    @property
    def avg_seconds(self) -> float:
        return self.usage.wall_time / len(self.items) if self.items else 0.0

    def supports(self, criteria: Sequence[Criterion]) -> bool:
        """所有已评分条目都同时有模型判定与人工标注时才能统计这些准则"""
        scored = self.scored
        return bool(scored) and all(
            c in item.human and c in item.model_verdicts() for item in scored for c in criteria
        )

    def agreement(self, criteria: Sequence[Criterion] = RUBRIC_CRITERIA) -> Optional[AgreementTable]:
        """出错条目不计入 κ；没有已评分条目时返回 None"""
        scored = self.scored
        if not scored:
            return None
        return agreement_table(
            [AgreementItem(item.id, item.model_verdicts(), item.human) for item in scored],
            criteria=criteria,
        )

    def to_dict(self) -> dict[str, Any]:
        table = self.agreement() if self.scored else None
        return {
            "version": MANIFEST_VERSION,
            "pipeline": self.pipeline.value,
            "condition": self.condition,
            "model": self.model,
            "check": self.check,
            "prices": self.prices,
            "dataset": self.dataset,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "partial": self.partial,
            "abort_reason": self.abort_reason,
            "counts": {"items": len(self.items), "scored": len(self.scored), "errored": len(self.errored)},
            "usage": self.usage.model_dump(),
            "agreement": table.to_dict() if table is not None else None,
            "items": [item.to_dict() for item in self.items],
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunManifest":
        return cls(
            pipeline=PipelineKind(data["pipeline"]),
            condition=data.get("condition"),
            model=data.get("model"),
            check=data["check"],
            prices=data.get("prices", {}),
            dataset=data["dataset"],
            started_at=data["started_at"],
            finished_at=data["finished_at"],
            partial=data.get("partial", False),
            abort_reason=data.get("abort_reason"),
            items=tuple(ItemResult.from_dict(item) for item in data["items"]),
            usage=UsageRecord.model_validate(data.get("usage", {})),
        )


def save_manifest(manifest: RunManifest, path: Union[str, Path], overwrite: bool = False) -> Path:
    """写出清单；已存在的清单默认不覆盖

    Raises:
        ConfigError: 目标文件已存在且内容不同
    """
    path = Path(path)
    text = manifest.to_json()
    if path.exists() and not overwrite and path.read_text(encoding="utf-8") != text:
        raise ConfigError(f"清单已存在: {path}，如需覆盖请使用 --force")
    return write_text(path, text)


def load_manifest(path: Union[str, Path]) -> RunManifest:
    """Raises: DatasetError 清单格式错误"""
    path = Path(path)
    try:
        return RunManifest.from_dict(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, KeyError, ValueError, ValidationError) as e:
        raise DatasetError(f"无法读取运行清单 {path}: {e}") from e


__all__ = [
    "MANIFEST_VERSION",
    "PipelineKind",
    "ItemStatus",
    "ItemResult",
    "RunManifest",
    "save_manifest",
    "load_manifest",
]
