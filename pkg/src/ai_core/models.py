"""大模型调用的配置、用量与评审输出模型"""
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, SecretStr, field_validator, model_validator

from src.checks.models import JUDGE_CRITERIA, Criterion, Rating
from src.config.settings import settings


class ReasoningEffort(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class ModelConfig(BaseModel):
    """一次运行使用的模型参数

    api_key 只来自环境变量，快照里永远不出现。
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    model_name: str = Field(default_factory=lambda: settings.ai.AI_MODEL, description="模型名称")
    api_base_url: str = Field(default_factory=lambda: settings.ai.AI_API_BASE, description="OpenAI兼容接口地址")
    api_key: SecretStr = Field(default_factory=lambda: SecretStr(settings.ai.AI_API_KEY), exclude=True)
    temperature: float = Field(0.0, ge=0)
    top_p: float = Field(1.0, gt=0, le=1)
    reasoning_effort: Optional[ReasoningEffort] = None
    max_retries: int = Field(default_factory=lambda: settings.ai.AI_MAX_RETRIES, ge=0, description="结构化输出重试次数")
    request_timeout: float = Field(default_factory=lambda: settings.ai.AI_REQUEST_TIMEOUT, gt=0)
    max_concurrency: int = Field(default_factory=lambda: settings.ai.AI_MAX_CONCURRENCY, ge=1)
    budget_usd: Optional[float] = Field(None, ge=0, description="单次运行费用上限")

    @field_validator("api_base_url")
    @classmethod
    def _strip_slash(cls, v: str) -> str:
        return v.rstrip("/")

    def snapshot(self) -> dict[str, Any]:
        """写入运行清单的配置快照（不含密钥）"""
        return self.model_dump(mode="json", exclude={"api_key"})


class UsageRecord(BaseModel):
    """调用开销，可用 + 合并"""

    model_config = ConfigDict(frozen=True)

    prompt_tokens: int = Field(0, ge=0)
    completion_tokens: int = Field(0, ge=0)
    wall_time: float = Field(0.0, ge=0)
    cost_usd: float = Field(0.0, ge=0)
    requests: int = Field(0, ge=0)
    retries: int = Field(0, ge=0, description="结构化输出重试与传输重试之和")

    def __add__(self, other: "UsageRecord") -> "UsageRecord":
        return UsageRecord(
            prompt_tokens=self.prompt_tokens + other.prompt_tokens,
            completion_tokens=self.completion_tokens + other.completion_tokens,
            wall_time=self.wall_time + other.wall_time,
            cost_usd=self.cost_usd + other.cost_usd,
            requests=self.requests + other.requests,
            retries=self.retries + other.retries,
        )

    @classmethod
    def total(cls, records: list["UsageRecord"]) -> "UsageRecord":
        """按给定顺序归约"""
        result = cls()
        for record in records:
            result = result + record
        return result


class ChatCompletion(BaseModel):
    """单次对话补全的结果"""

    model_config = ConfigDict(frozen=True)

    content: str
    usage: UsageRecord


class JudgeEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    rationale: str
    value: Rating

    @field_validator("value", mode="before")
    @classmethod
    def _accept_prompt_spelling(cls, v: Any) -> Any:
        # 提示词里写的是 "N/A"
        return Rating(v) if isinstance(v, str) else v


class JudgeResponse(BaseModel):
    """评审输出：与提示词输出格式完全一致的八个键"""

    model_config = ConfigDict(frozen=True)

    entries: dict[Criterion, JudgeEntry]

    @model_validator(mode="after")
    def _exact_keys(self) -> "JudgeResponse":
        missing = [c.value for c in JUDGE_CRITERIA if c not in self.entries]
        if missing:
            raise ValueError(f"missing judge keys: {', '.join(missing)}")
        for criterion, entry in self.entries.items():
            if entry.value is Rating.NA and not criterion.allows_na:
                raise ValueError(f"{criterion.value}: N/A is not an allowed value")
        return self

    def __getitem__(self, criterion: Criterion) -> JudgeEntry:
        return self.entries[criterion]

    def to_dict(self) -> dict[str, Any]:
        return {
            c.value: {"rationale": self.entries[c].rationale, "value": self.entries[c].value.prompt_value}
            for c in JUDGE_CRITERIA
        }


__all__ = [
    "ReasoningEffort",
    "ModelConfig",
    "UsageRecord",
    "ChatCompletion",
    "JudgeEntry",
    "JudgeResponse",
]
