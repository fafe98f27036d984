"""--config 指定的运行配置文件

    {"check": {...CheckConfig}, "model": {...ModelConfig}, "prices": {"gpt-5": {...}}}

每一节都可省略。密钥只从环境变量读取，文件中出现 api_key 视为配置错误。
"""
import json
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.ai_core.models import ModelConfig
from src.ai_core.pricing import ModelPrice, PriceTable
from src.checks.models import CheckConfig
from src.logger.logger import logger
from src.utils.exceptions import ConfigError


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    check: CheckConfig = Field(default_factory=CheckConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    prices: dict[str, ModelPrice] = Field(default_factory=dict, description="覆盖默认价格表")

    def price_table(self, base: Optional[PriceTable] = None) -> PriceTable:
        return (base or PriceTable.load()).merged(self.prices)

    def with_model(self, **overrides: object) -> "RunConfig":
        """命令行参数覆盖模型配置，None 表示未指定"""
        updates = {k: v for k, v in overrides.items() if v is not None}
        if not updates:
            return self
        model = ModelConfig.model_validate({
            **self.model.model_dump(exclude={"api_key"}),
            **updates,
            "api_key": self.model.api_key,
        })
        return self.model_copy(update={"model": model})


def load_run_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """读取运行配置，未指定文件时全部取默认值

    Raises:
        ConfigError: 文件无法读取、不是JSON、字段非法（错误信息指出字段）
    """
    if path is None:
        return RunConfig()

    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"无法读取配置文件 {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"配置文件不是合法JSON {path}: {e.msg} (line {e.lineno})") from e

    if isinstance(raw, dict) and isinstance(raw.get("model"), dict) and "api_key" in raw["model"]:
        raise ConfigError("model.api_key 不能写在配置文件中，请通过环境变量 AI_API_KEY 提供")

    try:
        config = RunConfig.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first.get("loc", ())) or "<root>"
        raise ConfigError(f"配置字段 {field} 无效: {first.get('msg', '')}") from e

    logger.debug(f"已加载运行配置: {path}")
    return config


__all__ = ["RunConfig", "load_run_config"]
