"""按模型名查价并计算调用费用（美元 / 百万 token）"""
import json
from pathlib import Path
from typing import Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.config.settings import settings
from src.logger.logger import logger
from src.utils.exceptions import ConfigError

PER_TOKENS = 1_000_000


class ModelPrice(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    input_per_mtok: float = Field(..., ge=0)
    output_per_mtok: float = Field(..., ge=0)


class PriceTable:
    """模型价格表，未登记的模型按 0 计费并给出一次警告"""

    def __init__(self, prices: Optional[Mapping[str, ModelPrice]] = None):
        self.prices: dict[str, ModelPrice] = dict(prices or {})
        self._warned: set[str] = set()

    @classmethod
    def load(cls, path: Optional[Path] = None) -> "PriceTable":
        path = Path(path or settings.PRICE_FILE)
        if not path.exists():
            logger.warning(f"价格表不存在: {path}，所有费用按 0 计算")
            return cls()
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
            return cls({name: ModelPrice.model_validate(entry) for name, entry in raw.items()})
        except (json.JSONDecodeError, ValidationError, AttributeError) as e:
            raise ConfigError(f"价格表格式错误: {path}: {e}") from e

    def merged(self, overrides: Mapping[str, ModelPrice]) -> "PriceTable":
        """配置文件中的价格覆盖默认价格表"""
        return PriceTable({**self.prices, **overrides})

    def cost(self, model_name: str, prompt_tokens: int, completion_tokens: int) -> float:
        price = self.prices.get(model_name)
        if price is None:
            if model_name not in self._warned:
                logger.warning(f"价格表中没有模型 {model_name}，费用按 0 计算，预算上限不会生效")
                self._warned.add(model_name)
            return 0.0
        return (prompt_tokens * price.input_per_mtok + completion_tokens * price.output_per_mtok) / PER_TOKENS

    def to_dict(self) -> dict[str, dict[str, float]]:
        return {name: price.model_dump() for name, price in sorted(self.prices.items())}


__all__ = ["ModelPrice", "PriceTable", "PER_TOKENS"]
