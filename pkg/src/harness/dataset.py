"""JSONL 数据集：每行一个 UTF-8 JSON 对象

    {"id": "tri-01", "request": "...", "tikz": "...", "image_path": "img/tri-01.png",
     "human": {"diagram_fully_in_canvas": "Yes", "angle_labels_matches_arcs": "N/A", ...}}

human 必须覆盖六项规则准则；闭合与核心性质两项可选。
"""
import hashlib
import json
from collections import defaultdict
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.checks.models import RUBRIC_CRITERIA, Criterion, Rating
from src.logger.logger import logger
from src.utils.exceptions import DatasetError


class DatasetItem(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str = Field(..., min_length=1)
    request: str = ""
    tikz: str
    image_path: Optional[Path] = None
    human: dict[Criterion, Rating]

    @field_validator("tikz")
    @classmethod
    def _nonempty_tikz(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("tikz must be nonempty")
        return v

    @field_validator("human", mode="before")
    @classmethod
    def _ratings(cls, v: object) -> object:
        if isinstance(v, dict):
            return {k: Rating(r) if isinstance(r, str) else r for k, r in v.items()}
        return v

    @model_validator(mode="after")
    def _labels(self) -> "DatasetItem":
        for criterion in RUBRIC_CRITERIA:
            if criterion not in self.human:
                raise ValueError(f"item {self.id} is missing human label '{criterion.value}'")
        for criterion, rating in self.human.items():
            if rating is Rating.NA and not criterion.allows_na:
                raise ValueError(f"item {self.id}: N/A is not allowed for '{criterion.value}'")
        return self

    def read_image(self) -> Optional[bytes]:
        if self.image_path is None or not self.image_path.exists():
            return None
        return self.image_path.read_bytes()


class Dataset(BaseModel):
    model_config = ConfigDict(frozen=True)

    path: Path
    digest: str
    items: tuple[DatasetItem, ...]

    def __len__(self) -> int:
        return len(self.items)


def _item_from_line(raw: str, line_no: int, base_dir: Path) -> DatasetItem:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise DatasetError(f"第 {line_no} 行不是合法JSON: {e.msg}", lines=[line_no]) from e
    if not isinstance(data, dict):
        raise DatasetError(f"第 {line_no} 行必须是JSON对象", lines=[line_no])
    if data.get("image_path"):
        data["image_path"] = base_dir / data["image_path"]
    try:
        return DatasetItem.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(part) for part in first.get("loc", ()))
        detail = first.get("msg", "")
        where = f"{loc}: " if loc else ""
        raise DatasetError(f"第 {line_no} 行数据无效: {where}{detail}", lines=[line_no]) from e


def load_dataset(path: Union[str, Path]) -> Dataset:
    """读取并校验数据集

    Raises:
        DatasetError: 行格式错误、缺少准则标注、id 重复（错误中带行号）
        OSError: 文件无法读取
    """
    path = Path(path)
    content = path.read_bytes()
    items: list[DatasetItem] = []
    lines_by_id: defaultdict[str, list[int]] = defaultdict(list)

    for line_no, raw in enumerate(content.decode("utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        item = _item_from_line(raw, line_no, path.parent)
        lines_by_id[item.id].append(line_no)
        items.append(item)

    for item_id, lines in lines_by_id.items():
        if len(lines) > 1:
            raise DatasetError(
                f"条目 id 重复: {item_id}，出现在第 {', '.join(str(n) for n in lines)} 行", lines=lines
            )

    logger.info(f"数据集加载完成: {path}, 共 {len(items)} 条")
    return Dataset(path=path, digest=hashlib.sha256(content).hexdigest(), items=tuple(items))


__all__ = ["DatasetItem", "Dataset", "load_dataset"]
