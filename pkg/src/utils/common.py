import json
import re
from decimal import Decimal, ROUND_HALF_EVEN
from pathlib import Path
from typing import Any, Union
from ..logger.logger import logger

_JSON_FENCE = re.compile(r"```(?:json)?\s*\n?(.*?)```", re.DOTALL)


def ensure_dir(dir_path: Union[str, Path]) -> Path:
    """确保目录存在,如果不存在则创建"""
    path = Path(dir_path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def read_text(file_path: Union[str, Path], encoding: str = "utf-8") -> str:
    """读取文本文件，失败时记录日志并抛出原始异常"""
    try:
        return Path(file_path).read_text(encoding=encoding)
    except OSError as e:
        logger.error(f"读取文件失败: {file_path}, 错误: {e}")
        raise


def write_text(file_path: Union[str, Path], content: str, encoding: str = "utf-8") -> Path:
    """写入文本文件，自动创建父目录"""
    path = Path(file_path)
    ensure_dir(path.parent)
    path.write_text(content, encoding=encoding)
    return path


def extract_json_block(text: str) -> str:
    """从模型回复中取出JSON正文

    优先取 ```json 代码块，其次取第一个 '{' 到最后一个 '}' 之间的内容。
    """
    match = _JSON_FENCE.search(text)
    if match:
        return match.group(1).strip()
    start, end = text.find("{"), text.rfind("}")
    if start != -1 and end > start:
        return text[start:end + 1]
    return text.strip()


def canonical_json(data: Any) -> str:
    """稳定的JSON文本：键排序、两空格缩进、末尾换行"""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def round_half_even(value: float, places: int = 3) -> str:
    """按银行家舍入格式化数字，与表格显示保持一致"""
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_EVEN))
