"""IR 的规范 JSON 序列化"""
import json
from typing import Any

from pydantic import ValidationError

from src.utils.common import canonical_json
from src.utils.exceptions import IRParseError, IRSchemaError

from .model import TikzIR


def ir_to_dict(ir: TikzIR) -> dict[str, Any]:
    return ir.model_dump(mode="json")


def ir_to_json(ir: TikzIR) -> str:
    """规范 JSON：键排序、两空格缩进，输出字节稳定"""
    return canonical_json(ir_to_dict(ir))


def _describe_location(loc: tuple[Any, ...]) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def ir_from_dict(data: Any) -> TikzIR:
    """从已解析的 JSON 对象构造 IR，结构错误时指出第一个出错字段"""
    try:
        return TikzIR.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = tuple(first.get("loc", ()))
        field = str(loc[-1]) if loc else "<root>"
        kind = first.get("type", "")
        if kind == "extra_forbidden":
            message = f"unknown field '{field}' at {_describe_location(loc)}"
        elif kind == "missing":
            message = f"missing field '{field}' at {_describe_location(loc)}"
        else:
            message = f"invalid value for '{field}' at {_describe_location(loc)}: {first.get('msg', '')}"
        raise IRSchemaError(message, field=field) from e


def ir_from_json(text: str) -> TikzIR:
    """解析 IR JSON 文本

    Raises:
        IRParseError: JSON 语法错误，带行列号
        IRSchemaError: 未知或缺失字段
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise IRParseError(e.msg, line=e.lineno, column=e.colno) from e
    return ir_from_dict(data)


def ir_json_schema() -> str:
    """回译提示词中展示给模型的 JSON Schema"""
    return json.dumps(TikzIR.model_json_schema(), indent=2, sort_keys=True)


__all__ = ["ir_to_dict", "ir_to_json", "ir_from_dict", "ir_from_json", "ir_json_schema"]
