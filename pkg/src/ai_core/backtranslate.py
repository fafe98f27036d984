"""回译：由大模型把 TikZ 源码翻译成 IR JSON

结构化输出采用“解析 + 带错误反馈重试”，不依赖特定厂商的约束解码。
"""
from typing import Optional

from src.ir.model import TikzIR
from src.ir.serialization import ir_from_json, ir_json_schema
from src.ir.validation import validate_ir
from src.logger.logger import logger
from src.utils.common import extract_json_block
from src.utils.exceptions import InputError, IRParseError, IRSchemaError, IRValidationError, TranslationError

from .client import ChatClient, Message, text_message
from .models import UsageRecord
from .prompt_template import PromptTemplate

PIPELINE = "backtranslate"


def build_messages(tikz: str, templates: PromptTemplate) -> list[Message]:
    return [
        text_message("system", templates.render("backtranslate_system", schema=ir_json_schema())),
        text_message("user", templates.render("backtranslate_user", tikz=tikz)),
    ]


def parse_ir_output(text: str) -> TikzIR:
    """解析模型输出并校验不变量

    Raises:
        IRParseError / IRSchemaError / IRValidationError
    """
    ir = ir_from_json(extract_json_block(text))
    violations = validate_ir(ir)
    if violations:
        raise IRValidationError(violations)
    return ir


async def backtranslate(
    tikz: str,
    client: ChatClient,
    item_id: str = "adhoc",
    templates: Optional[PromptTemplate] = None,
) -> tuple[TikzIR, UsageRecord]:
    """回译一段 TikZ 源码

    最多尝试 1 + max_retries 次，每次失败把校验错误追加到对话中。

    Raises:
        InputError: 源码为空
        TranslationError: 重试耗尽，携带最后一次模型输出与累计用量
        TransportError: 传输重试耗尽
    """
    if not tikz.strip():
        raise InputError("TikZ 源码为空")

    templates = templates or PromptTemplate()
    messages = build_messages(tikz, templates)
    attempts = 1 + client.cfg.max_retries
    usage = UsageRecord()
    last_output = ""

    for attempt in range(attempts):
        completion = await client.complete(messages, PIPELINE, item_id)
        usage = usage + completion.usage
        last_output = completion.content
        try:
            ir = parse_ir_output(last_output)
        except (IRParseError, IRSchemaError, IRValidationError) as e:
            logger.warning(f"回译输出无效: {item_id}, 第 {attempt + 1}/{attempts} 次, 错误: {e}")
            messages = [
                *messages,
                text_message("assistant", last_output),
                text_message("user", templates.render("backtranslate_repair", error=str(e))),
            ]
            continue
        usage = usage.model_copy(update={"retries": usage.retries + attempt})
        logger.info(f"回译成功: {item_id}, 结构化输出重试 {attempt} 次")
        return ir, usage

    raise TranslationError(
        f"回译失败: {item_id}",
        last_output=last_output,
        attempts=attempts,
        usage=usage.model_copy(update={"retries": usage.retries + attempts - 1}),
    )


__all__ = ["PIPELINE", "backtranslate", "build_messages", "parse_ir_output"]
