"""LLM-as-a-Judge 基线：让模型直接按评分准则给出八项判定"""
import json
import re
from enum import Enum
from typing import Any, Optional

from pydantic import ValidationError

from src.checks.models import RUBRIC_CRITERIA, CheckResult, Criterion, Finding, Rating, RubricReport, Verdict
from src.logger.logger import logger
from src.utils.common import extract_json_block
from src.utils.exceptions import JudgeError, JudgeUsageError

from .client import ChatClient, Message, image_message, text_message
from .models import JudgeResponse, UsageRecord
from .prompt_template import PromptTemplate

PIPELINE = "judge"

_TRAILING_COMMA = re.compile(r",(\s*[}\]])")


class JudgeCondition(str, Enum):
    CODE = "code"
    IMAGE = "image"
    CODE_AND_IMAGE = "code_and_image"

    @property
    def needs_code(self) -> bool:
        return self in (JudgeCondition.CODE, JudgeCondition.CODE_AND_IMAGE)

    @property
    def needs_image(self) -> bool:
        return self in (JudgeCondition.IMAGE, JudgeCondition.CODE_AND_IMAGE)


# 三种条件下提示词里唯一不同的一句
GIVEN_SENTENCES = {
    JudgeCondition.CODE_AND_IMAGE: (
        "You are given an image of a math diagram and the LaTeX code for it, which uses the TikZ LaTeX library."
    ),
    JudgeCondition.CODE: "You are given the LaTeX code for a math diagram, which uses the TikZ LaTeX library.",
    JudgeCondition.IMAGE: "You are given an image of a math diagram.",
}

_VERDICTS = {Rating.YES: Verdict.PASS, Rating.NO: Verdict.FAIL, Rating.NA: Verdict.NA}


def check_inputs(condition: JudgeCondition, tikz: Optional[str], image: Optional[bytes]) -> None:
    """Raises: JudgeUsageError 条件所需输入缺失"""
    if condition.needs_code and not (tikz and tikz.strip()):
        raise JudgeUsageError(f"条件 {condition.value} 需要 TikZ 源码")
    if condition.needs_image and not image:
        raise JudgeUsageError(f"条件 {condition.value} 需要图片")


def build_messages(
    condition: JudgeCondition,
    tikz: Optional[str],
    image: Optional[bytes],
    templates: PromptTemplate,
) -> list[Message]:
    parts = [templates.render("judge", given_sentence=GIVEN_SENTENCES[condition])]
    if condition.needs_code:
        parts.append(templates.render("judge_code", tikz=tikz))
    text = "\n\n".join(parts)
    if condition.needs_image:
        return [image_message(text, image or b"")]
    return [text_message("user", text)]


def parse_judge_output(text: str) -> JudgeResponse:
    """严格解析八键 JSON，只容忍尾随逗号

    Raises:
        ValueError: JSON 无法解析或键、取值不符合输出格式
    """
    body = extract_json_block(text)
    try:
        data: Any = json.loads(body)
    except json.JSONDecodeError:
        try:
            data = json.loads(_TRAILING_COMMA.sub(r"\1", body))
        except json.JSONDecodeError as e:
            raise ValueError(f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})") from e
    if not isinstance(data, dict):
        raise ValueError("expected a JSON object")
    try:
        return JudgeResponse(entries=data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(part) for part in first.get("loc", ()))
        raise ValueError(f"{loc}: {first.get('msg', '')}") from e


async def judge(
    tikz: Optional[str],
    image: Optional[bytes],
    client: ChatClient,
    condition: JudgeCondition,
    item_id: str = "adhoc",
    templates: Optional[PromptTemplate] = None,
) -> tuple[JudgeResponse, UsageRecord]:
    """按指定条件请求评审

    Raises:
        JudgeUsageError: 条件所需输入缺失，此时不发出任何请求
        JudgeError: 重试耗尽后仍无法解析
    """
    check_inputs(condition, tikz, image)
    templates = templates or PromptTemplate()
    messages = build_messages(condition, tikz, image, templates)
    attempts = 1 + client.cfg.max_retries
    usage = UsageRecord()
    last_output = ""

    for attempt in range(attempts):
        completion = await client.complete(messages, PIPELINE, item_id)
        usage = usage + completion.usage
        last_output = completion.content
        try:
            response = parse_judge_output(last_output)
        except ValueError as e:
            logger.warning(f"评审输出无法解析: {item_id}, 第 {attempt + 1}/{attempts} 次, 错误: {e}")
            messages = [
                *messages,
                text_message("assistant", last_output),
                text_message("user", templates.render("judge_repair", error=str(e))),
            ]
            continue
        return response, usage.model_copy(update={"retries": usage.retries + attempt})

    raise JudgeError(
        f"评审输出无法解析: {item_id} (attempts={attempts})",
        last_output=last_output,
        attempts=attempts,
        usage=usage.model_copy(update={"retries": usage.retries + attempts - 1}),
    )


def judge_to_rubric(jr: JudgeResponse) -> RubricReport:
    """把六项共有准则映射为报告，另外两项（闭合、核心性质）不进入报告"""
    results = []
    for criterion in RUBRIC_CRITERIA:
        entry = jr[criterion]
        verdict = _VERDICTS[entry.value]
        rationale = entry.rationale.strip()
        if verdict == Verdict.FAIL:
            message = rationale or f"judge answered No for {criterion.value}"
            results.append(CheckResult(criterion=criterion, verdict=verdict, findings=(Finding(message=message),)))
        else:
            results.append(CheckResult(criterion=criterion, verdict=verdict, notes=(rationale,) if rationale else ()))
    return RubricReport(results=tuple(results))


def judge_ratings(jr: JudgeResponse) -> dict[Criterion, Rating]:
    """八项原始取值，供扩展一致性表使用"""
    return {criterion: entry.value for criterion, entry in jr.entries.items()}


__all__ = [
    "PIPELINE",
    "JudgeCondition",
    "GIVEN_SENTENCES",
    "check_inputs",
    "build_messages",
    "parse_judge_output",
    "judge",
    "judge_to_rubric",
    "judge_ratings",
]
