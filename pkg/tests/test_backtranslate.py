import json

import pytest

from src.ai_core.backtranslate import PIPELINE, backtranslate, parse_ir_output
from src.ai_core.client import ChatClient
from src.ai_core.mock import FixtureTransport
from src.ai_core.models import ModelConfig
from src.ai_core.pricing import ModelPrice, PriceTable
from src.utils.exceptions import InputError, IRParseError, IRValidationError, TranslationError

PRICES = PriceTable({"mock-model": ModelPrice(input_per_mtok=1.0, output_per_mtok=2.0)})
TIKZ = "\\draw (0,0) -- (1,0);"
VALID_IR = {"segments": [{"id": "s", "a": {"x": 0, "y": 0}, "b": {"x": 28.4527, "y": 0}}]}
DEGENERATE_IR = {"segments": [{"id": "s", "a": {"x": 0, "y": 0}, "b": {"x": 0, "y": 0}}]}


def make_client(transport, clock, sleep, max_retries: int = 3) -> ChatClient:
    cfg = ModelConfig(model_name="mock-model", api_base_url="http://mock.local/v1", api_key="", max_retries=max_retries)
    return ChatClient(cfg, PRICES, transport, clock, sleep)


def sent_messages(request) -> list[dict]:
    return json.loads(request.content)["messages"]


@pytest.mark.asyncio
async def test_first_answer_valid(llm_script, frozen_clock, no_sleep):
    """测试首次输出即合法"""
    llm_script(PIPELINE, "t1", [VALID_IR])
    transport = FixtureTransport(llm_script.root)
    async with make_client(transport, frozen_clock, no_sleep) as client:
        ir, usage = await backtranslate(TIKZ, client, "t1")

    assert ir.segments[0].b.x == 28.4527
    assert (usage.requests, usage.retries) == (1, 0)
    assert (usage.prompt_tokens, usage.completion_tokens) == (100, 20)
    system, user = sent_messages(transport.requests[0])
    assert system["role"] == "system"
    assert '"segments"' in system["content"]
    assert user["content"].endswith(TIKZ)


@pytest.mark.asyncio
async def test_repair_after_invalid_output(llm_script, frozen_clock, no_sleep):
    """测试非法输出后把错误反馈给模型再重试"""
    llm_script(PIPELINE, "t2", ["I think the answer is {", DEGENERATE_IR, f"```json\n{json.dumps(VALID_IR)}\n```"])
    transport = FixtureTransport(llm_script.root)
    async with make_client(transport, frozen_clock, no_sleep) as client:
        ir, usage = await backtranslate(TIKZ, client, "t2")

    assert len(ir.segments) == 1
    assert (usage.requests, usage.retries) == (3, 2)
    assert usage.cost_usd == pytest.approx(3 * 140 / 1e6)

    second = sent_messages(transport.requests[1])
    assert len(second) == 4
    assert second[2] == {"role": "assistant", "content": "I think the answer is {"}
    assert second[3]["content"].startswith("The JSON you returned is not a valid IR document:")
    third = sent_messages(transport.requests[2])
    assert "degenerate_segment" in third[-1]["content"]


@pytest.mark.asyncio
async def test_retries_exhausted(llm_script, frozen_clock, no_sleep):
    """测试重试耗尽时携带最后一次输出与累计用量"""
    llm_script(PIPELINE, "t3", ["garbage"])
    transport = FixtureTransport(llm_script.root)
    async with make_client(transport, frozen_clock, no_sleep, max_retries=1) as client:
        with pytest.raises(TranslationError) as exc_info:
            await backtranslate(TIKZ, client, "t3")

    error = exc_info.value
    assert error.attempts == 2
    assert error.last_output == "garbage"
    assert (error.usage.requests, error.usage.retries) == (2, 1)
    assert transport.call_count(PIPELINE, "t3") == 2


@pytest.mark.asyncio
async def test_transport_retry_counts_toward_retries(llm_script, frozen_clock, no_sleep):
    """测试传输重试计入用量的重试次数"""
    llm_script(PIPELINE, "t4", [{"status": 429}, VALID_IR])
    transport = FixtureTransport(llm_script.root)
    async with make_client(transport, frozen_clock, no_sleep) as client:
        _, usage = await backtranslate(TIKZ, client, "t4")
    assert (usage.requests, usage.retries) == (2, 1)
    assert no_sleep.delays == [1.0]


@pytest.mark.asyncio
async def test_empty_input_sends_nothing(llm_script, frozen_clock, no_sleep):
    """测试空源码不发出请求"""
    transport = FixtureTransport(llm_script.root)
    async with make_client(transport, frozen_clock, no_sleep) as client:
        with pytest.raises(InputError):
            await backtranslate("   \n", client, "t5")
    assert transport.requests == []


def test_parse_ir_output_errors():
    """测试输出解析的错误类型"""
    with pytest.raises(IRParseError):
        parse_ir_output("{not json}")
    with pytest.raises(IRValidationError):
        parse_ir_output(json.dumps(DEGENERATE_IR))
    assert parse_ir_output(f"Here you go:\n{json.dumps(VALID_IR)}\nDone.").segments[0].id == "s"
