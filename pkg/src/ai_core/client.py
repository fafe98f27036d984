"""OpenAI 兼容的对话补全客户端

并发受信号量限制，429/5xx 与超时按指数退避重试。测试通过 transport 注入
httpx.MockTransport，请求在 extensions 中携带条目标识。
"""
import asyncio
import base64
from typing import Any, Awaitable, Callable, Optional

import httpx

from src.config.settings import settings
from src.logger.logger import logger
from src.utils.clock import Clock, SystemClock
from src.utils.decorators import async_retry
from src.utils.exceptions import JudgeUsageError, LLMError, TransportError

from .models import ChatCompletion, ModelConfig, UsageRecord
from .pricing import PriceTable

# 请求 extensions 中的键，值为 {"pipeline": ..., "item_id": ...}
ITEM_EXTENSION = "tikzcheck_item"
RETRYABLE_STATUS = frozenset({408, 409, 429})

Message = dict[str, Any]


def text_message(role: str, text: str) -> Message:
    return {"role": role, "content": text}


def image_message(text: str, image: bytes, mime: str = "image/png") -> Message:
    """文字加 base64 图片的多段内容"""
    if len(image) > settings.ai.AI_MAX_IMAGE_SIZE:
        raise JudgeUsageError(f"图片超过大小上限 {settings.ai.AI_MAX_IMAGE_SIZE} bytes")
    encoded = base64.b64encode(image).decode("ascii")
    return {
        "role": "user",
        "content": [
            {"type": "text", "text": text},
            {"type": "image_url", "image_url": {"url": f"data:{mime};base64,{encoded}"}},
        ],
    }


class ChatClient:
    """可在多个条目间共享的客户端"""

    def __init__(
        self,
        cfg: ModelConfig,
        prices: Optional[PriceTable] = None,
        transport: Optional[httpx.AsyncBaseTransport] = None,
        clock: Optional[Clock] = None,
        sleep: Callable[[float], Awaitable[Any]] = asyncio.sleep,
    ):
        self.cfg = cfg
        self.prices = prices or PriceTable()
        self.clock = clock or SystemClock()
        self._sleep = sleep
        self._semaphore = asyncio.Semaphore(cfg.max_concurrency)
        self._http = httpx.AsyncClient(timeout=cfg.request_timeout, transport=transport)

    async def __aenter__(self) -> "ChatClient":
        return self

    async def __aexit__(self, *exc_info: Any) -> None:
        await self.aclose()

    async def aclose(self) -> None:
        await self._http.aclose()

    def build_request(self, messages: list[Message], pipeline: str, item_id: str) -> httpx.Request:
        payload: dict[str, Any] = {
            "model": self.cfg.model_name,
            "messages": messages,
            "temperature": self.cfg.temperature,
            "top_p": self.cfg.top_p,
        }
        if self.cfg.reasoning_effort is not None:
            payload["reasoning_effort"] = self.cfg.reasoning_effort.value

        headers = {"Content-Type": "application/json"}
        api_key = self.cfg.api_key.get_secret_value()
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"

        return self._http.build_request(
            "POST",
            f"{self.cfg.api_base_url}/chat/completions",
            json=payload,
            headers=headers,
            extensions={ITEM_EXTENSION: {"pipeline": pipeline, "item_id": item_id}},
        )

    async def _send_once(self, request: httpx.Request) -> dict[str, Any]:
        try:
            response = await self._http.send(request)
        except httpx.TimeoutException as e:
            raise TransportError(f"请求超时: {e}") from e
        except httpx.TransportError as e:
            raise TransportError(f"连接失败: {e}") from e

        status = response.status_code
        if status in RETRYABLE_STATUS or status >= 500:
            raise TransportError(f"接口返回 {status}", status_code=status)
        if status >= 400:
            raise LLMError(f"接口返回 {status}: {response.text[:200]}")
        try:
            return response.json()
        except ValueError as e:
            raise LLMError(f"接口返回的不是JSON: {e}") from e

    async def complete(self, messages: list[Message], pipeline: str, item_id: str) -> ChatCompletion:
        """发送一次对话补全，返回文本与本次调用的用量（含传输重试）"""
        request = self.build_request(messages, pipeline, item_id)
        attempts = 0

        @async_retry(
            max_retries=settings.ai.AI_TRANSPORT_RETRIES,
            delay=settings.ai.AI_RETRY_DELAY,
            backoff=settings.ai.AI_RETRY_BACKOFF,
            exceptions=(TransportError,),
            sleep=self._sleep,
        )
        async def send() -> dict[str, Any]:
            nonlocal attempts
            attempts += 1
            return await self._send_once(request)

        async with self._semaphore:
            started = self.clock.monotonic()
            body = await send()
            elapsed = self.clock.monotonic() - started

        try:
            content = body["choices"][0]["message"]["content"] or ""
        except (KeyError, IndexError, TypeError) as e:
            raise LLMError(f"接口返回缺少 choices[0].message.content: {e}") from e
        usage = body.get("usage") or {}
        prompt_tokens = int(usage.get("prompt_tokens", 0))
        completion_tokens = int(usage.get("completion_tokens", 0))

        logger.debug(
            f"对话补全完成: {pipeline}/{item_id}, tokens={prompt_tokens}+{completion_tokens}, 尝试 {attempts} 次"
        )
        return ChatCompletion(
            content=content,
            usage=UsageRecord(
                prompt_tokens=prompt_tokens,
                completion_tokens=completion_tokens,
                wall_time=max(elapsed, 0.0),
                cost_usd=self.prices.cost(self.cfg.model_name, prompt_tokens, completion_tokens),
                requests=attempts,
                retries=attempts - 1,
            ),
        )


__all__ = ["ChatClient", "ITEM_EXTENSION", "Message", "text_message", "image_message"]
