"""脚本化的模拟传输层

夹具目录结构为 <dir>/<pipeline>/<item_id>.json：

    {
      "responses": ["第一次回复", {"status": 429}, "第三次回复"],
      "usage": [{"prompt_tokens": 100, "completion_tokens": 20}, ...]
    }

同一条目的第 n 次请求取 responses[n]，超出时重复最后一项；usage 与 responses 按下标对应。
"""
import json
from collections import defaultdict
from pathlib import Path
from typing import Any, Union

import httpx

from src.logger.logger import logger

from .client import ITEM_EXTENSION


class FixtureTransport(httpx.MockTransport):
    def __init__(self, fixture_dir: Union[str, Path]):
        self.fixture_dir = Path(fixture_dir)
        self.calls: defaultdict[tuple[str, str], int] = defaultdict(int)
        self.requests: list[httpx.Request] = []
        super().__init__(self._handle)

    def _script(self, pipeline: str, item_id: str) -> dict[str, Any]:
        path = self.fixture_dir / pipeline / f"{item_id}.json"
        if not path.exists():
            return {}
        return json.loads(path.read_text(encoding="utf-8"))

    def _handle(self, request: httpx.Request) -> httpx.Response:
        self.requests.append(request)
        tag = request.extensions.get(ITEM_EXTENSION) or {}
        key = (tag.get("pipeline", ""), tag.get("item_id", ""))
        script = self._script(*key)
        responses = script.get("responses") or []
        if not responses:
            logger.warning(f"模拟夹具缺失: {key[0]}/{key[1]}")
            return httpx.Response(404, json={"error": f"no mock fixture for {key[0]}/{key[1]}"})

        index = self.calls[key]
        self.calls[key] += 1
        scripted = responses[min(index, len(responses) - 1)]
        if isinstance(scripted, dict) and "status" in scripted:
            return httpx.Response(int(scripted["status"]), json={"error": "scripted failure"})

        usage_list = script.get("usage") or []
        usage = usage_list[min(index, len(usage_list) - 1)] if usage_list else {}
        content = scripted if isinstance(scripted, str) else json.dumps(scripted, ensure_ascii=False)
        return httpx.Response(200, json={
            "id": f"mock-{key[1]}-{index}",
            "object": "chat.completion",
            "choices": [{"index": 0, "message": {"role": "assistant", "content": content}, "finish_reason": "stop"}],
            "usage": {
                "prompt_tokens": int(usage.get("prompt_tokens", 0)),
                "completion_tokens": int(usage.get("completion_tokens", 0)),
            },
        })

    def call_count(self, pipeline: str, item_id: str) -> int:
        return self.calls[(pipeline, item_id)]


__all__ = ["FixtureTransport"]
