import json
import os
import sys
from pathlib import Path

# 添加项目根目录到Python路径
project_root = str(Path(__file__).parent.parent)
sys.path.insert(0, project_root)

# 测试时不写日志文件，必须在导入项目模块之前设置
os.environ["LOG_FILE"] = ""

import pytest

from src.utils.clock import FrozenClock

FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def mock_llm_dir() -> Path:
    """脚本化模型回复目录"""
    return FIXTURES_DIR / "mock_llm"


@pytest.fixture
def frozen_clock() -> FrozenClock:
    return FrozenClock()


@pytest.fixture
def no_sleep():
    """记录退避等待时长但不真正等待"""
    delays: list[float] = []

    async def sleep(seconds: float) -> None:
        delays.append(seconds)

    sleep.delays = delays
    return sleep


@pytest.fixture
def llm_script(tmp_path):
    """在临时目录写模拟回复脚本，script.root 交给 FixtureTransport"""
    root = tmp_path / "mock_llm"

    def script(pipeline: str, item_id: str, responses: list, usage: list | None = None) -> None:
        path = root / pipeline / f"{item_id}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        data = {"responses": responses, "usage": usage or [{"prompt_tokens": 100, "completion_tokens": 20}]}
        path.write_text(json.dumps(data, ensure_ascii=False), encoding="utf-8")

    script.root = root
    return script
