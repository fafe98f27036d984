import json

import pytest

from src.ai_core.pricing import ModelPrice, PriceTable
from src.config.run_config import RunConfig, load_run_config
from src.config.settings import PROJECT_ROOT, LogConfig, settings
from src.utils.decorators import async_retry, log_function_call
from src.utils.exceptions import ConfigError


def write_config(tmp_path, data) -> str:
    path = tmp_path / "run.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_default_run_config():
    """测试未指定配置文件时取默认阈值"""
    config = load_run_config()
    assert config.check.eps_proportion == 0.10
    assert config.check.label_assoc_max_pt == 12.0
    assert config.model.temperature == 0.0
    assert config.prices == {}


def test_load_run_config(tmp_path):
    """测试配置文件覆盖检查阈值与价格"""
    path = write_config(tmp_path, {
        "check": {"eps_proportion": 0.2},
        "model": {"model_name": "gpt-5", "max_concurrency": 2},
        "prices": {"gpt-5": {"input_per_mtok": 3.0, "output_per_mtok": 4.0}},
    })
    config = load_run_config(path)
    assert config.check.eps_proportion == 0.2
    assert config.check.canvas_buffer_pt == 2.0
    assert config.model.model_name == "gpt-5"
    assert config.price_table(PriceTable()).cost("gpt-5", 1_000_000, 0) == pytest.approx(3.0)


@pytest.mark.parametrize("data, message", [
    ({"model": {"api_key": "sk-test"}}, "api_key"),
    ({"check": {"eps_proportion": "lots"}}, "check.eps_proportion"),
    ({"unknown": 1}, "unknown"),
])
def test_invalid_run_config(tmp_path, data, message):
    """测试配置文件中的非法字段与密钥"""
    with pytest.raises(ConfigError, match=message):
        load_run_config(write_config(tmp_path, data))


def test_run_config_not_json(tmp_path):
    """测试配置文件不是合法 JSON"""
    path = tmp_path / "run.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError, match="不是合法JSON"):
        load_run_config(path)


def test_with_model_overrides():
    """测试命令行参数覆盖模型配置，None 不覆盖"""
    config = RunConfig().with_model(model_name="gpt-5-mini", budget_usd=None)
    assert config.model.model_name == "gpt-5-mini"
    assert config.model.budget_usd is None
    assert RunConfig().with_model(model_name=None) == RunConfig()


def test_settings_resource_paths():
    """测试全局配置的资源路径都在项目根目录下"""
    assert settings.BASE_DIR == PROJECT_ROOT
    assert settings.PROMPT_DIR == PROJECT_ROOT / "resources" / "prompts"
    assert settings.PRICE_FILE == PROJECT_ROOT / "resources" / "prices.json"
    assert (settings.PROMPT_DIR / "templates.json").is_file()
    assert settings.PRICE_FILE.is_file()


def test_log_level_validation():
    """测试非法日志级别回退为 INFO"""
    assert LogConfig(LOG_LEVEL="debug").LOG_LEVEL == "DEBUG"
    with pytest.warns(UserWarning):
        assert LogConfig(LOG_LEVEL="chatty").LOG_LEVEL == "INFO"


def test_price_table_load_and_merge():
    """测试默认价格表与覆盖合并"""
    table = PriceTable.load()
    assert table.cost("gpt-4.1", 1_000_000, 1_000_000) == pytest.approx(10.0)
    merged = table.merged({"gpt-4.1": ModelPrice(input_per_mtok=0.0, output_per_mtok=1.0)})
    assert merged.cost("gpt-4.1", 1_000_000, 1_000_000) == pytest.approx(1.0)
    assert table.cost("gpt-4.1", 1_000_000, 0) == pytest.approx(2.0)
    assert table.cost("unknown-model", 10, 10) == 0.0


def test_price_table_bad_file(tmp_path):
    """测试价格表格式错误"""
    path = tmp_path / "prices.json"
    path.write_text(json.dumps({"m": {"input_per_mtok": -1, "output_per_mtok": 1}}), encoding="utf-8")
    with pytest.raises(ConfigError):
        PriceTable.load(path)


@pytest.mark.asyncio
async def test_async_retry_backoff(no_sleep):
    """测试协程重试的指数退避"""
    calls = []

    @async_retry(max_retries=3, delay=0.5, backoff=3.0, exceptions=(ValueError,), sleep=no_sleep)
    async def flaky() -> str:
        calls.append(1)
        if len(calls) < 3:
            raise ValueError("not yet")
        return "ok"

    assert await flaky() == "ok"
    assert no_sleep.delays == [0.5, 1.5]


@pytest.mark.asyncio
async def test_async_retry_gives_up(no_sleep):
    """测试重试次数用尽后抛出原异常，非指定异常不重试"""
    @async_retry(max_retries=2, delay=1.0, exceptions=(ValueError,), sleep=no_sleep)
    async def always_fails() -> None:
        raise ValueError("nope")

    with pytest.raises(ValueError):
        await always_fails()
    assert no_sleep.delays == [1.0, 2.0]

    @async_retry(max_retries=2, exceptions=(ValueError,), sleep=no_sleep)
    async def wrong_kind() -> None:
        raise KeyError("k")

    with pytest.raises(KeyError):
        await wrong_kind()
    assert no_sleep.delays == [1.0, 2.0]


@pytest.mark.asyncio
async def test_log_function_call():
    """测试日志装饰器保留返回值与异常"""
    @log_function_call()
    def add(a: int, b: int) -> int:
        return a + b

    @log_function_call(level="INFO")
    async def boom() -> None:
        raise RuntimeError("boom")

    assert add(1, 2) == 3
    assert add.__name__ == "add"
    with pytest.raises(RuntimeError):
        await boom()
