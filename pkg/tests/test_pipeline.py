import pytest

from src.ai_core.judge import JudgeCondition
from src.ai_core.mock import FixtureTransport
from src.ai_core.models import ModelConfig, UsageRecord
from src.ai_core.pricing import ModelPrice, PriceTable
from src.checks.models import JUDGE_CRITERIA, Criterion, Verdict
from src.config.run_config import RunConfig
from src.harness.dataset import load_dataset
from src.harness.manifest import ItemStatus, PipelineKind, load_manifest, save_manifest
from src.harness.pipeline import Budget, PipelineRunner
from src.metrics.agreement import ConfusionMatrix
from src.utils.exceptions import ConfigError

PRICES = PriceTable({"mock-model": ModelPrice(input_per_mtok=1.0, output_per_mtok=2.0)})


def model_config(**overrides) -> RunConfig:
    values = {"model_name": "mock-model", "api_base_url": "http://mock.local/v1", "api_key": "", **overrides}
    return RunConfig(model=ModelConfig(**values))


def runner(pipeline, mock_llm_dir, frozen_clock, no_sleep, run_config=None, **options) -> PipelineRunner:
    return PipelineRunner(
        pipeline,
        run_config or model_config(),
        transport=FixtureTransport(mock_llm_dir),
        prices=PRICES,
        clock=frozen_clock,
        sleep=no_sleep,
        **options,
    )


@pytest.fixture
def deterministic_dataset(fixtures_dir):
    return load_dataset(fixtures_dir / "datasets" / "deterministic.jsonl")


@pytest.fixture
def mock_dataset(fixtures_dir):
    return load_dataset(fixtures_dir / "datasets" / "mock.jsonl")


@pytest.mark.asyncio
async def test_deterministic_pipeline(deterministic_dataset, frozen_clock):
    """测试确定性流水线的判定与一致性统计"""
    manifest = await PipelineRunner(PipelineKind.DETERMINISTIC, clock=frozen_clock).run(deterministic_dataset)

    assert manifest.label == "deterministic"
    assert manifest.model is None
    assert [item.status for item in manifest.items] == [ItemStatus.SCORED] * 5
    in_frame = [item.report.get(Criterion.IN_FRAME).verdict for item in manifest.items]
    assert in_frame == [Verdict.PASS, Verdict.FAIL, Verdict.PASS, Verdict.PASS, Verdict.FAIL]
    assert manifest.items[2].report.get(Criterion.READABLE).verdict == Verdict.FAIL

    table = manifest.agreement()
    assert table.row(Criterion.IN_FRAME).matrix == ConfusionMatrix(tp=1, tn=2, fp=1, fn=1)
    assert table.row(Criterion.READABLE).matrix == ConfusionMatrix(tp=1, tn=4)
    assert table.row(Criterion.ANGLES).matrix == ConfusionMatrix(tn=1)
    assert table.row(Criterion.PROPORTIONS).kappa is None
    assert table.row(Criterion.IN_FRAME).kappa == pytest.approx(1 / 6)
    assert table.pooled_kappa == pytest.approx(46 / 78)
    assert manifest.usage.cost_usd == 0.0


@pytest.mark.asyncio
async def test_backtranslate_pipeline(mock_dataset, mock_llm_dir, frozen_clock, no_sleep):
    """测试回译流水线：修复重试、重试耗尽与用量汇总"""
    manifest = await runner(PipelineKind.BACKTRANSLATE, mock_llm_dir, frozen_clock, no_sleep).run(mock_dataset)

    m1, m2, m3 = manifest.items
    assert (m1.status, m2.status, m3.status) == (ItemStatus.SCORED, ItemStatus.SCORED, ItemStatus.ERRORED)
    assert m2.usage.retries == 1
    assert m3.error_type == "TranslationError"
    assert m3.usage.requests == 4
    assert manifest.label == "backtranslate:mock-model"
    assert not manifest.partial

    # 出错条目不计入 κ
    assert manifest.agreement().diagrams == 2
    assert manifest.agreement().row(Criterion.IN_FRAME).matrix == ConfusionMatrix(tn=1, fn=1)
    expected_cost = ((1200 + 1200 + 1300 + 4 * 1200) + 2 * (150 + 40 + 160 + 4 * 10)) / 1e6
    assert manifest.usage.cost_usd == pytest.approx(expected_cost)
    assert manifest.usage.wall_time == 0.0


@pytest.mark.asyncio
async def test_judge_pipeline(mock_dataset, mock_llm_dir, frozen_clock, no_sleep):
    """测试评审流水线：缺图条目在请求前出错，八项统计可用"""
    manifest = await runner(PipelineKind.JUDGE, mock_llm_dir, frozen_clock, no_sleep).run(mock_dataset)

    assert manifest.condition == JudgeCondition.CODE_AND_IMAGE.value
    assert manifest.label == "judge:mock-model/code_and_image"
    m1, m2, m3 = manifest.items
    assert m3.error_type == "JudgeUsageError"
    assert m3.usage.requests == 0
    assert m2.report.get(Criterion.IN_FRAME).findings[0].message == "the square runs past the right edge"

    assert manifest.supports(JUDGE_CRITERIA)
    table = manifest.agreement(JUDGE_CRITERIA)
    assert table.row(Criterion.IN_FRAME).matrix == ConfusionMatrix(tp=1, tn=1)
    assert table.row(Criterion.SHAPE_CLOSED).matrix == ConfusionMatrix(tn=2)
    assert table.pooled.n == 10


@pytest.mark.asyncio
async def test_budget_stops_new_items(mock_dataset, mock_llm_dir, frozen_clock, no_sleep):
    """测试预算用尽后不再启动新条目，清单标记为部分完成"""
    cfg = model_config(max_concurrency=1, budget_usd=1e-9)
    manifest = await runner(PipelineKind.BACKTRANSLATE, mock_llm_dir, frozen_clock, no_sleep, run_config=cfg).run(
        mock_dataset
    )

    assert manifest.items[0].status == ItemStatus.SCORED
    assert [item.error_type for item in manifest.items[1:]] == ["BudgetExceededError"] * 2
    assert manifest.partial
    assert manifest.abort_reason == "budget exhausted, 2 items not run"


def test_budget_accounting():
    """测试预算在花费达到上限时耗尽"""
    budget = Budget(1.0)
    assert not budget.exhausted
    budget.charge(UsageRecord(cost_usd=0.4))
    assert not budget.exhausted
    budget.charge(UsageRecord(cost_usd=0.6))
    assert budget.exhausted
    assert not Budget(None).exhausted


@pytest.mark.asyncio
async def test_manifest_is_reproducible(tmp_path, mock_dataset, mock_llm_dir, frozen_clock, no_sleep):
    """测试相同输入与夹具的两次运行清单逐字节一致，且可以读回"""
    first = await runner(PipelineKind.BACKTRANSLATE, mock_llm_dir, frozen_clock, no_sleep).run(mock_dataset)
    second = await runner(PipelineKind.BACKTRANSLATE, mock_llm_dir, frozen_clock, no_sleep).run(mock_dataset)
    assert first.to_json() == second.to_json()

    path = save_manifest(first, tmp_path / "run.json")
    save_manifest(second, path)
    loaded = load_manifest(path)
    assert loaded.to_json() == first.to_json()
    assert "api_key" not in loaded.model


@pytest.mark.asyncio
async def test_manifest_not_overwritten(tmp_path, deterministic_dataset, mock_dataset, mock_llm_dir, frozen_clock, no_sleep):
    """测试不同内容的清单默认不覆盖"""
    path = tmp_path / "run.json"
    save_manifest(await PipelineRunner(PipelineKind.DETERMINISTIC, clock=frozen_clock).run(deterministic_dataset), path)
    other = await runner(PipelineKind.BACKTRANSLATE, mock_llm_dir, frozen_clock, no_sleep).run(mock_dataset)
    with pytest.raises(ConfigError):
        save_manifest(other, path)
    save_manifest(other, path, overwrite=True)
    assert load_manifest(path).pipeline == PipelineKind.BACKTRANSLATE
