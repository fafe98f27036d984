"""端到端评测：翻译 → 规则检查，或评审 → 准则映射，最后汇成运行清单"""
import asyncio
from typing import Any, Awaitable, Callable, Optional

import httpx

from src.ai_core.backtranslate import backtranslate
from src.ai_core.client import ChatClient
from src.ai_core.judge import JudgeCondition, judge, judge_to_rubric
from src.ai_core.models import UsageRecord
from src.ai_core.pricing import PriceTable
from src.ai_core.prompt_template import PromptTemplate
from src.checks.models import CheckConfig
from src.checks.runner import run_all
from src.config.run_config import RunConfig
from src.logger.logger import logger
from src.tikz.parser import parse_tikz
from src.utils.clock import Clock, SystemClock
from src.utils.decorators import log_function_call
from src.utils.exceptions import BudgetExceededError, TikzCheckError

from .dataset import Dataset, DatasetItem
from .manifest import ItemResult, ItemStatus, PipelineKind, RunManifest


class Budget:
    """运行费用上限，已开始的条目允许跑完"""

    def __init__(self, limit_usd: Optional[float]):
        self.limit_usd = limit_usd
        self.spent_usd = 0.0

    def charge(self, usage: UsageRecord) -> None:
        self.spent_usd += usage.cost_usd

    @property
    def exhausted(self) -> bool:
        return self.limit_usd is not None and self.spent_usd >= self.limit_usd


def _failed(item: DatasetItem, error: Exception, usage: Optional[UsageRecord] = None) -> ItemResult:
    return ItemResult(
        id=item.id,
        status=ItemStatus.ERRORED,
        human=item.human,
        error_type=type(error).__name__,
        error=str(error),
        usage=usage or UsageRecord(),
    )


class PipelineRunner:
    """对一个数据集执行一种流水线"""

    def __init__(
        self,
        pipeline: PipelineKind,
        run_config: Optional[RunConfig] = None,
        condition: Optional[JudgeCondition] = None,
        transport: Optional[httpx.AsyncBaseTransport] = None,
        prices: Optional[PriceTable] = None,
        clock: Optional[Clock] = None,
        sleep: Optional[Callable[[float], Awaitable[Any]]] = None,
        templates: Optional[PromptTemplate] = None,
    ):
        self.pipeline = pipeline
        self.run_config = run_config or RunConfig()
        self.condition = condition or (JudgeCondition.CODE_AND_IMAGE if pipeline == PipelineKind.JUDGE else None)
        self.transport = transport
        self.prices = prices or self.run_config.price_table()
        self.clock = clock or SystemClock()
        self.sleep = sleep or asyncio.sleep
        self.templates = templates
        self.budget = Budget(self.run_config.model.budget_usd)

    @property
    def check_cfg(self) -> CheckConfig:
        return self.run_config.check

    @property
    def uses_model(self) -> bool:
        return self.pipeline != PipelineKind.DETERMINISTIC

    def _deterministic(self, item: DatasetItem) -> ItemResult:
        outcome = parse_tikz(item.tikz)
        report = run_all(outcome.ir, self.check_cfg)
        return ItemResult(
            id=item.id,
            status=ItemStatus.SCORED,
            human=item.human,
            report=report,
            skipped_constructs=len(outcome.skipped),
        )

    async def _with_model(self, item: DatasetItem, client: ChatClient) -> ItemResult:
        templates = self.templates or PromptTemplate()
        if self.pipeline == PipelineKind.BACKTRANSLATE:
            ir, usage = await backtranslate(item.tikz, client, item_id=item.id, templates=templates)
            report = run_all(ir, self.check_cfg)
            return ItemResult(id=item.id, status=ItemStatus.SCORED, human=item.human, report=report, usage=usage)

        response, usage = await judge(
            item.tikz, item.read_image(), client, self.condition, item_id=item.id, templates=templates
        )
        return ItemResult(
            id=item.id,
            status=ItemStatus.SCORED,
            human=item.human,
            report=judge_to_rubric(response),
            judge=response,
            usage=usage,
        )

    async def _run_item(self, item: DatasetItem, client: Optional[ChatClient], gate: asyncio.Semaphore) -> ItemResult:
        async with gate:
            if self.budget.exhausted:
                return _failed(item, BudgetExceededError(f"预算 {self.budget.limit_usd} USD 已用尽，条目未运行"))

            started = self.clock.monotonic()
            try:
                if client is None:
                    result = self._deterministic(item)
                else:
                    result = await self._with_model(item, client)
            except TikzCheckError as e:
                logger.error(f"条目 {item.id} 失败: {type(e).__name__}: {e}")
                result = _failed(item, e, getattr(e, "usage", None))
            except Exception as e:
                logger.exception(f"条目 {item.id} 出现未预期的错误: {e}")
                result = _failed(item, e)

            elapsed = max(self.clock.monotonic() - started, 0.0)
            # 条目耗时以墙钟为准，覆盖各次请求耗时之和
            result = result.model_copy(update={"usage": result.usage.model_copy(update={"wall_time": elapsed})})
            self.budget.charge(result.usage)
            logger.debug(f"条目 {item.id} 完成: {result.status.value}")
            return result

    @log_function_call(level="INFO")
    async def run(self, dataset: Dataset) -> RunManifest:
        started_at = self.clock.now().isoformat()
        model_cfg = self.run_config.model
        concurrency = model_cfg.max_concurrency if self.uses_model else 1
        gate = asyncio.Semaphore(concurrency)

        logger.info(f"开始评测: pipeline={self.pipeline.value}, 条目数={len(dataset)}, 并发={concurrency}")
        if self.uses_model:
            async with ChatClient(
                model_cfg, prices=self.prices, transport=self.transport, clock=self.clock, sleep=self.sleep
            ) as client:
                results = await asyncio.gather(*(self._run_item(item, client, gate) for item in dataset.items))
        else:
            results = [await self._run_item(item, None, gate) for item in dataset.items]

        ordered = tuple(sorted(results, key=lambda r: r.id))
        budget_skips = [r for r in ordered if r.error_type == BudgetExceededError.__name__]
        partial = bool(budget_skips)
        manifest = RunManifest(
            pipeline=self.pipeline,
            condition=self.condition.value if self.condition else None,
            model=model_cfg.snapshot() if self.uses_model else None,
            check=self.check_cfg.model_dump(mode="json"),
            prices=self.prices.to_dict() if self.uses_model else {},
            dataset={"path": str(dataset.path), "digest": dataset.digest, "items": len(dataset)},
            started_at=started_at,
            finished_at=self.clock.now().isoformat(),
            partial=partial,
            abort_reason=f"budget exhausted, {len(budget_skips)} items not run" if partial else None,
            items=ordered,
            usage=UsageRecord.total([r.usage for r in ordered]),
        )

        errored = len(manifest.errored)
        log = logger.warning if errored else logger.info
        log(f"评测结束: 已评分 {len(manifest.scored)} 条, 出错 {errored} 条, 费用 {manifest.usage.cost_usd:.4f} USD")
        return manifest


async def run_pipeline(
    dataset: Dataset,
    pipeline: PipelineKind,
    run_config: Optional[RunConfig] = None,
    **options: Any,
) -> RunManifest:
    """便捷入口，options 透传给 PipelineRunner"""
    return await PipelineRunner(pipeline, run_config, **options).run(dataset)


__all__ = ["Budget", "PipelineRunner", "run_pipeline"]
