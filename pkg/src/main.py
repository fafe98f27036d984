"""命令行入口：tikzcheck translate | check | judge | eval | report

标准输出只写结果（JSON 或报表），日志全部走 stderr。
退出码：0 成功，2 部分完成（预算中止或存在出错条目），1 失败。
"""
import argparse
import asyncio
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from src.ai_core.backtranslate import backtranslate
from src.ai_core.client import ChatClient
from src.ai_core.judge import JudgeCondition, judge, judge_to_rubric
from src.ai_core.mock import FixtureTransport
from src.checks.runner import run_all
from src.config.run_config import RunConfig, load_run_config
from src.config.settings import settings
from src.harness.dataset import load_dataset
from src.harness.manifest import PipelineKind, load_manifest, save_manifest
from src.harness.pipeline import PipelineRunner
from src.harness.report import render_report
from src.ir.model import TikzIR
from src.ir.serialization import ir_from_json, ir_to_json
from src.logger.logger import logger, setup_logger
from src.tikz.parser import parse_tikz, subset_report
from src.utils.clock import FrozenClock
from src.utils.common import canonical_json, read_text, write_text
from src.utils.decorators import log_function_call
from src.utils.exceptions import ConfigError, TikzCheckError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARTIAL = 2


async def _no_sleep(_: float) -> None:
    return None


def _client(run_config: RunConfig, mock: Optional[Path]) -> ChatClient:
    """--mock 时使用夹具传输层与固定时钟；否则必须配置 API 密钥"""
    if mock is not None:
        return ChatClient(
            run_config.model,
            prices=run_config.price_table(),
            transport=FixtureTransport(mock),
            clock=FrozenClock(),
            sleep=_no_sleep,
        )
    if not run_config.model.api_key.get_secret_value():
        settings.require_api_key()
    return ChatClient(run_config.model, prices=run_config.price_table())


def _load_ir(path: Path) -> TikzIR:
    """.json 按 IR 读取，其余按 TikZ 源码解析"""
    text = read_text(path)
    if path.suffix == ".json":
        return ir_from_json(text)
    return parse_tikz(text).ir


@log_function_call(level="DEBUG")
def cmd_translate(args: argparse.Namespace, run_config: RunConfig) -> int:
    files: list[Path] = args.files
    if args.skips and len(files) > 1:
        raise ConfigError("--skips 只能在单个输入文件时使用")

    failures = 0
    for path in files:
        try:
            text = read_text(path)
            if args.frontend == "deterministic":
                outcome = parse_tikz(text)
                ir = outcome.ir
                coverage = subset_report(text)
                logger.info(
                    f"{path}: 语句 {coverage.statements} 条, 跳过 {coverage.skipped} 条, 覆盖率 {coverage.coverage:.1%}"
                )
                write_text(args.skips or Path(f"{path}.skips.json"), canonical_json(outcome.skips_to_dict()))
            else:
                async def translate_one() -> TikzIR:
                    async with _client(run_config, args.mock) as client:
                        result, usage = await backtranslate(text, client, item_id=path.stem)
                    logger.info(f"{path}: 回译完成, 费用 {usage.cost_usd:.4f} USD, 重试 {usage.retries} 次")
                    return result

                ir = asyncio.run(translate_one())
        except TikzCheckError as e:
            if len(files) == 1:
                raise
            logger.error(f"{path}: 翻译失败: {e}")
            failures += 1
            continue

        if len(files) == 1:
            sys.stdout.write(ir_to_json(ir))
        else:
            write_text(Path(f"{path}.ir.json"), ir_to_json(ir))

    return EXIT_PARTIAL if failures else EXIT_OK


@log_function_call(level="DEBUG")
def cmd_check(args: argparse.Namespace, run_config: RunConfig) -> int:
    report = run_all(_load_ir(args.file), run_config.check)
    sys.stdout.write(canonical_json(report.to_dict()))
    return EXIT_OK


@log_function_call(level="DEBUG")
def cmd_judge(args: argparse.Namespace, run_config: RunConfig) -> int:
    condition = JudgeCondition(args.condition)
    tikz = read_text(args.file) if args.file else None
    image = args.image.read_bytes() if args.image else None
    source = args.file or args.image
    item_id = source.stem if source else "adhoc"

    async def judge_one() -> dict[str, Any]:
        async with _client(run_config, args.mock) as client:
            response, usage = await judge(tikz, image, client, condition, item_id=item_id)
        return {
            "judge": response.to_dict(),
            "report": judge_to_rubric(response).to_dict(),
            "usage": usage.model_dump(),
        }

    sys.stdout.write(canonical_json(asyncio.run(judge_one())))
    return EXIT_OK


@log_function_call(level="INFO")
def cmd_eval(args: argparse.Namespace, run_config: RunConfig) -> int:
    run_config = run_config.with_model(
        model_name=args.model,
        api_base_url=args.api_base,
        max_concurrency=args.max_concurrency,
        budget_usd=args.budget_usd,
    )
    pipeline = PipelineKind(args.pipeline)
    if pipeline != PipelineKind.DETERMINISTIC and args.mock is None and not run_config.model.api_key.get_secret_value():
        settings.require_api_key()

    dataset = load_dataset(args.dataset)
    options: dict[str, Any] = {}
    if args.mock is not None:
        options = {"transport": FixtureTransport(args.mock), "clock": FrozenClock(), "sleep": _no_sleep}
    runner = PipelineRunner(
        pipeline,
        run_config,
        condition=JudgeCondition(args.condition) if args.condition else None,
        **options,
    )
    manifest = asyncio.run(runner.run(dataset))
    save_manifest(manifest, args.out, overwrite=args.force)
    logger.info(f"运行清单已写入: {args.out}")

    text, _ = render_report([manifest])
    sys.stdout.write(text)
    return EXIT_PARTIAL if manifest.partial or manifest.errored else EXIT_OK


@log_function_call(level="DEBUG")
def cmd_report(args: argparse.Namespace, run_config: RunConfig) -> int:
    manifests = [load_manifest(path) for path in args.manifests]
    text, data = render_report(manifests)
    sys.stdout.write(text)
    if args.out:
        write_text(args.out, canonical_json(data))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tikzcheck", description="几何示意图 TikZ 代码的规则检查与评测工具")
    parser.add_argument("--config", type=Path, help="运行配置文件(JSON)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="输出调试日志")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="TikZ 源码 → IR JSON")
    p.add_argument("--frontend", choices=["deterministic", "llm"], default="deterministic")
    p.add_argument("--skips", type=Path, help="跳过构造的输出路径，默认 <输入>.skips.json")
    p.add_argument("--mock", type=Path, help="模拟夹具目录")
    p.add_argument("files", type=Path, nargs="+")
    p.set_defaults(handler=cmd_translate)

    p = sub.add_parser("check", help="对 IR 或 TikZ 源码运行六项检查")
    p.add_argument("file", type=Path)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("judge", help="LLM-as-a-Judge 评审")
    p.add_argument("--condition", choices=[c.value for c in JudgeCondition], default=JudgeCondition.CODE.value)
    p.add_argument("--image", type=Path)
    p.add_argument("--mock", type=Path)
    p.add_argument("file", type=Path, nargs="?")
    p.set_defaults(handler=cmd_judge)

    p = sub.add_parser("eval", help="在数据集上运行流水线并写出运行清单")
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--pipeline", choices=[k.value for k in PipelineKind], required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--model")
    p.add_argument("--api-base")
    p.add_argument("--condition", choices=[c.value for c in JudgeCondition])
    p.add_argument("--max-concurrency", type=int)
    p.add_argument("--budget-usd", type=float)
    p.add_argument("--mock", type=Path)
    p.add_argument("--force", action="store_true", help="覆盖已存在的清单")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("report", help="由运行清单生成报表")
    p.add_argument("manifests", type=Path, nargs="+")
    p.add_argument("--out", type=Path, help="JSON 报表输出路径")
    p.set_defaults(handler=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        setup_logger("DEBUG")

    try:
        run_config = load_run_config(args.config)
        return args.handler(args, run_config)
    except TikzCheckError as e:
        sys.stderr.write(f"错误: {type(e).__name__}: {e}\n")
        return EXIT_FAILURE
    except OSError as e:
        sys.stderr.write(f"错误: 文件读写失败: {e}\n")
        return EXIT_FAILURE
    except json.JSONDecodeError as e:
        sys.stderr.write(f"错误: JSON 格式错误: {e}\n")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
