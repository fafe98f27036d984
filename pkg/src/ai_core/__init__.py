from .backtranslate import backtranslate
from .client import ChatClient
from .judge import JudgeCondition, judge, judge_to_rubric
from .mock import FixtureTransport
from .models import ChatCompletion, JudgeEntry, JudgeResponse, ModelConfig, ReasoningEffort, UsageRecord
from .pricing import ModelPrice, PriceTable
from .prompt_template import PromptTemplate

__all__ = [
    "backtranslate",
    "ChatClient",
    "JudgeCondition",
    "judge",
    "judge_to_rubric",
    "FixtureTransport",
    "ChatCompletion",
    "JudgeEntry",
    "JudgeResponse",
    "ModelConfig",
    "ReasoningEffort",
    "UsageRecord",
    "ModelPrice",
    "PriceTable",
    "PromptTemplate",
]
