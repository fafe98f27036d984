"""按固定顺序运行六项检查"""
from typing import Callable, Optional

from src.ir.model import TikzIR
from src.ir.validation import validate_ir
from src.logger.logger import logger
from src.utils.decorators import log_function_call
from src.utils.exceptions import IRValidationError

from .angles import check_angle_labels
from .association import check_label_association
from .frame import check_in_frame
from .models import CheckConfig, CheckResult, RubricReport
from .overlap import check_overlap
from .proportions import check_proportions
from .readable import check_readable

CheckFn = Callable[[TikzIR, CheckConfig], CheckResult]

# 与报告中准则顺序一致
CHECKS: tuple[CheckFn, ...] = (
    check_angle_labels,
    check_proportions,
    check_in_frame,
    check_readable,
    check_label_association,
    check_overlap,
)


@log_function_call(level="DEBUG")
def run_all(ir: TikzIR, cfg: Optional[CheckConfig] = None) -> RubricReport:
    """先校验 IR，再依次执行全部检查

    Raises:
        IRValidationError: IR 不满足不变量
    """
    violations = validate_ir(ir)
    if violations:
        raise IRValidationError(violations)

    cfg = cfg or CheckConfig()
    report = RubricReport(results=tuple(check(ir, cfg) for check in CHECKS))
    summary = ", ".join(f"{c.value}={v.value}" for c, v in report.verdicts().items())
    logger.info(f"规则检查完成: {summary}, overall_valid={report.overall_valid}")
    return report
