from .angles import check_angle_labels
from .association import check_label_association
from .elements import classify_label
from .frame import check_in_frame, working_canvas
from .models import (
    CRITERION_TITLES,
    JUDGE_CRITERIA,
    NA_CRITERIA,
    RUBRIC_CRITERIA,
    CheckConfig,
    CheckResult,
    Criterion,
    Finding,
    Rating,
    RubricReport,
    Verdict,
)
from .overlap import check_overlap
from .proportions import check_proportions
from .readable import check_readable
from .runner import CHECKS, run_all

__all__ = [
    "CRITERION_TITLES",
    "JUDGE_CRITERIA",
    "NA_CRITERIA",
    "RUBRIC_CRITERIA",
    "CheckConfig",
    "CheckResult",
    "Criterion",
    "Finding",
    "Rating",
    "RubricReport",
    "Verdict",
    "classify_label",
    "check_angle_labels",
    "check_proportions",
    "check_in_frame",
    "check_readable",
    "check_label_association",
    "check_overlap",
    "working_canvas",
    "CHECKS",
    "run_all",
]
