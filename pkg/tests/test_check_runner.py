import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from ir_builders import canvas, make_ir, segment, shifted
from src.checks.models import RUBRIC_CRITERIA, CheckResult, Criterion, Verdict
from src.checks.runner import run_all
from src.ir.serialization import ir_from_dict
from src.utils.common import canonical_json
from src.utils.exceptions import IRValidationError

CORPUS = sorted((Path(__file__).parent / "fixtures" / "ir_corpus").glob("*.json"))

SHORT_NAMES = dict(zip(("angles", "proportions", "in_frame", "readable", "association", "overlap"), RUBRIC_CRITERIA))


def load_case(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.mark.parametrize("path", CORPUS, ids=[p.stem for p in CORPUS])
def test_corpus_verdicts(path):
    """测试夹具库中每个 IR 的六项判定"""
    case = load_case(path)
    report = run_all(ir_from_dict(case["ir"]))
    expected = {SHORT_NAMES[k]: Verdict(v) for k, v in case["expected"].items()}
    assert report.verdicts() == expected

    for short, ids in case.get("expect_ids", {}).items():
        findings = report.get(SHORT_NAMES[short]).findings
        assert [i for f in findings for i in f.entity_ids] == ids


def test_well_formed_triangle_is_valid():
    """测试标注完整的三角形整体有效"""
    report = run_all(ir_from_dict(load_case(CORPUS[0].parent / "labeled_triangle.json")["ir"]))
    assert report.overall_valid
    assert report.get(Criterion.ANGLES).verdict == Verdict.NA


def test_shift_off_canvas_only_breaks_in_frame():
    """测试整体移出画布只影响画布检查"""
    ir = ir_from_dict(load_case(CORPUS[0].parent / "labeled_triangle.json")["ir"])
    before = run_all(ir).verdicts()
    after = run_all(shifted(ir, 200, 0, keep_canvas=True)).verdicts()
    changed = {c for c in RUBRIC_CRITERIA if before[c] != after[c]}
    assert changed == {Criterion.IN_FRAME}
    assert after[Criterion.IN_FRAME] == Verdict.FAIL


def test_report_json_order_and_determinism():
    """测试报告 JSON 顺序固定且重复运行逐字节一致"""
    ir = ir_from_dict(load_case(CORPUS[0].parent / "labeled_triangle.json")["ir"])
    data = run_all(ir).to_dict()
    assert list(data) == [c.value for c in RUBRIC_CRITERIA] + ["overall_valid"]
    assert canonical_json(run_all(ir).to_dict()) == canonical_json(data)


def test_invalid_ir_is_rejected_before_checks():
    """测试非法 IR 在检查前报错"""
    ir = make_ir(segment("s", (0, 0), (0, 0)), canvas=canvas((0, 0), (10, 10)))
    with pytest.raises(IRValidationError) as exc_info:
        run_all(ir)
    assert exc_info.value.violations[0].code == "degenerate_segment"


def test_fail_requires_findings():
    """测试 Fail 必须带 finding，NA 只用于允许的准则"""
    with pytest.raises(ValidationError):
        CheckResult(criterion=Criterion.OVERLAP, verdict=Verdict.FAIL)
    with pytest.raises(ValidationError):
        CheckResult(criterion=Criterion.IN_FRAME, verdict=Verdict.NA)
