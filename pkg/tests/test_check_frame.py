import pytest

from ir_builders import box_label, canvas, circle, label, make_ir, rect, segment
from src.checks.frame import check_in_frame, working_canvas
from src.checks.models import CheckConfig, Verdict
from src.ir.model import BBox

CFG = CheckConfig()
FRAME = canvas((0, 0), (100, 100))


def test_no_page_bounds_fails():
    """测试既没有页面范围也没有裁剪区域时失败"""
    result = check_in_frame(make_ir(segment("s", (0, 0), (100000, 0))), CFG)
    assert result.verdict == Verdict.FAIL
    assert result.findings[0].entity_ids == ()
    assert result.findings[0].message == "no page bounds or clip regions"
    assert working_canvas(make_ir()) == (None, False)


def test_clip_alone_bounds_the_frame():
    """测试只有裁剪区域时以裁剪区域为画布"""
    clip = rect("clip", (0, 0), (50, 50))
    assert check_in_frame(make_ir(segment("s", (10, 10), (40, 10)), clips=[clip]), CFG).verdict == Verdict.PASS
    assert check_in_frame(make_ir(segment("s", (10, 10), (60, 10)), clips=[clip]), CFG).verdict == Verdict.FAIL


def test_segment_beyond_buffer_fails():
    """测试线段超出缓冲后的画布"""
    result = check_in_frame(make_ir(segment("s", (0, 0), (105, 0)), canvas=FRAME), CFG)
    assert result.verdict == Verdict.FAIL
    assert result.findings[0].entity_ids == ("s",)
    assert result.findings[0].message == "LineSegment extends 3.00pt beyond the canvas"


@pytest.mark.parametrize("radius, verdict", [(51, Verdict.PASS), (52, Verdict.PASS), (52.5, Verdict.FAIL)])
def test_buffer_boundary(radius, verdict):
    """测试 2pt 缓冲的边界"""
    ir = make_ir(circle("c", (50, 50), radius), canvas=FRAME)
    assert check_in_frame(ir, CFG).verdict == verdict


def test_labels_count_toward_frame():
    """测试文字框越界同样失败"""
    ir = make_ir(rect("r", (0, 0), (100, 100)), label("n", "Label", (100, 50)), canvas=FRAME)
    result = check_in_frame(ir, CFG)
    assert result.verdict == Verdict.FAIL
    assert result.findings[0].message == "TextNode extends 10.50pt beyond the canvas"


def test_empty_labels_are_ignored():
    """测试空文字节点不参与判断"""
    ir = make_ir(rect("r", (0, 0), (100, 100)), box_label("n", "", (200, 200), (200, 200)), canvas=FRAME)
    assert check_in_frame(ir, CFG).verdict == Verdict.PASS


def test_clip_regions_intersect_with_canvas():
    """测试裁剪区域与画布取交集"""
    clip = rect("clip", (0, 0), (50, 100))
    assert working_canvas(make_ir(canvas=FRAME, clips=[clip])) == (BBox.from_bounds(0, 0, 50, 100), True)

    ir = make_ir(segment("s", (10, 10), (80, 10)), canvas=FRAME, clips=[clip])
    assert check_in_frame(ir, CFG).verdict == Verdict.FAIL


def test_disjoint_clip_makes_canvas_empty():
    """测试画布与裁剪区域不相交"""
    ir = make_ir(segment("s", (10, 10), (20, 10)), canvas=FRAME, clips=[rect("clip", (200, 0), (300, 100))])
    result = check_in_frame(ir, CFG)
    assert result.verdict == Verdict.FAIL
    assert result.findings[0].entity_ids == ("canvas", "clip")
    assert result.findings[0].message == "working canvas is empty"


@pytest.mark.parametrize("buffer, verdict", [(2.0, Verdict.FAIL), (3.0, Verdict.PASS), (5.0, Verdict.PASS)])
def test_larger_buffer_never_fails_more(buffer, verdict):
    """测试缓冲越大越宽松"""
    ir = make_ir(segment("s", (0, 0), (103, 0)), canvas=FRAME)
    assert check_in_frame(ir, CheckConfig(canvas_buffer_pt=buffer)).verdict == verdict
