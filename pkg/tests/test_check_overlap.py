from ir_builders import box_label, circle, face, make_ir, rect, segment
from src.checks.models import CheckConfig, Verdict
from src.checks.overlap import check_overlap

CFG = CheckConfig()

NEAR = face("near", (0, 0, 10), (10, 0, 10), (10, 10, 10), (0, 10, 10))
LATE = face("late", (5, 5, 0), (15, 5, 0), (15, 15, 0), (5, 15, 0))
LATE_CW = face("late", (5, 5, 0), (5, 15, 0), (15, 15, 0), (15, 5, 0))


def test_overlapping_labels_fail():
    """测试两个不同文字框重叠一半"""
    ir = make_ir(
        rect("r", (-50, -50), (100, 100)),
        box_label("a", "A", (0, 0), (10, 10)),
        box_label("b", "B", (5, 0), (15, 10)),
    )
    result = check_overlap(ir, CFG)
    assert result.verdict == Verdict.FAIL
    assert result.findings[0].entity_ids == ("a", "b")
    assert result.findings[0].message == "labels overlap by 50.00% of the smaller box"


def test_identical_text_is_not_flagged():
    """测试相同文字的重复标签不算重叠"""
    ir = make_ir(box_label("a", "A", (0, 0), (10, 10)), box_label("b", "$A$", (5, 0), (15, 10)))
    assert check_overlap(ir, CFG).verdict == Verdict.PASS


def test_slight_overlap_is_tolerated():
    """测试重叠面积低于 5% 时通过"""
    ir = make_ir(box_label("a", "A", (0, 0), (20, 10)), box_label("b", "B", (19.1, 0), (39.1, 10)))
    assert check_overlap(ir, CFG).verdict == Verdict.PASS


def test_line_through_label_fails():
    """测试线段横穿文字框"""
    ir = make_ir(box_label("n", "AB", (0, 0), (50, 2)), segment("s1", (-10, 1), (60, 1)))
    result = check_overlap(ir, CFG)
    assert result.verdict == Verdict.FAIL
    assert result.findings[0].entity_ids == ("n", "s1")
    assert result.findings[0].message == "s1 runs 50.00pt through label (limit 41.60pt)"


def test_line_partly_inside_label_passes():
    """测试穿过长度低于周长 40% 时通过"""
    ir = make_ir(box_label("n", "AB", (0, 0), (50, 2)), segment("s1", (-10, 1), (30, 1)))
    assert check_overlap(ir, CFG).verdict == Verdict.PASS


def test_circle_through_label():
    """测试圆周穿过文字框"""
    ir = make_ir(box_label("n", "ABCDEFGH", (-14, 46), (14, 51)), circle("c", (0, 0), 50))
    result = check_overlap(ir, CFG)
    assert result.verdict == Verdict.FAIL
    assert result.findings[0].entity_ids == ("n", "c")


def test_far_face_drawn_over_near_face_fails():
    """测试后画的远面朝向观察者时深度顺序错误"""
    result = check_overlap(make_ir(NEAR, LATE), CFG)
    assert result.verdict == Verdict.FAIL
    assert result.findings[0].entity_ids == ("late", "near")
    assert result.findings[0].message == "depth ordering inconsistent: late is behind near but drawn over it"


def test_consistent_face_order_passes():
    """测试远面先画或背向观察者时通过"""
    assert check_overlap(make_ir(LATE, NEAR), CFG).verdict == Verdict.PASS
    assert check_overlap(make_ir(NEAR, LATE_CW), CFG).verdict == Verdict.PASS


def test_disjoint_faces_pass():
    """测试投影不重叠的面不比较深度"""
    apart = face("apart", (50, 50, 0), (60, 50, 0), (60, 60, 0), (50, 60, 0))
    assert check_overlap(make_ir(NEAR, apart), CFG).verdict == Verdict.PASS
