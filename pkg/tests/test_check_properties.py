"""规则检查的性质测试：平移不变、等比缩放、缓冲单调"""
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from ir_builders import arc, canvas, circle, label, make_ir, rect, scaled, segment, shifted
from src.checks.frame import check_in_frame
from src.checks.models import CheckConfig, Criterion, Verdict
from src.checks.runner import run_all

SETTINGS = settings(max_examples=1000, derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow])

ints = st.integers(min_value=-100, max_value=100)
sizes = st.integers(min_value=1, max_value=120)
TEXTS = ["A", "B", "3", "6", "12 cm", "45°", "$90^\\circ$", "$x$"]


@st.composite
def diagrams(draw, with_arcs: bool = True):
    """整数坐标、轴向线段的小型示意图"""
    entities = []
    for i in range(draw(st.integers(0, 3))):
        x, y, length = draw(ints), draw(ints), draw(sizes)
        end = (x + length, y) if draw(st.booleans()) else (x, y + length)
        entities.append(segment(f"s{i}", (x, y), end))
    for i in range(draw(st.integers(0, 2))):
        x, y = draw(ints), draw(ints)
        entities.append(rect(f"r{i}", (x, y), (x + draw(sizes), y + draw(sizes))))
    for i in range(draw(st.integers(0, 2))):
        entities.append(circle(f"c{i}", (draw(ints), draw(ints)), draw(sizes)))
    if with_arcs:
        for i in range(draw(st.integers(0, 2))):
            start = 15 * draw(st.integers(0, 23))
            sweep = 15 * draw(st.integers(1, 23))
            entities.append(arc(f"a{i}", (draw(ints), draw(ints)), draw(sizes), start, start + sweep))
    for i in range(draw(st.integers(0, 4))):
        entities.append(label(f"n{i}", draw(st.sampled_from(TEXTS)), (draw(ints), draw(ints))))

    frame = None
    if draw(st.booleans()):
        x, y = draw(ints), draw(ints)
        frame = canvas((x, y), (x + 2 * draw(sizes), y + 2 * draw(sizes)))
    return make_ir(*entities, canvas=frame)


@SETTINGS
@given(diagrams(), st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_translation_preserves_verdicts(ir, dx, dy):
    """测试整体平移（含画布）不改变任何判定"""
    assert run_all(shifted(ir, dx, dy)).verdicts() == run_all(ir).verdicts()


@SETTINGS
@given(diagrams(with_arcs=False), st.sampled_from([0.5, 2.0, 4.0]))
def test_uniform_scale_preserves_relative_checks(ir, s):
    """测试等比缩放（距离阈值同步缩放）不改变比例、可读性、重叠与画布判定"""
    base = CheckConfig()
    scaled_cfg = CheckConfig(label_assoc_max_pt=base.label_assoc_max_pt * s, canvas_buffer_pt=base.canvas_buffer_pt * s)
    before = run_all(ir, base).verdicts()
    after = run_all(scaled(ir, s), scaled_cfg).verdicts()
    for criterion in (Criterion.PROPORTIONS, Criterion.READABLE, Criterion.OVERLAP, Criterion.IN_FRAME):
        assert after[criterion] == before[criterion]


@SETTINGS
@given(diagrams(), st.floats(min_value=0.5, max_value=10), st.floats(min_value=0, max_value=10))
def test_in_frame_is_monotone_in_buffer(ir, buffer, extra):
    """测试缓冲加大后原本通过的不会失败"""
    if check_in_frame(ir, CheckConfig(canvas_buffer_pt=buffer)).verdict == Verdict.PASS:
        assert check_in_frame(ir, CheckConfig(canvas_buffer_pt=buffer + extra)).verdict == Verdict.PASS


@SETTINGS
@given(diagrams())
def test_na_discipline(ir):
    """测试三项 Yes/No 准则从不返回 NA，且 Fail 必带 finding"""
    report = run_all(ir)
    for criterion in (Criterion.IN_FRAME, Criterion.READABLE, Criterion.OVERLAP):
        assert report.get(criterion).verdict != Verdict.NA
    for result in report.results:
        assert (result.verdict == Verdict.FAIL) == bool(result.findings)
