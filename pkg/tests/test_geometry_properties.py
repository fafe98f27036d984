"""几何内核的性质测试"""
import math

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ir_builders import arc, polygon, pt
from src.geometry.kernel import (
    arc_sweep,
    bbox_intersection_area,
    point_distance,
    point_segment_distance,
    polygon_contains,
)
from src.ir.model import BBox

SETTINGS = settings(max_examples=1000, derandomize=True, deadline=None)

coords = st.floats(min_value=-1000, max_value=1000, allow_nan=False, allow_infinity=False)


def ray_cast(vertices: list[tuple[float, float]], x: float, y: float) -> bool:
    inside = False
    n = len(vertices)
    for i in range(n):
        (x1, y1), (x2, y2) = vertices[i], vertices[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            cross_x = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < cross_x:
                inside = not inside
    return inside


@st.composite
def star_polygons(draw):
    """围绕原点按角度排列顶点的简单多边形"""
    n = draw(st.integers(min_value=3, max_value=8))
    gap = 2 * math.pi / n
    vertices = []
    for i in range(n):
        jitter = draw(st.floats(min_value=-0.4, max_value=0.4)) * gap
        radius = draw(st.floats(min_value=1, max_value=100))
        angle = i * gap + jitter
        vertices.append((radius * math.cos(angle), radius * math.sin(angle)))
    return vertices


@SETTINGS
@given(star_polygons(), st.floats(-120, 120), st.floats(-120, 120))
def test_polygon_contains_matches_ray_casting(vertices, x, y):
    """测试包含判断与射线法一致（远离边界的点）"""
    boundary = min(
        point_segment_distance(pt(x, y), (pt(*vertices[i]), pt(*vertices[(i + 1) % len(vertices)])))
        for i in range(len(vertices))
    )
    assume(boundary > 1e-6)
    poly = polygon("p", *vertices)
    assert polygon_contains(poly, pt(x, y)) == ray_cast(vertices, x, y)


@SETTINGS
@given(coords, coords, coords, coords, coords, coords, coords, coords)
def test_bbox_intersection_area_is_symmetric(ax, ay, aw, ah, bx, by, bw, bh):
    """测试包围盒相交面积对称"""
    a = BBox.from_bounds(ax, ay, ax + abs(aw), ay + abs(ah))
    b = BBox.from_bounds(bx, by, bx + abs(bw), by + abs(bh))
    assert bbox_intersection_area(a, b) == bbox_intersection_area(b, a)
    assert bbox_intersection_area(a, b) >= 0.0


@SETTINGS
@given(st.floats(-720, 720), st.floats(-720, 720))
def test_arc_sweep_reversal_sums_to_full_turn(start, end):
    """测试交换起止角后两段扫角之和为 360°"""
    forward = arc("a", (0, 0), 1, start, end)
    backward = arc("b", (0, 0), 1, end, start)
    sweep = arc_sweep(forward)
    assert 0 < sweep <= 360
    assume(1e-6 < sweep < 360 - 1e-6)
    assert math.isclose(sweep + arc_sweep(backward), 360.0, abs_tol=1e-9)


@SETTINGS
@given(coords, coords, coords, coords, coords, coords)
def test_triangle_inequality(ax, ay, bx, by, cx, cy):
    """测试距离满足三角不等式"""
    a, b, c = pt(ax, ay), pt(bx, by), pt(cx, cy)
    assert point_distance(a, c) <= point_distance(a, b) + point_distance(b, c) + 1e-9
