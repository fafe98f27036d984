import hashlib
import json

import pytest

from src.checks.models import Criterion, Rating
from src.harness.dataset import load_dataset
from src.utils.exceptions import DatasetError

HUMAN = {
    "angle_labels_matches_arcs": "N/A",
    "labeled_lengths_areas_match_proportions": "NA",
    "diagram_fully_in_canvas": "Yes",
    "diagram_elements_are_readable_size": "Yes",
    "labels_associated_with_elements": "N/A",
    "diagram_elements_dont_problematically_overlap": "No",
}


def line(item_id: str, **overrides) -> str:
    data = {"id": item_id, "request": "draw it", "tikz": "\\draw (0,0) -- (1,0);", "human": dict(HUMAN)}
    data.update(overrides)
    return json.dumps(data)


def write(tmp_path, *lines: str):
    path = tmp_path / "data.jsonl"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_load_fixture_dataset(fixtures_dir):
    """测试夹具数据集：跳过空行、标注取值兼容 N/A"""
    path = fixtures_dir / "datasets" / "deterministic.jsonl"
    dataset = load_dataset(path)
    assert [item.id for item in dataset.items] == ["d1", "d2", "d3", "d4", "d5"]
    assert dataset.digest == hashlib.sha256(path.read_bytes()).hexdigest()
    assert dataset.items[0].human[Criterion.ANGLES] == Rating.NA
    assert dataset.items[3].human[Criterion.ANGLES] == Rating.YES


def test_image_path_is_relative_to_dataset(fixtures_dir):
    """测试图片路径相对数据集文件解析，缺失时返回 None"""
    dataset = load_dataset(fixtures_dir / "datasets" / "mock.jsonl")
    m1, _, m3 = dataset.items
    assert m1.image_path == fixtures_dir / "datasets" / "img" / "m1.png"
    assert m1.read_image().startswith(b"\x89PNG")
    assert m3.read_image() is None


def test_missing_image_file_reads_none(tmp_path):
    """测试图片文件不存在"""
    dataset = load_dataset(write(tmp_path, line("a", image_path="nowhere.png")))
    assert dataset.items[0].read_image() is None


def test_invalid_json_line(tmp_path):
    """测试非法 JSON 行报告行号"""
    with pytest.raises(DatasetError) as exc_info:
        load_dataset(write(tmp_path, line("a"), "{oops"))
    assert exc_info.value.lines == [2]
    assert str(exc_info.value).startswith("第 2 行不是合法JSON")


def test_missing_label(tmp_path):
    """测试缺少某项人工标注"""
    human = {k: v for k, v in HUMAN.items() if k != "diagram_fully_in_canvas"}
    with pytest.raises(DatasetError) as exc_info:
        load_dataset(write(tmp_path, line("a", human=human)))
    assert exc_info.value.lines == [1]
    assert "item a is missing human label 'diagram_fully_in_canvas'" in str(exc_info.value)


def test_na_on_yes_no_criterion(tmp_path):
    """测试只允许 Yes/No 的准则标了 NA"""
    human = {**HUMAN, "diagram_elements_are_readable_size": "N/A"}
    with pytest.raises(DatasetError, match="N/A is not allowed"):
        load_dataset(write(tmp_path, line("a", human=human)))


def test_empty_tikz_rejected(tmp_path):
    """测试 tikz 字段为空"""
    with pytest.raises(DatasetError, match="第 1 行数据无效: tikz"):
        load_dataset(write(tmp_path, line("a", tikz="  ")))


def test_duplicate_ids(tmp_path):
    """测试 id 重复时报告所有出现的行"""
    with pytest.raises(DatasetError) as exc_info:
        load_dataset(write(tmp_path, line("a"), line("b"), "", line("c"), line("a")))
    assert exc_info.value.lines == [1, 5]


def test_optional_judge_labels(tmp_path):
    """测试闭合与核心性质两项标注可选"""
    human = {**HUMAN, "shape_outlines_are_closed": "No"}
    item = load_dataset(write(tmp_path, line("a", human=human))).items[0]
    assert item.human[Criterion.SHAPE_CLOSED] == Rating.NO
    assert Criterion.CORE_PROPERTIES not in item.human
