from .model import (
    CM_TO_PT,
    Anchor,
    Arc,
    BBox,
    Circle,
    Face3D,
    LineSegment,
    Point,
    Point3D,
    Polygon,
    Rect,
    RightAngleSymbol,
    TextNode,
    TikzIR,
    estimate_text_bbox,
)
from .serialization import ir_from_dict, ir_from_json, ir_json_schema, ir_to_dict, ir_to_json
from .text import LabelKind, clean_latex_text, label_kind, parse_angle_value, parse_numeric_value
from .validation import Violation, validate_ir

__all__ = [
    "CM_TO_PT",
    "Anchor",
    "Arc",
    "BBox",
    "Circle",
    "Face3D",
    "LineSegment",
    "Point",
    "Point3D",
    "Polygon",
    "Rect",
    "RightAngleSymbol",
    "TextNode",
    "TikzIR",
    "estimate_text_bbox",
    "ir_from_dict",
    "ir_from_json",
    "ir_json_schema",
    "ir_to_dict",
    "ir_to_json",
    "LabelKind",
    "clean_latex_text",
    "label_kind",
    "parse_angle_value",
    "parse_numeric_value",
    "Violation",
    "validate_ir",
]
