from .dataset import Dataset, DatasetItem, load_dataset
from .manifest import ItemResult, ItemStatus, PipelineKind, RunManifest, load_manifest, save_manifest
from .pipeline import Budget, PipelineRunner, run_pipeline
from .report import render_report

__all__ = [
    "Dataset",
    "DatasetItem",
    "load_dataset",
    "ItemResult",
    "ItemStatus",
    "PipelineKind",
    "RunManifest",
    "load_manifest",
    "save_manifest",
    "Budget",
    "PipelineRunner",
    "run_pipeline",
    "render_report",
]
