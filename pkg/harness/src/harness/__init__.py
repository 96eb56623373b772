"""Benchmark harness: dataset preparation, cross-validated committee
predictions, and figure rendering for the controversy miner.

The harness talks to the miner only through files (data.csv,
schema.json, predictions.csv, export-matrix CSVs) and its CLI; it never
imports the miner package.
"""

from .datasets import FetchError, PrepareError, prepare
from .figures import RenderError, render
from .predict import FAMILIES, ExperimentSpec, predict
from .registry import DATASET_IDS, REGISTRY, DatasetSpec

__version__ = "0.1.0"

__all__ = [
    "DATASET_IDS",
    "DatasetSpec",
    "ExperimentSpec",
    "FAMILIES",
    "FetchError",
    "PrepareError",
    "REGISTRY",
    "RenderError",
    "predict",
    "prepare",
    "render",
    "__version__",
]
