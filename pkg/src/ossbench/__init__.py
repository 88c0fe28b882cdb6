"""Delivery-performance benchmarks for open-source repositories."""

from ossbench.classify import classify
from ossbench.fixtures import load_fixture, save_fixture
from ossbench.metrics import EngineConfig, compute_all
from ossbench.model import (
    BenchmarkReport,
    MetricKind,
    MetricResult,
    Period,
    PerformanceLevel,
    RepositorySnapshot,
    Status,
)
from ossbench.report import build_report, render

__version__ = "0.1.0"

__all__ = [
    "BenchmarkReport",
    "EngineConfig",
    "MetricKind",
    "MetricResult",
    "Period",
    "PerformanceLevel",
    "RepositorySnapshot",
    "Status",
    "build_report",
    "classify",
    "compute_all",
    "load_fixture",
    "render",
    "save_fixture",
]
