"""Synthetic timelines and a brute-force oracle for differential testing."""

from pathlib import Path

from ossbench.fixtures import save_fixture
from ossbench.harness.generate import TimelineSpec, generate
from ossbench.harness.oracle import GEOMETRIES, compare, geometry_counts, oracle_metrics


def emit_case(snapshot, directory, name: str) -> Path:
    """Write *snapshot* as a fixture so a failing case can be replayed with ``bench --offline``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{name}.json"
    save_fixture(snapshot, path)
    return path


__all__ = [
    "GEOMETRIES",
    "TimelineSpec",
    "compare",
    "emit_case",
    "generate",
    "geometry_counts",
    "oracle_metrics",
]
