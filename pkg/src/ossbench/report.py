"""Assemble benchmark reports and render them as json, csv or markdown."""

from __future__ import annotations

import csv
import io
import json
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Optional

from ossbench.classify import CALENDAR_NOTE, MetricBands, classify
from ossbench.metrics import EngineConfig, compute_all
from ossbench.model import (
    METRIC_ORDER,
    BenchmarkReport,
    MetricKind,
    MetricResult,
    Period,
    PerformanceLevel,
    RepositorySnapshot,
    Status,
    format_timestamp,
    parse_timestamp,
)

FORMATS = ("json", "csv", "markdown")


def build_report(
    snapshot: RepositorySnapshot,
    period: Period,
    config: EngineConfig,
    bands: Optional[Mapping[MetricKind, MetricBands]] = None,
) -> BenchmarkReport:
    results = compute_all(snapshot, period, config)
    levels = {}
    for kind, result in results.items():
        level = classify(result, bands)
        if level is not None:
            levels[kind] = level
    echo = dict(config.echo())
    echo["calendar"] = CALENDAR_NOTE
    return BenchmarkReport(snapshot.repo, period, results, levels, echo)


def round2(value: float) -> Decimal:
    """Half-up rounding to two decimals on the shortest decimal repr."""
    return Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)


def _fmt_days(value: Optional[float]) -> str:
    return "-" if value is None else f"{round2(value)} days"


def _fmt_mean(result: MetricResult) -> str:
    if result.mean is None:
        return "-"
    if result.kind is MetricKind.BUG_ISSUES_RATE:
        return f"{round2(result.mean * 100)} %"
    return _fmt_days(result.mean)


# -- json -------------------------------------------------------------------


def report_to_dict(report: BenchmarkReport) -> dict:
    metrics = []
    for kind in METRIC_ORDER:
        r = report.results[kind]
        level = report.levels.get(kind)
        metrics.append(
            {
                "kind": kind.value,
                "status": r.status.value,
                "mean": r.mean,
                "std_dev": r.std_dev,
                "sample_count": r.sample_count,
                "samples": list(r.samples),
                "level": None if level is None else level.label,
                "notes": list(r.notes),
            }
        )
    return {
        "repo": report.repo,
        "period": {
            "start": format_timestamp(report.period.start),
            "end": format_timestamp(report.period.end),
        },
        "config": dict(report.config_echo),
        "metrics": metrics,
    }


def report_from_json(text: str) -> BenchmarkReport:
    doc = json.loads(text)
    results = {}
    levels = {}
    for m in doc["metrics"]:
        kind = MetricKind(m["kind"])
        results[kind] = MetricResult(
            kind=kind,
            status=Status(m["status"]),
            mean=m["mean"],
            std_dev=m["std_dev"],
            sample_count=m["sample_count"],
            samples=tuple(m["samples"]),
            notes=tuple(m["notes"]),
        )
        if m["level"] is not None:
            levels[kind] = PerformanceLevel.from_label(m["level"])
    period = Period(parse_timestamp(doc["period"]["start"]), parse_timestamp(doc["period"]["end"]))
    return BenchmarkReport(doc["repo"], period, results, levels, doc["config"])


def render_json(report: BenchmarkReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n"


# -- human formats ----------------------------------------------------------


def _status_text(result: MetricResult) -> str:
    if result.status is Status.NO_DATA and result.notes:
        return f"{result.status.value} ({result.notes[0]})"
    return result.status.value


def render_csv(report: BenchmarkReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric", "status", "mean", "std_dev", "unit", "sample_count", "level"])
    for kind in METRIC_ORDER:
        r = report.results[kind]
        level = report.levels.get(kind)
        if kind is MetricKind.BUG_ISSUES_RATE:
            mean = "" if r.mean is None else str(round2(r.mean * 100))
            unit = "percent"
        else:
            mean = "" if r.mean is None else str(round2(r.mean))
            unit = "days"
        writer.writerow(
            [
                kind.value,
                r.status.value,
                mean,
                "" if r.std_dev is None else str(round2(r.std_dev)),
                unit,
                r.sample_count,
                "" if level is None else level.label,
            ]
        )
    return buf.getvalue()


def render_markdown(report: BenchmarkReport) -> str:
    lines = [
        f"# Benchmark: {report.repo}",
        "",
        f"Period: {format_timestamp(report.period.start)} to {format_timestamp(report.period.end)}",
        "",
        "| Metric | Mean | Std. dev. | Level | Status | Samples |",
        "|---|---|---|---|---|---|",
    ]
    for kind in METRIC_ORDER:
        r = report.results[kind]
        level = report.levels.get(kind)
        lines.append(
            "| "
            + " | ".join(
                [
                    kind.label,
                    _fmt_mean(r),
                    _fmt_days(r.std_dev),
                    "-" if level is None else level.label,
                    _status_text(r),
                    str(r.sample_count),
                ]
            )
            + " |"
        )
    lines += ["", "Configuration:", ""]
    for key in sorted(report.config_echo):
        value = report.config_echo[key]
        if isinstance(value, list):
            value = ", ".join(str(v) for v in value)
        lines.append(f"- {key}: {value}")
    notes = [
        (kind, note)
        for kind in METRIC_ORDER
        for note in report.results[kind].notes
        if report.results[kind].status is not Status.NO_DATA
    ]
    if notes:
        lines += ["", "Notes:", ""]
        lines += [f"- {kind.label}: {note}" for kind, note in notes]
    return "\n".join(lines) + "\n"


def render(report: BenchmarkReport, fmt: str) -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "csv":
        return render_csv(report)
    if fmt == "markdown":
        return render_markdown(report)
    raise ValueError(f"unknown format {fmt!r}")
