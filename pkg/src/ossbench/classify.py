"""Map metric means onto Low / Medium / High performance bands.

The default thresholds follow the 2022 DORA levels. DORA leaves gaps between
neighbouring bands; each gap is split at its midpoint. Anything past the
worst band is Low and anything past the best band is High.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from ossbench.model import MetricKind, MetricResult, PerformanceLevel, Status

MONTH_DAYS = 30
SIX_MONTHS_DAYS = 182

CALENDAR_NOTE = f"month = {MONTH_DAYS} days, six months = {SIX_MONTHS_DAYS} days"


@dataclass(frozen=True)
class Band:
    level: PerformanceLevel
    lower: float
    upper: float


@dataclass(frozen=True)
class MetricBands:
    """Contiguous bands, sorted by ``lower``.

    Time metrics use ``[lower, upper)`` intervals; rates use ``(lower, upper]``
    so that a rate of exactly 15 % still sits in the 0-15 % band.
    """

    bands: tuple[Band, ...]
    upper_inclusive: bool = False

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.bands, key=lambda b: b.lower))
        if not ordered:
            raise ValueError("band list is empty")
        for left, right in zip(ordered, ordered[1:]):
            if left.upper != right.lower:
                raise ValueError(
                    f"bands must be contiguous: {left.upper} does not meet {right.lower}"
                )
        object.__setattr__(self, "bands", ordered)

    def level_for(self, value: float) -> PerformanceLevel:
        # clamp to the outermost bands
        if value < self.bands[0].lower:
            return self.bands[0].level
        for band in self.bands:
            if self.upper_inclusive:
                if value <= band.upper:
                    return band.level
            elif value < band.upper:
                return band.level
        return self.bands[-1].level


H, M, L = PerformanceLevel.HIGH, PerformanceLevel.MEDIUM, PerformanceLevel.LOW
INF = math.inf

DEFAULT_BANDS: dict[MetricKind, MetricBands] = {
    # High is "multiple per day" (< 1 day), Medium starts at weekly (7):
    # the 1..7 day gap splits at 4.
    MetricKind.RELEASE_FREQUENCY: MetricBands(
        (Band(H, 0.0, 4.0), Band(M, 4.0, MONTH_DAYS), Band(L, MONTH_DAYS, INF))
    ),
    MetricKind.LEAD_TIME: MetricBands(
        (Band(H, 0.0, 7.0), Band(M, 7.0, MONTH_DAYS), Band(L, MONTH_DAYS, INF))
    ),
    MetricKind.TIME_TO_REPAIR: MetricBands(
        (Band(H, 0.0, 1.0), Band(M, 1.0, 7.0), Band(L, 7.0, INF))
    ),
    # 0-15 %, 16-30 %, 46-60 %: the 30..46 gap splits at 38
    MetricKind.BUG_ISSUES_RATE: MetricBands(
        (Band(H, 0.0, 0.15), Band(M, 0.15, 0.38), Band(L, 0.38, 1.0)),
        upper_inclusive=True,
    ),
}


def classify(
    result: MetricResult, bands: Optional[Mapping[MetricKind, MetricBands]] = None
) -> Optional[PerformanceLevel]:
    if result.status is Status.NO_DATA or result.mean is None:
        return None
    table = (bands or DEFAULT_BANDS)[result.kind]
    return table.level_for(result.mean)


def load_band_overrides(path: str | Path) -> dict[MetricKind, MetricBands]:
    """Read alternative thresholds from a JSON document.

    Shape::

        {"bands": {"BugIssuesRate": {"upper_inclusive": true,
                                     "bands": [["High", 0, 0.2], ...]}}}

    ``null`` bounds mean infinity. Metrics not mentioned keep the defaults.
    """
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or not isinstance(doc.get("bands"), dict):
        raise ValueError("band override file needs a top-level 'bands' object")
    table = dict(DEFAULT_BANDS)
    for name, spec in doc["bands"].items():
        try:
            kind = MetricKind(name)
        except ValueError:
            raise ValueError(f"unknown metric {name!r} in band overrides") from None
        rows = spec.get("bands") if isinstance(spec, dict) else spec
        if not isinstance(rows, list):
            raise ValueError(f"bands for {name} must be a list")
        parsed = []
        for row in rows:
            level, lower, upper = row
            parsed.append(
                Band(
                    PerformanceLevel.from_label(level),
                    -INF if lower is None else float(lower),
                    INF if upper is None else float(upper),
                )
            )
        inclusive = spec.get("upper_inclusive", not kind.is_time) if isinstance(spec, dict) else not kind.is_time
        table[kind] = MetricBands(tuple(parsed), upper_inclusive=bool(inclusive))
    return table
