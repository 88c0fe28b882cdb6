"""Domain vocabulary shared by every other module.

Timestamps are timezone-aware ``datetime`` objects pinned to UTC and
durations are plain floats counting (fractional) days.
"""

from __future__ import annotations

import enum
import statistics
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Mapping, Optional, Sequence

SECONDS_PER_DAY = 86400.0


class MetricKind(str, enum.Enum):
    RELEASE_FREQUENCY = "ReleaseFrequency"
    LEAD_TIME = "LeadTimeForReleasedChanges"
    TIME_TO_REPAIR = "TimeToRepairCode"
    BUG_ISSUES_RATE = "BugIssuesRate"

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def is_time(self) -> bool:
        return self is not MetricKind.BUG_ISSUES_RATE


_LABELS = {
    MetricKind.RELEASE_FREQUENCY: "Release Frequency",
    MetricKind.LEAD_TIME: "Lead Time For Released Changes",
    MetricKind.TIME_TO_REPAIR: "Time To Repair Code",
    MetricKind.BUG_ISSUES_RATE: "Bug Issues Rate",
}

METRIC_ORDER = tuple(MetricKind)


class Status(str, enum.Enum):
    COMPUTED = "Computed"
    SINGLE_RELEASE = "SingleRelease"
    NO_DATA = "NoData"


class PerformanceLevel(enum.IntEnum):
    LOW = 0
    MEDIUM = 1
    HIGH = 2

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_label(cls, text: str) -> "PerformanceLevel":
        try:
            return cls[text.upper()]
        except KeyError:
            raise ValueError(f"unknown performance level {text!r}") from None


# -- timestamps -------------------------------------------------------------


def utc(value: datetime) -> datetime:
    """Return *value* as an aware UTC datetime; naive input is taken as UTC."""
    if value.tzinfo is None:
        return value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc)


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 date or datetime. Bare dates mean midnight UTC."""
    if not isinstance(text, str) or not text:
        raise ValueError(f"not an ISO-8601 timestamp: {text!r}")
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(raw)
    except ValueError:
        raise ValueError(f"not an ISO-8601 timestamp: {text!r}") from None
    return utc(parsed)


def format_timestamp(value: datetime) -> str:
    value = utc(value)
    base = value.strftime("%Y-%m-%dT%H:%M:%S")
    if value.microsecond:
        base += f".{value.microsecond:06d}"
    return base + "Z"


def duration_between(a: datetime, b: datetime) -> float:
    """Signed length of ``b - a`` in days."""
    return timedelta_days(b - a)


def timedelta_days(delta: timedelta) -> float:
    # exact integer microseconds first, so equal deltas give identical floats
    micros = (delta.days * 86400 + delta.seconds) * 1_000_000 + delta.microseconds
    return micros / (SECONDS_PER_DAY * 1_000_000)


def population_stats(samples: Sequence[float]) -> tuple[float, float]:
    """Mean and population standard deviation (divide by n).

    Uses exact rational arithmetic, so constant inputs give a standard
    deviation of exactly zero and the result does not depend on order.
    """
    if len(samples) == 0:
        raise ValueError("no samples")
    data = [float(x) for x in samples]
    return statistics.mean(data), statistics.pstdev(data)


# -- events -----------------------------------------------------------------


@dataclass(frozen=True)
class Period:
    start: datetime
    end: datetime

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", utc(self.start))
        object.__setattr__(self, "end", utc(self.end))
        if not self.start < self.end:
            raise ValueError("period start must precede its end")

    def __contains__(self, instant: datetime) -> bool:
        return self.start <= instant < self.end

    def length(self) -> float:
        return duration_between(self.start, self.end)


@dataclass(frozen=True)
class CommitEvent:
    sha: str
    committed_at: datetime

    def __post_init__(self) -> None:
        if not self.sha:
            raise ValueError("commit sha must be non-empty")
        object.__setattr__(self, "committed_at", utc(self.committed_at))


@dataclass(frozen=True)
class Release:
    identifier: str
    tag: str
    created_at: datetime
    published_at: datetime
    is_prerelease: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "identifier", str(self.identifier))
        object.__setattr__(self, "created_at", utc(self.created_at))
        object.__setattr__(self, "published_at", utc(self.published_at))

    @property
    def creation_key(self) -> tuple[datetime, str]:
        return (self.created_at, self.identifier)


@dataclass(frozen=True)
class Issue:
    number: int
    opened_at: datetime
    closed_at: Optional[datetime] = None
    labels: frozenset[str] = frozenset()
    is_pull_request: bool = False
    linked_commits: tuple[CommitEvent, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.number, int) or self.number <= 0:
            raise ValueError(f"issue number must be a positive integer, got {self.number!r}")
        object.__setattr__(self, "opened_at", utc(self.opened_at))
        if self.closed_at is not None:
            object.__setattr__(self, "closed_at", utc(self.closed_at))
            if self.closed_at < self.opened_at:
                raise ValueError(f"issue #{self.number} closed before it was opened")
        object.__setattr__(self, "labels", frozenset(self.labels))
        commits = tuple(sorted(self.linked_commits, key=lambda c: (c.committed_at, c.sha)))
        shas = [c.sha for c in commits]
        if len(set(shas)) != len(shas):
            raise ValueError(f"issue #{self.number} lists a commit twice")
        object.__setattr__(self, "linked_commits", commits)

    @property
    def last_commit_at(self) -> Optional[datetime]:
        return self.linked_commits[-1].committed_at if self.linked_commits else None


@dataclass(frozen=True)
class RepositorySnapshot:
    """Normalized event log of one repository.

    Construction sorts releases by creation (ties by identifier) and issues
    by opening time, and rejects duplicate identifiers.
    """

    repo: str
    fetched_at: datetime
    releases: tuple[Release, ...] = ()
    issues: tuple[Issue, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "fetched_at", utc(self.fetched_at))
        releases = tuple(sorted(self.releases, key=lambda r: r.creation_key))
        ids = [r.identifier for r in releases]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate release identifier")
        issues = tuple(sorted(self.issues, key=lambda i: (i.opened_at, i.number)))
        numbers = [i.number for i in issues]
        if len(set(numbers)) != len(numbers):
            raise ValueError("duplicate issue number")
        object.__setattr__(self, "releases", releases)
        object.__setattr__(self, "issues", issues)


# -- results ----------------------------------------------------------------


@dataclass(frozen=True)
class MetricResult:
    kind: MetricKind
    status: Status
    mean: Optional[float] = None
    std_dev: Optional[float] = None
    sample_count: int = 0
    samples: tuple[float, ...] = ()
    notes: tuple[str, ...] = ()

    @classmethod
    def no_data(cls, kind: MetricKind, *notes: str) -> "MetricResult":
        return cls(kind=kind, status=Status.NO_DATA, notes=tuple(notes))


@dataclass(frozen=True)
class BenchmarkReport:
    repo: str
    period: Period
    results: Mapping[MetricKind, MetricResult]
    levels: Mapping[MetricKind, PerformanceLevel]
    config_echo: Mapping[str, object] = field(default_factory=dict)
