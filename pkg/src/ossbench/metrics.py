"""The four delivery metrics computed over a snapshot and a period.

Every function here is pure: the same snapshot, period and config always
yield identical results.
"""

from __future__ import annotations

import bisect
import enum
import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable

from ossbench.model import (
    Issue,
    MetricKind,
    MetricResult,
    Period,
    Release,
    RepositorySnapshot,
    Status,
    duration_between,
    population_stats,
)

logger = logging.getLogger(__name__)

DEFAULT_BUG_LABELS = ("bug", "type:bug", "kind/bug")

NO_RELEASES_NOTE = "no release published in period: frequency longer than period"
SINGLE_RELEASE_NOTE = "single release in period: frequency approximated by period length"


@dataclass(frozen=True)
class EngineConfig:
    bug_labels: frozenset[str] = field(default_factory=lambda: frozenset(DEFAULT_BUG_LABELS))
    include_prereleases: bool = False
    exclude_pull_requests: bool = True

    def __post_init__(self) -> None:
        labels = frozenset(self.bug_labels)
        if not labels:
            raise ValueError("at least one bug label is required")
        object.__setattr__(self, "bug_labels", labels)

    def is_bug(self, issue: Issue) -> bool:
        return not self.bug_labels.isdisjoint(issue.labels)

    def counts_issue(self, issue: Issue) -> bool:
        return not (self.exclude_pull_requests and issue.is_pull_request)

    def counts_release(self, release: Release) -> bool:
        return self.include_prereleases or not release.is_prerelease

    def echo(self) -> dict:
        return {
            "bug_labels": sorted(self.bug_labels),
            "include_prereleases": self.include_prereleases,
            "exclude_pull_requests": self.exclude_pull_requests,
        }


class Anchor(enum.Enum):
    LAST_COMMIT = "LastCommit"
    ISSUE_OPENED = "IssueOpened"


@dataclass(frozen=True)
class AttributedChange:
    issue_number: int
    release_id: str
    anchor_time: datetime
    shipped_at: datetime

    @property
    def elapsed(self) -> float:
        return duration_between(self.anchor_time, self.shipped_at)


def eligible_releases(snapshot: RepositorySnapshot, config: EngineConfig) -> list[Release]:
    """All releases passing the prerelease filter, in creation order."""
    return [r for r in snapshot.releases if config.counts_release(r)]


def window_releases(
    snapshot: RepositorySnapshot, period: Period, config: EngineConfig
) -> list[Release]:
    """Releases published inside *period*, ordered by publication."""
    chosen = [r for r in eligible_releases(snapshot, config) if r.published_at in period]
    chosen.sort(key=lambda r: (r.published_at, r.created_at, r.identifier))
    return chosen


def release_frequency(
    snapshot: RepositorySnapshot, period: Period, config: EngineConfig
) -> MetricResult:
    kind = MetricKind.RELEASE_FREQUENCY
    window = window_releases(snapshot, period, config)
    if not window:
        return MetricResult.no_data(kind, NO_RELEASES_NOTE)
    if len(window) == 1:
        return MetricResult(
            kind=kind,
            status=Status.SINGLE_RELEASE,
            mean=period.length(),
            notes=(SINGLE_RELEASE_NOTE,),
        )
    gaps = tuple(
        duration_between(prev.published_at, cur.published_at)
        for prev, cur in zip(window, window[1:])
    )
    mean, sd = population_stats(gaps)
    return MetricResult(kind, Status.COMPUTED, mean, sd, len(gaps), gaps)


def attribute_changes(
    snapshot: RepositorySnapshot,
    period: Period,
    config: EngineConfig,
    anchor: Anchor,
    bug_only: bool,
) -> list[AttributedChange]:
    """Bind issues to the in-period release whose creation interval holds
    their last linked commit.

    A release owns ``(created_at(predecessor), created_at(release)]`` where
    the predecessor is the previous release in creation order; the oldest
    release's interval is unbounded below. Commits from before the period
    still count. The ship time is the owning release's publication.
    """
    ordered = eligible_releases(snapshot, config)
    in_window = {r.identifier for r in window_releases(snapshot, period, config)}
    if not in_window:
        return []
    boundaries = [r.created_at for r in ordered]

    changes = []
    for issue in snapshot.issues:
        if not config.counts_issue(issue):
            continue
        if bug_only and not config.is_bug(issue):
            continue
        last_commit = issue.last_commit_at
        if last_commit is None:
            continue
        # first release created at or after the last commit owns it
        pos = bisect.bisect_left(boundaries, last_commit)
        if pos == len(ordered):
            continue
        owner = ordered[pos]
        if owner.identifier not in in_window:
            continue
        anchor_time = last_commit if anchor is Anchor.LAST_COMMIT else issue.opened_at
        changes.append(
            AttributedChange(issue.number, owner.identifier, anchor_time, owner.published_at)
        )
    return changes


def _elapsed_result(kind: MetricKind, changes: Iterable[AttributedChange], empty_note: str):
    changes = list(changes)
    if not changes:
        return MetricResult.no_data(kind, empty_note)
    samples = tuple(c.elapsed for c in changes)
    notes = []
    for change, value in zip(changes, samples):
        if value < 0:
            msg = (
                f"issue #{change.issue_number}: release {change.release_id} published "
                f"{-value:.2f} days before its anchor"
            )
            logger.warning("%s: %s", kind.value, msg)
            notes.append(msg)
    mean, sd = population_stats(samples)
    return MetricResult(kind, Status.COMPUTED, mean, sd, len(samples), samples, tuple(notes))


def lead_time_for_released_changes(
    snapshot: RepositorySnapshot, period: Period, config: EngineConfig
) -> MetricResult:
    changes = attribute_changes(snapshot, period, config, Anchor.LAST_COMMIT, bug_only=False)
    return _elapsed_result(
        MetricKind.LEAD_TIME, changes, "no issue changes released in period"
    )


def time_to_repair_code(
    snapshot: RepositorySnapshot, period: Period, config: EngineConfig
) -> MetricResult:
    changes = attribute_changes(snapshot, period, config, Anchor.ISSUE_OPENED, bug_only=True)
    return _elapsed_result(
        MetricKind.TIME_TO_REPAIR, changes, "no bug fixes released in period"
    )


def bug_issues_rate(
    snapshot: RepositorySnapshot, period: Period, config: EngineConfig
) -> MetricResult:
    kind = MetricKind.BUG_ISSUES_RATE
    opened = [i for i in snapshot.issues if config.counts_issue(i) and i.opened_at in period]
    if not opened:
        return MetricResult.no_data(kind, "no issues opened in period")
    flags = tuple(1.0 if config.is_bug(i) else 0.0 for i in opened)
    bugs = sum(1 for f in flags if f)
    return MetricResult(kind, Status.COMPUTED, bugs / len(opened), None, len(opened), flags)


def compute_all(
    snapshot: RepositorySnapshot, period: Period, config: EngineConfig
) -> dict[MetricKind, MetricResult]:
    return {
        MetricKind.RELEASE_FREQUENCY: release_frequency(snapshot, period, config),
        MetricKind.LEAD_TIME: lead_time_for_released_changes(snapshot, period, config),
        MetricKind.TIME_TO_REPAIR: time_to_repair_code(snapshot, period, config),
        MetricKind.BUG_ISSUES_RATE: bug_issues_rate(snapshot, period, config),
    }
