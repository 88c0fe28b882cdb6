"""Seeded synthetic repository timelines.

Randomness comes from ``random.Random(seed)`` (Mersenne Twister) and every
timestamp is a whole second, so a seed replays to the same bytes anywhere.

Regular releases follow ``cadence_days`` plus uniform noise of
``cadence_jitter`` days; publication trails creation by
``publish_delay_days`` plus further jitter-driven noise, which is what lets
publication order invert creation order. Same-time release bursts are also
jitter-driven. Prereleases are extra releases dropped at random times, so
filtering them out leaves the regular cadence intact: with
``cadence_jitter == 0`` the non-prerelease publications are exactly evenly
spaced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from ossbench.model import CommitEvent, Issue, Period, Release, RepositorySnapshot

EPOCH = datetime(2022, 1, 1, tzinfo=timezone.utc)
MAX_RELEASES = 50
MAX_ISSUES = 500

BUG_LABEL = "bug"
NOISE_LABELS = ("enhancement", "Bug", "docs", "type:feature", "needs-triage")


@dataclass(frozen=True)
class TimelineSpec:
    seed: int
    release_count: tuple[int, int] = (0, 40)
    cadence_days: float = 6.0
    cadence_jitter: float = 4.0
    issue_count: tuple[int, int] = (0, 200)
    bug_probability: float = 0.4
    # (minimum lag, mean of the exponential extra lag) from opening to first commit
    commit_lag: tuple[float, float] = (0.5, 15.0)
    prerelease_probability: float = 0.15
    publish_delay_days: float = 1.0
    burst_probability: float = 0.1
    pull_request_probability: float = 0.1
    commit_probability: float = 0.75
    period_slice: tuple[float, float] = (0.3, 0.75)

    def __post_init__(self) -> None:
        lo, hi = self.release_count
        if not 0 <= lo <= hi <= MAX_RELEASES:
            raise ValueError(f"release_count must lie within 0..{MAX_RELEASES}")
        lo, hi = self.issue_count
        if not 0 <= lo <= hi <= MAX_ISSUES:
            raise ValueError(f"issue_count must lie within 0..{MAX_ISSUES}")
        if self.cadence_jitter < 0 or self.cadence_days <= 0:
            raise ValueError("cadence must be positive and jitter non-negative")
        for p in (
            self.bug_probability,
            self.prerelease_probability,
            self.burst_probability,
            self.pull_request_probability,
            self.commit_probability,
        ):
            if not 0.0 <= p <= 1.0:
                raise ValueError("probabilities must lie in [0, 1]")
        a, b = self.period_slice
        if not 0.0 <= a < b <= 1.0:
            raise ValueError("period_slice must be an increasing pair inside [0, 1]")


def _seconds(days: float) -> timedelta:
    return timedelta(seconds=round(days * 86400))


def generate(spec: TimelineSpec) -> tuple[RepositorySnapshot, Period]:
    rng = random.Random(spec.seed)
    jitter = spec.cadence_jitter

    releases: list[Release] = []
    n_regular = rng.randint(*spec.release_count)
    created = EPOCH
    for i in range(n_regular):
        if i:
            if jitter > 0 and rng.random() < spec.burst_probability:
                # same-day burst; half of them share the exact creation instant
                step = 0.0 if rng.random() < 0.5 else rng.uniform(0, 0.25)
            else:
                step = max(0.0, spec.cadence_days + rng.uniform(-jitter, jitter))
            created += _seconds(step)
        delay = spec.publish_delay_days + (rng.uniform(0, 2 * jitter) if jitter > 0 else 0.0)
        releases.append(
            Release(f"r{i:03d}", f"v1.{i}.0", created, created + _seconds(delay), False)
        )

    span_days = max(30.0, n_regular * spec.cadence_days + spec.publish_delay_days + 2 * jitter)
    end = EPOCH + _seconds(span_days)

    n_pre = sum(1 for _ in range(n_regular) if rng.random() < spec.prerelease_probability)
    n_pre = min(n_pre, MAX_RELEASES - n_regular)
    for j in range(n_pre):
        at = EPOCH + _seconds(rng.uniform(0, span_days))
        delay = spec.publish_delay_days + rng.uniform(0, 2 * jitter + 1)
        releases.append(Release(f"p{j:03d}", f"v1.{j}.0-rc.1", at, at + _seconds(delay), True))

    opened_times = sorted(
        EPOCH + _seconds(rng.uniform(-60.0, span_days))
        for _ in range(rng.randint(*spec.issue_count))
    )
    issues: list[Issue] = []
    for number, opened in enumerate(opened_times, start=1):
        labels = set()
        if rng.random() < spec.bug_probability:
            labels.add(BUG_LABEL)
        if rng.random() < 0.5:
            labels.add(rng.choice(NOISE_LABELS))
        is_pr = rng.random() < spec.pull_request_probability
        commits = []
        if rng.random() < spec.commit_probability:
            lo, mean_extra = spec.commit_lag
            t = opened + _seconds(lo + (rng.expovariate(1.0 / mean_extra) if mean_extra > 0 else 0.0))
            for k in range(rng.randint(1, 3)):
                if k:
                    t += _seconds(rng.expovariate(1 / 3.0))
                commits.append(CommitEvent(f"{number:04d}{k:02d}{rng.getrandbits(32):08x}", t))
        closed = None
        if commits and rng.random() < 0.8:
            closed = commits[-1].committed_at + _seconds(rng.uniform(0, 2))
        elif not commits and rng.random() < 0.3:
            closed = opened + _seconds(rng.uniform(0, 30))
        issues.append(
            Issue(number, opened, closed, frozenset(labels), is_pr, tuple(commits))
        )

    start_frac, end_frac = spec.period_slice
    period = Period(
        EPOCH + _seconds(span_days * start_frac),
        EPOCH + _seconds(span_days * end_frac),
    )
    snapshot = RepositorySnapshot(
        repo="synthetic/timeline",
        fetched_at=end + timedelta(days=30),
        releases=tuple(releases),
        issues=tuple(issues),
    )
    return snapshot, period
