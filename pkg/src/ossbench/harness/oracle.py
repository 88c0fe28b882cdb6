"""Brute-force reference evaluator for differential testing.

Deliberately naive and self-contained: each metric is a literal loop over
the raw events, with its own windowing, predecessor search and statistics.
Nothing here may be shared with ``ossbench.metrics``, otherwise the
differential test checks the engine against itself.
"""

from __future__ import annotations

import math
from collections import Counter

from ossbench.model import MetricKind, MetricResult, Status


def _days(delta) -> float:
    return delta.total_seconds() / 86400.0


def _mean_sd(values):
    n = len(values)
    total = 0.0
    for v in values:
        total += v
    mean = total / n
    sq = 0.0
    for v in values:
        sq += (v - mean) ** 2
    return mean, math.sqrt(sq / n)


def _releases(snapshot, config):
    out = []
    for r in snapshot.releases:
        if r.is_prerelease and not config.include_prereleases:
            continue
        out.append(r)
    return out


def _published_in(r, period):
    return period.start <= r.published_at and r.published_at < period.end


def _predecessor(release, releases):
    """Latest release strictly before *release* in (created_at, id) order."""
    best = None
    for other in releases:
        if other is release:
            continue
        before = other.created_at < release.created_at or (
            other.created_at == release.created_at and other.identifier < release.identifier
        )
        if not before:
            continue
        if best is None or (other.created_at, other.identifier) > (best.created_at, best.identifier):
            best = other
    return best


def _last_commit(issue):
    last = None
    for c in issue.linked_commits:
        if last is None or c.committed_at > last:
            last = c.committed_at
    return last


def owning_release(issue, releases, period):
    """The in-period release whose creation interval holds the last commit."""
    t = _last_commit(issue)
    if t is None:
        return None
    hits = []
    for r in releases:
        if not _published_in(r, period):
            continue
        prev = _predecessor(r, releases)
        lower_ok = prev is None or prev.created_at < t
        if lower_ok and t <= r.created_at:
            hits.append(r)
    if len(hits) > 1:
        raise AssertionError(f"issue #{issue.number} falls in {len(hits)} intervals")
    return hits[0] if hits else None


def _skip(issue, config):
    return config.exclude_pull_requests and issue.is_pull_request


def _is_bug(issue, config):
    for label in issue.labels:
        if label in config.bug_labels:
            return True
    return False


def _timed(kind, samples):
    if not samples:
        return MetricResult(kind, Status.NO_DATA)
    mean, sd = _mean_sd(samples)
    return MetricResult(kind, Status.COMPUTED, mean, sd, len(samples), tuple(samples))


def oracle_metrics(snapshot, period, config) -> dict[MetricKind, MetricResult]:
    releases = _releases(snapshot, config)
    results = {}

    # release frequency
    published = sorted(r.published_at for r in releases if _published_in(r, period))
    kind = MetricKind.RELEASE_FREQUENCY
    if len(published) == 0:
        results[kind] = MetricResult(kind, Status.NO_DATA)
    elif len(published) == 1:
        results[kind] = MetricResult(
            kind, Status.SINGLE_RELEASE, _days(period.end - period.start)
        )
    else:
        gaps = [_days(published[i + 1] - published[i]) for i in range(len(published) - 1)]
        results[kind] = _timed(kind, gaps)

    # lead time and time to repair
    lead, repair = [], []
    for issue in snapshot.issues:
        if _skip(issue, config):
            continue
        owner = owning_release(issue, releases, period)
        if owner is None:
            continue
        lead.append(_days(owner.published_at - _last_commit(issue)))
        if _is_bug(issue, config):
            repair.append(_days(owner.published_at - issue.opened_at))
    results[MetricKind.LEAD_TIME] = _timed(MetricKind.LEAD_TIME, lead)
    results[MetricKind.TIME_TO_REPAIR] = _timed(MetricKind.TIME_TO_REPAIR, repair)

    # bug issues rate
    opened = 0
    bugs = 0
    for issue in snapshot.issues:
        if _skip(issue, config):
            continue
        if period.start <= issue.opened_at < period.end:
            opened += 1
            if _is_bug(issue, config):
                bugs += 1
    kind = MetricKind.BUG_ISSUES_RATE
    if opened == 0:
        results[kind] = MetricResult(kind, Status.NO_DATA)
    else:
        results[kind] = MetricResult(kind, Status.COMPUTED, bugs / opened, None, opened)
    return results


def compare(engine, oracle, tol: float = 1e-9) -> list[str]:
    """Human-readable mismatches between two metric maps (empty when they agree)."""
    problems = []
    for kind in MetricKind:
        a, b = engine[kind], oracle[kind]
        if a.status is not b.status:
            problems.append(f"{kind.value}: status {a.status.value} != {b.status.value}")
            continue
        if a.status is Status.COMPUTED and a.sample_count != b.sample_count:
            problems.append(f"{kind.value}: sample_count {a.sample_count} != {b.sample_count}")
        for name in ("mean", "std_dev"):
            x, y = getattr(a, name), getattr(b, name)
            if (x is None) != (y is None):
                problems.append(f"{kind.value}: {name} presence differs")
            elif x is not None and abs(x - y) > tol:
                problems.append(f"{kind.value}: {name} {x!r} != {y!r}")
    return problems


# names of the boundary geometries the generated corpus must exercise
GEOMETRIES = (
    "created_before_published_in",
    "created_in_published_after",
    "shared_release",
    "commits_span_release",
    "publication_inverted",
    "commit_before_period",
    "commit_after_last_release",
    "bug_included_and_excluded",
)


def geometry_counts(snapshot, period, config) -> Counter:
    """Count occurrences of each scenario geometry in one snapshot."""
    counts: Counter = Counter()
    releases = _releases(snapshot, config)
    in_window = [r for r in releases if _published_in(r, period)]
    for r in in_window:
        if r.created_at < period.start:
            counts["created_before_published_in"] += 1
    for r in releases:
        if period.start <= r.created_at < period.end and r.published_at >= period.end:
            counts["created_in_published_after"] += 1
    if not in_window:
        return counts
    newest_created = max(r.created_at for r in in_window)

    per_release: Counter = Counter()
    bug_in = bug_out = 0
    for issue in snapshot.issues:
        if _skip(issue, config):
            continue
        t = _last_commit(issue)
        if t is None:
            continue
        owner = owning_release(issue, releases, period)
        if owner is None:
            if t > newest_created:
                counts["commit_after_last_release"] += 1
                if _is_bug(issue, config):
                    bug_out += 1
            continue
        per_release[owner.identifier] += 1
        if _is_bug(issue, config) and t < period.start:
            bug_in += 1
        if t < period.start:
            counts["commit_before_period"] += 1
        first = min(c.committed_at for c in issue.linked_commits)
        prev = _predecessor(owner, releases)
        if prev is not None and first <= prev.created_at:
            counts["commits_span_release"] += 1
        for other in in_window:
            if other.created_at > owner.created_at and other.published_at < owner.published_at:
                counts["publication_inverted"] += 1
                break
    if any(n >= 2 for n in per_release.values()):
        counts["shared_release"] += 1
    if bug_in and bug_out:
        counts["bug_included_and_excluded"] += 1
    return counts
