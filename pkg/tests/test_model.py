import math
from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ossbench.model import (
    CommitEvent,
    Issue,
    Period,
    PerformanceLevel,
    Release,
    RepositorySnapshot,
    duration_between,
    format_timestamp,
    parse_timestamp,
    population_stats,
)

from conftest import day

UTC = timezone.utc


def brute_stats(xs):
    n = len(xs)
    m = sum(xs) / n
    return m, math.sqrt(sum((x - m) ** 2 for x in xs) / n)


def test_duration_exact_week():
    assert duration_between(parse_timestamp("2022-07-01T00:00:00Z"), parse_timestamp("2022-07-08T00:00:00Z")) == 7.0


def test_duration_identity_and_half_day():
    t = parse_timestamp("2022-07-01T00:00:00Z")
    assert duration_between(t, t) == 0.0
    assert duration_between(t, parse_timestamp("2022-07-01T12:00:00Z")) == 0.5


@given(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9))
def test_duration_antisymmetric(a, b):
    ta = day(0) + timedelta(seconds=a)
    tb = day(0) + timedelta(seconds=b)
    assert duration_between(ta, tb) == -duration_between(tb, ta)


@pytest.mark.parametrize(
    "samples, mean, sd",
    [
        ([7, 7, 7], 7.0, 0.0),
        ([5], 5.0, 0.0),
    ],
)
def test_population_stats_trivial(samples, mean, sd):
    assert population_stats(samples) == (mean, sd)


def test_population_stats_against_brute_force():
    m, sd = brute_stats([2.0, 4.0, 9.0])
    assert sd == pytest.approx(2.9439, abs=1e-4)
    got = population_stats([2, 4, 9])
    assert got[0] == pytest.approx(m, abs=1e-12)
    assert got[1] == pytest.approx(sd, abs=1e-12)


def test_population_stats_empty():
    with pytest.raises(ValueError, match="no samples"):
        population_stats([])


finite = st.floats(-1e4, 1e4, allow_nan=False)


@given(st.lists(finite, min_size=1, max_size=40), st.randoms())
def test_population_stats_order_independent(xs, rnd):
    shuffled = list(xs)
    rnd.shuffle(shuffled)
    assert population_stats(xs) == population_stats(shuffled)


@given(st.lists(finite, min_size=1, max_size=40))
def test_zero_sd_iff_all_equal(xs):
    _, sd = population_stats(xs)
    assert sd >= 0
    if len(set(xs)) == 1:
        assert sd == 0
    if sd == 0:
        assert max(xs) - min(xs) <= 1e-9


@given(finite, st.integers(1, 60))
def test_constant_samples_give_exact_zero(x, n):
    assert population_stats([x] * n) == (x, 0.0)


def test_timestamp_parsing():
    assert parse_timestamp("2022-07-01") == datetime(2022, 7, 1, tzinfo=UTC)
    assert parse_timestamp("2022-07-01T02:00:00+02:00") == datetime(2022, 7, 1, tzinfo=UTC)
    assert format_timestamp(datetime(2022, 7, 1, 3, 4, 5)) == "2022-07-01T03:04:05Z"
    assert format_timestamp(datetime(2022, 7, 1, 0, 0, 0, 1500, tzinfo=UTC)) == "2022-07-01T00:00:00.001500Z"
    with pytest.raises(ValueError):
        parse_timestamp("July 1st")


def test_period_half_open():
    p = Period(day(0), day(10))
    assert day(0) in p
    assert day(9.999) in p
    assert day(10) not in p
    assert p.length() == 10.0
    with pytest.raises(ValueError):
        Period(day(1), day(1))


def test_issue_invariants():
    with pytest.raises(ValueError):
        Issue(1, day(5), closed_at=day(4))
    with pytest.raises(ValueError):
        Issue(0, day(5))
    with pytest.raises(ValueError):
        Issue(1, day(0), linked_commits=(CommitEvent("a", day(1)), CommitEvent("a", day(2))))
    issue = Issue(1, day(0), linked_commits=(CommitEvent("b", day(3)), CommitEvent("a", day(1))))
    assert [c.sha for c in issue.linked_commits] == ["a", "b"]
    assert issue.last_commit_at == day(3)


def test_snapshot_sorting_and_tie_break():
    snap = RepositorySnapshot(
        "o/n",
        day(100),
        releases=(
            Release("b", "t2", day(1), day(2)),
            Release("a", "t1", day(1), day(3)),
            Release("c", "t0", day(0), day(1)),
        ),
        issues=(Issue(2, day(5)), Issue(1, day(3))),
    )
    assert [r.identifier for r in snap.releases] == ["c", "a", "b"]
    assert [i.number for i in snap.issues] == [1, 2]
    with pytest.raises(ValueError):
        RepositorySnapshot("o/n", day(0), releases=(Release("a", "x", day(0), day(0)),) * 2)


def test_performance_level_order():
    assert PerformanceLevel.LOW < PerformanceLevel.MEDIUM < PerformanceLevel.HIGH
    assert PerformanceLevel.from_label("medium") is PerformanceLevel.MEDIUM
